#pragma once

#include "vndn/geo.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vndn::ndn {

class NameError : public std::invalid_argument {
public:
  enum class Code { EmptyName, InvalidComponent };

  NameError(Code code, const std::string& what)
    : std::invalid_argument(what)
    , m_code(code)
  {
  }

  Code code() const { return m_code; }

private:
  Code m_code;
};

/// Hierarchical data name. Always holds at least one non-empty component.
class Name {
public:
  explicit Name(std::vector<std::string> components)
    : m_components(std::move(components))
  {
    if (m_components.empty()) {
      throw NameError(NameError::Code::EmptyName, "name has no components");
    }
    for (const auto& c : m_components) check_component(c);
  }

  /// Splits on '/'. One leading and one trailing '/' are tolerated.
  static Name parse(std::string_view text)
  {
    if (!text.empty() && text.front() == '/') text.remove_prefix(1);
    if (!text.empty() && text.back() == '/') text.remove_suffix(1);
    if (text.empty()) {
      throw NameError(NameError::Code::EmptyName, "name has no components");
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      auto pos = text.find('/', start);
      auto part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      if (part.empty()) {
        throw NameError(NameError::Code::InvalidComponent, "empty name component");
      }
      parts.emplace_back(part);
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return Name(std::move(parts));
  }

  const std::vector<std::string>& components() const { return m_components; }
  std::size_t size() const { return m_components.size(); }
  const std::string& operator[](std::size_t i) const { return m_components[i]; }

  std::string to_uri() const
  {
    std::string s;
    for (const auto& c : m_components) {
      s += '/';
      s += c;
    }
    return s;
  }

  Name append(std::string component) const
  {
    check_component(component);
    auto comps = m_components;
    comps.push_back(std::move(component));
    return Name(std::move(comps));
  }

  /// All components but the last. Throws EmptyName on a single-component name.
  Name parent() const
  {
    return Name(std::vector<std::string>(m_components.begin(), m_components.end() - 1));
  }

  bool is_prefix_of(const Name& other) const
  {
    if (size() > other.size()) return false;
    return std::equal(m_components.begin(), m_components.end(), other.m_components.begin());
  }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name& a, const Name& b) { return a.m_components <=> b.m_components; }

private:
  static void check_component(const std::string& c)
  {
    if (c.empty() || c.find('/') != std::string::npos) {
      throw NameError(NameError::Code::InvalidComponent, "invalid name component '" + c + "'");
    }
  }

  std::vector<std::string> m_components;
};

inline Name parse_name(std::string_view text) { return Name::parse(text); }

inline std::ostream& operator<<(std::ostream& os, const Name& n) { return os << n.to_uri(); }

/// The point of the first component that names an intersection, if any.
inline std::optional<geo::GeoPoint> geo_hint(const Name& name, const geo::RoadGraph& graph)
{
  for (const auto& c : name.components()) {
    if (auto id = graph.find_label(c)) return graph.intersection(*id).point;
  }
  return std::nullopt;
}

/// Label of the first component that names an intersection, if any.
inline std::optional<std::string> geo_label(const Name& name, const geo::RoadGraph& graph)
{
  for (const auto& c : name.components()) {
    if (graph.find_label(c)) return c;
  }
  return std::nullopt;
}

} // namespace vndn::ndn
