#pragma once

// Location services: planar points, the road graph, reverse geocoding and
// classification of the roads stemming from an intersection.

#include "vndn/common.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vndn::geo {

/// Planar local coordinates in meters.
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline GeoPoint operator-(GeoPoint a, GeoPoint b) { return {a.x - b.x, a.y - b.y}; }
inline GeoPoint operator+(GeoPoint a, GeoPoint b) { return {a.x + b.x, a.y + b.y}; }
inline GeoPoint operator*(double k, GeoPoint a) { return {k * a.x, k * a.y}; }

inline double distance(GeoPoint a, GeoPoint b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dot(GeoPoint a, GeoPoint b) { return a.x * b.x + a.y * b.y; }

class GeoError : public std::runtime_error {
public:
  enum class Code { EmptyGraph, UnknownIntersection, IsolatedIntersection, Invalid };

  GeoError(Code code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  Code code() const { return m_code; }

private:
  Code m_code;
};

struct Intersection {
  IntersectionId id;
  std::string label;
  GeoPoint point;
};

struct Segment {
  SegmentId id;
  IntersectionId a;
  IntersectionId b;
  int lanes = 2;
  double speed_limit = 11.18; // m/s
};

/// Intersections and the road segments between them. Immutable once built.
class RoadGraph {
public:
  RoadGraph() = default;

  /// Validates every invariant; throws GeoError{Invalid} naming the offending field.
  RoadGraph(std::vector<Intersection> intersections, std::vector<Segment> segments)
    : m_intersections(std::move(intersections))
    , m_segments(std::move(segments))
  {
    std::set<std::string> labels;
    for (std::size_t i = 0; i < m_intersections.size(); ++i) {
      const auto& in = m_intersections[i];
      auto field = "intersections[" + std::to_string(i) + "]";
      if (!m_index.emplace(in.id, i).second) {
        throw GeoError(GeoError::Code::Invalid, field + ".id: duplicate intersection id");
      }
      if (in.label.empty() || in.label.find('/') != std::string::npos) {
        throw GeoError(GeoError::Code::Invalid, field + ".label: must be non-empty without '/'");
      }
      if (!labels.insert(in.label).second) {
        throw GeoError(GeoError::Code::Invalid, field + ".label: duplicate label '" + in.label + "'");
      }
      if (!std::isfinite(in.point.x) || !std::isfinite(in.point.y)) {
        throw GeoError(GeoError::Code::Invalid, field + ": coordinates must be finite");
      }
    }
    std::set<SegmentId> seg_ids;
    for (std::size_t i = 0; i < m_segments.size(); ++i) {
      const auto& s = m_segments[i];
      auto field = "segments[" + std::to_string(i) + "]";
      if (!seg_ids.insert(s.id).second) {
        throw GeoError(GeoError::Code::Invalid, field + ".id: duplicate segment id");
      }
      if (!m_index.contains(s.a) || !m_index.contains(s.b)) {
        throw GeoError(GeoError::Code::Invalid, field + ": endpoint references unknown intersection");
      }
      if (s.a == s.b) {
        throw GeoError(GeoError::Code::Invalid, field + ": endpoints must differ");
      }
      if (s.lanes < 1) {
        throw GeoError(GeoError::Code::Invalid, field + ".lanes: must be >= 1");
      }
      if (!(s.speed_limit > 0)) {
        throw GeoError(GeoError::Code::Invalid, field + ".speed_limit: must be > 0");
      }
      m_incident[s.a].push_back(i);
      m_incident[s.b].push_back(i);
    }
  }

  bool empty() const { return m_intersections.empty(); }
  const std::vector<Intersection>& intersections() const { return m_intersections; }
  const std::vector<Segment>& segments() const { return m_segments; }

  const Intersection& intersection(IntersectionId id) const
  {
    auto it = m_index.find(id);
    if (it == m_index.end()) {
      throw GeoError(GeoError::Code::UnknownIntersection,
                     "unknown intersection " + std::to_string(id.value()));
    }
    return m_intersections[it->second];
  }

  std::optional<IntersectionId> find_label(std::string_view label) const
  {
    for (const auto& in : m_intersections) {
      if (in.label == label) return in.id;
    }
    return std::nullopt;
  }

  /// Segments touching an intersection, ordered by position in the segment list.
  std::vector<const Segment*> incident(IntersectionId id) const
  {
    intersection(id); // validates
    std::vector<const Segment*> out;
    if (auto it = m_incident.find(id); it != m_incident.end()) {
      for (auto idx : it->second) out.push_back(&m_segments[idx]);
    }
    return out;
  }

  friend bool operator==(const RoadGraph& a, const RoadGraph& b)
  {
    auto same_in = std::equal(a.m_intersections.begin(), a.m_intersections.end(),
                              b.m_intersections.begin(), b.m_intersections.end(),
                              [](const Intersection& x, const Intersection& y) {
                                return x.id == y.id && x.label == y.label && x.point == y.point;
                              });
    auto same_seg = std::equal(a.m_segments.begin(), a.m_segments.end(), b.m_segments.begin(),
                               b.m_segments.end(), [](const Segment& x, const Segment& y) {
                                 return x.id == y.id && x.a == y.a && x.b == y.b &&
                                        x.lanes == y.lanes && x.speed_limit == y.speed_limit;
                               });
    return same_in && same_seg;
  }

private:
  std::vector<Intersection> m_intersections;
  std::vector<Segment> m_segments;
  std::map<IntersectionId, std::size_t> m_index;
  std::map<IntersectionId, std::vector<std::size_t>> m_incident;
};

/// Argmin of distance to p; ties go to the lowest intersection id.
inline IntersectionId nearest_intersection(const RoadGraph& graph, GeoPoint p)
{
  if (graph.empty()) {
    throw GeoError(GeoError::Code::EmptyGraph, "road graph has no intersections");
  }
  const Intersection* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& in : graph.intersections()) {
    double d = distance(p, in.point);
    if (d < best_d || (d == best_d && in.id < best->id)) {
      best = &in;
      best_d = d;
    }
  }
  return best->id;
}

inline const std::string& reverse_geocode(const RoadGraph& graph, GeoPoint p)
{
  return graph.intersection(nearest_intersection(graph, p)).label;
}

/// One direction per incident segment, identified by the segment id.
inline std::set<SegmentId> roads_at(const RoadGraph& graph, IntersectionId id)
{
  std::set<SegmentId> out;
  for (const auto* s : graph.incident(id)) out.insert(s->id);
  return out;
}

/// The incident road whose outgoing unit vector best aligns with p - center.
/// Ties (including p at the center) resolve to the lowest segment id.
inline SegmentId direction_of(const RoadGraph& graph, IntersectionId id, GeoPoint p)
{
  const auto& center = graph.intersection(id);
  auto segs = graph.incident(id);
  if (segs.empty()) {
    throw GeoError(GeoError::Code::IsolatedIntersection,
                   "intersection " + std::to_string(id.value()) + " has no roads");
  }
  GeoPoint offset = p - center.point;
  const Segment* best = nullptr;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (const auto* s : segs) {
    auto other = graph.intersection(s->a == id ? s->b : s->a).point;
    GeoPoint dir = other - center.point;
    double len = std::hypot(dir.x, dir.y);
    double d = len > 0 ? dot(dir, offset) / len : 0.0;
    if (d > best_dot || (d == best_dot && s->id < best->id)) {
      best = s;
      best_dot = d;
    }
  }
  return best->id;
}

// JSON form: {"intersections":[{id,label,x,y}], "segments":[{id,a,b,lanes,speed_limit}]}

inline nlohmann::json to_json(const RoadGraph& graph)
{
  nlohmann::json j;
  j["intersections"] = nlohmann::json::array();
  for (const auto& in : graph.intersections()) {
    j["intersections"].push_back(
      {{"id", in.id.value()}, {"label", in.label}, {"x", in.point.x}, {"y", in.point.y}});
  }
  j["segments"] = nlohmann::json::array();
  for (const auto& s : graph.segments()) {
    j["segments"].push_back({{"id", s.id.value()},
                             {"a", s.a.value()},
                             {"b", s.b.value()},
                             {"lanes", s.lanes},
                             {"speed_limit", s.speed_limit}});
  }
  return j;
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& path)
{
  if (!obj.is_object() || !obj.contains(key)) {
    throw GeoError(GeoError::Code::Invalid, path + "." + key + ": missing");
  }
  return obj.at(key);
}

template <class T>
T number(const nlohmann::json& obj, const char* key, const std::string& path)
{
  const auto& v = require(obj, key, path);
  if (!v.is_number()) {
    throw GeoError(GeoError::Code::Invalid, path + "." + key + ": expected a number");
  }
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw GeoError(GeoError::Code::Invalid, path + "." + key + ": expected an integer");
    }
  }
  return v.get<T>();
}

inline std::size_t line_of(std::string_view text, std::size_t byte)
{
  return 1 + static_cast<std::size_t>(
               std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

} // namespace detail

inline RoadGraph road_graph_from_json(const nlohmann::json& j)
{
  if (!j.is_object()) throw GeoError(GeoError::Code::Invalid, "road graph: expected an object");
  std::vector<Intersection> ins;
  std::vector<Segment> segs;
  const auto& ji = detail::require(j, "intersections", "$");
  if (!ji.is_array()) throw GeoError(GeoError::Code::Invalid, "$.intersections: expected an array");
  for (std::size_t i = 0; i < ji.size(); ++i) {
    auto path = "intersections[" + std::to_string(i) + "]";
    const auto& e = ji[i];
    const auto& label = detail::require(e, "label", path);
    if (!label.is_string()) throw GeoError(GeoError::Code::Invalid, path + ".label: expected a string");
    ins.push_back({IntersectionId{detail::number<std::int64_t>(e, "id", path)}, label.get<std::string>(),
                   GeoPoint{detail::number<double>(e, "x", path), detail::number<double>(e, "y", path)}});
  }
  if (ins.empty()) {
    throw GeoError(GeoError::Code::Invalid, "intersections: at least one intersection required");
  }
  if (j.contains("segments")) {
    const auto& js = j.at("segments");
    if (!js.is_array()) throw GeoError(GeoError::Code::Invalid, "$.segments: expected an array");
    for (std::size_t i = 0; i < js.size(); ++i) {
      auto path = "segments[" + std::to_string(i) + "]";
      const auto& e = js[i];
      Segment s;
      s.id = SegmentId{detail::number<std::int64_t>(e, "id", path)};
      s.a = IntersectionId{detail::number<std::int64_t>(e, "a", path)};
      s.b = IntersectionId{detail::number<std::int64_t>(e, "b", path)};
      if (e.contains("lanes")) s.lanes = detail::number<int>(e, "lanes", path);
      if (e.contains("speed_limit")) s.speed_limit = detail::number<double>(e, "speed_limit", path);
      segs.push_back(s);
    }
  }
  return RoadGraph(std::move(ins), std::move(segs));
}

/// Loads and validates a road graph file. Syntax errors report the line.
inline RoadGraph load_road_graph(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw GeoError(GeoError::Code::Invalid, path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  auto text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e) {
    throw GeoError(GeoError::Code::Invalid,
                   path + ":" + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  try {
    return road_graph_from_json(j);
  }
  catch (const GeoError& e) {
    throw GeoError(e.code(), path + ": " + e.what());
  }
}

} // namespace vndn::geo
