#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace vndn {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Simulated time since scenario start. Never wall-clock.
using SimTime = std::chrono::nanoseconds;
using Duration = std::chrono::nanoseconds;

constexpr SimTime from_seconds(double s)
{
  return SimTime{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))};
}

constexpr double to_seconds(SimTime t)
{
  return static_cast<double>(t.count()) / 1e9;
}

constexpr Duration from_millis(double ms)
{
  return from_seconds(ms / 1000.0);
}

/// Integer identifier distinguished at compile time by its tag.
template <class Tag, class Rep = std::uint64_t>
class StrongId {
public:
  using rep_type = Rep;

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep v)
    : m_value(v)
  {
  }

  constexpr Rep value() const { return m_value; }

  friend constexpr auto operator<=>(const StrongId&, const StrongId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.m_value; }

private:
  Rep m_value{};
};

struct NodeIdTag {};
struct FaceIdTag {};
struct IntersectionIdTag {};
struct SegmentIdTag {};

using NodeId = StrongId<NodeIdTag>;
using FaceId = StrongId<FaceIdTag, std::uint32_t>;
using IntersectionId = StrongId<IntersectionIdTag, std::int64_t>;
using SegmentId = StrongId<SegmentIdTag, std::int64_t>;

// Big-endian helpers shared by the packet and frame codecs.
namespace be {

inline void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

template <class T>
void put(Bytes& out, T v)
{
  for (int shift = (sizeof(T) - 1) * 8; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> shift) & 0xff));
  }
}

template <class T>
T get(ByteView in, std::size_t offset)
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v = (v << 8) | in[offset + i];
  }
  return static_cast<T>(v);
}

} // namespace be

inline std::string to_hex(ByteView bytes)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

inline Bytes from_hex(std::string_view hex)
{
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  int hi = -1;
  for (char c : hex) {
    int n = nibble(c);
    if (n < 0) continue;
    if (hi < 0) {
      hi = n;
    }
    else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | n));
      hi = -1;
    }
  }
  return out;
}

} // namespace vndn

template <class Tag, class Rep>
struct std::hash<vndn::StrongId<Tag, Rep>> {
  std::size_t operator()(const vndn::StrongId<Tag, Rep>& id) const noexcept
  {
    return std::hash<Rep>{}(id.value());
  }
};
