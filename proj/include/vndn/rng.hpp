#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vndn {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace detail

/// Seeded generator with distribution helpers whose output does not depend on
/// the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0)
    : m_engine(seed)
  {
  }

  /// Independent stream derived from a run seed, a stream label and an index
  /// (typically a node id), so that adding a node leaves other streams intact.
  static Rng substream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
  {
    std::uint64_t s = detail::splitmix64(seed);
    s = detail::splitmix64(s ^ detail::fnv1a(label));
    s = detail::splitmix64(s ^ index);
    return Rng{s};
  }

  std::uint64_t next_u64() { return m_engine(); }

  /// Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform01() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] (inclusive); modulo bias is negligible at these ranges.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi)
  {
    return lo + m_engine() % (hi - lo + 1);
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 m_engine;
};

} // namespace vndn
