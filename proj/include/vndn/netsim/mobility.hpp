#pragma once

// Node mobility: fixed points, timestamped traces with linear interpolation,
// and closed loops driven at constant speed with optional dwell stops
// (traffic lights).

#include "vndn/geo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace vndn::netsim {

class MobilityError : public std::runtime_error {
public:
  enum class Code { OutOfTraceRange, Invalid, BadTraceFile };

  MobilityError(Code code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  Code code() const { return m_code; }

private:
  Code m_code;
};

struct StaticPosition {
  geo::GeoPoint point;
};

struct Waypoint {
  SimTime time;
  geo::GeoPoint point;
};

struct TraceMobility {
  std::vector<Waypoint> waypoints; // strictly increasing times
};

/// A stop at a loop vertex. With a signal cycle the car leaves at the first
/// multiple of `cycle` (absolute sim time) at or after arrival + dwell, so
/// cars reaching a red light together leave together.
struct LoopStop {
  std::size_t vertex;
  Duration dwell;
  Duration cycle{0};
};

/// Closed polyline driven from vertex 0 towards vertex 1 and back to 0.
struct LoopMobility {
  std::vector<geo::GeoPoint> points;
  double speed = 10.0;   // m/s
  double offset_m = 0.0; // starting arc position
  std::vector<LoopStop> stops;
};

using MobilityModel = std::variant<StaticPosition, TraceMobility, LoopMobility>;

inline double loop_length(std::span<const geo::GeoPoint> pts)
{
  double len = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) len += geo::distance(pts[i], pts[(i + 1) % pts.size()]);
  return len;
}

inline Duration dwell_at(const LoopMobility& m, std::size_t vertex)
{
  Duration d{0};
  for (const auto& s : m.stops) {
    if (s.vertex == vertex) d += s.dwell;
  }
  return d;
}

inline bool has_signals(const LoopMobility& m)
{
  return std::any_of(m.stops.begin(), m.stops.end(), [](const LoopStop& s) { return s.cycle.count() > 0; });
}

/// Lap time without signal waits.
inline double loop_period_s(const LoopMobility& m)
{
  double dwell = 0;
  for (const auto& s : m.stops) dwell += to_seconds(s.dwell);
  return loop_length(m.points) / m.speed + dwell;
}

inline void validate(const MobilityModel& model)
{
  auto bad = [](const std::string& w) { throw MobilityError(MobilityError::Code::Invalid, w); };
  std::visit(
    [&](const auto& m) {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, StaticPosition>) {
        if (!std::isfinite(m.point.x) || !std::isfinite(m.point.y)) bad("position must be finite");
      }
      else if constexpr (std::is_same_v<T, TraceMobility>) {
        if (m.waypoints.empty()) bad("trace has no waypoints");
        for (std::size_t i = 1; i < m.waypoints.size(); ++i) {
          if (m.waypoints[i].time <= m.waypoints[i - 1].time) bad("trace times must strictly increase");
        }
      }
      else {
        if (m.points.size() < 2) bad("loop needs at least two points");
        if (!(m.speed > 0)) bad("loop speed must be > 0");
        if (!(loop_length(m.points) > 0)) bad("loop has zero length");
        if (m.offset_m < 0) bad("loop offset must be >= 0");
        for (const auto& s : m.stops) {
          if (s.vertex >= m.points.size()) bad("loop stop references a missing vertex");
          if (s.dwell.count() < 0) bad("loop dwell must be >= 0");
          if (s.cycle.count() < 0) bad("loop signal cycle must be >= 0");
        }
      }
    },
    model);
}

namespace detail {

inline geo::GeoPoint lerp(geo::GeoPoint a, geo::GeoPoint b, double f)
{
  return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
}

inline geo::GeoPoint trace_position(const TraceMobility& m, SimTime t)
{
  const auto& w = m.waypoints;
  if (t < w.front().time || t > w.back().time) {
    throw MobilityError(MobilityError::Code::OutOfTraceRange,
                        "time " + std::to_string(to_seconds(t)) + " s outside trace span");
  }
  auto it = std::upper_bound(w.begin(), w.end(), t, [](SimTime v, const Waypoint& p) { return v < p.time; });
  if (it == w.end()) return w.back().point;
  auto prev = std::prev(it);
  double f = static_cast<double>((t - prev->time).count()) / static_cast<double>((it->time - prev->time).count());
  return lerp(prev->point, it->point, f);
}

/// Position at `tau` seconds into one lap that starts at vertex 0.
inline geo::GeoPoint lap_position(const LoopMobility& m, double tau)
{
  const auto n = m.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    double dwell = to_seconds(dwell_at(m, i));
    if (tau <= dwell) return m.points[i];
    tau -= dwell;
    auto a = m.points[i];
    auto b = m.points[(i + 1) % n];
    double travel = geo::distance(a, b) / m.speed;
    if (tau <= travel) return travel > 0 ? lerp(a, b, tau / travel) : a;
    tau -= travel;
  }
  return m.points.front();
}

/// Lap time at which the vehicle first reaches arc position offset.
inline double lap_time_of_offset(const LoopMobility& m, double offset)
{
  const auto n = m.points.size();
  offset = std::fmod(offset, loop_length(m.points));
  double tau = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double seg = geo::distance(m.points[i], m.points[(i + 1) % n]);
    if (offset <= 0) return tau;
    tau += to_seconds(dwell_at(m, i));
    if (offset <= seg) return tau + offset / m.speed;
    offset -= seg;
    tau += seg / m.speed;
  }
  return tau;
}

/// Walks the loop leg by leg from t = 0; needed once signals break the
/// periodicity of the lap.
inline geo::GeoPoint signalled_position(const LoopMobility& m, double t)
{
  const auto n = m.points.size();
  double offset = std::fmod(m.offset_m, loop_length(m.points));
  std::size_t i = 0;
  while (offset >= geo::distance(m.points[i], m.points[(i + 1) % n]) && i + 1 < n) {
    offset -= geo::distance(m.points[i], m.points[(i + 1) % n]);
    ++i;
  }
  double now = 0;
  double first = geo::distance(m.points[i], m.points[(i + 1) % n]);
  auto a = first > 0 ? lerp(m.points[i], m.points[(i + 1) % n], offset / first) : m.points[i];
  for (;;) {
    auto v = (i + 1) % n;
    auto b = m.points[v];
    double travel = geo::distance(a, b) / m.speed;
    if (t <= now + travel) return travel > 0 ? lerp(a, b, (t - now) / travel) : a;
    now += travel;
    double leave = now;
    for (const auto& s : m.stops) {
      if (s.vertex != v) continue;
      leave += to_seconds(s.dwell);
      if (s.cycle.count() > 0) {
        double c = to_seconds(s.cycle);
        leave = std::ceil(leave / c - 1e-12) * c;
      }
    }
    if (t <= leave) return b;
    now = leave;
    a = b;
    i = v;
  }
}

} // namespace detail

inline geo::GeoPoint position_at(const MobilityModel& model, SimTime t)
{
  return std::visit(
    [&](const auto& m) -> geo::GeoPoint {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, StaticPosition>) {
        return m.point;
      }
      else if constexpr (std::is_same_v<T, TraceMobility>) {
        return detail::trace_position(m, t);
      }
      else {
        if (has_signals(m)) return detail::signalled_position(m, to_seconds(t));
        double period = loop_period_s(m);
        double tau = std::fmod(detail::lap_time_of_offset(m, m.offset_m) + to_seconds(t), period);
        return detail::lap_position(m, tau);
      }
    },
    model);
}

/// Upper bound on speed, used for continuity checks.
inline double max_speed(const MobilityModel& model)
{
  return std::visit(
    [](const auto& m) -> double {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, StaticPosition>) {
        return 0.0;
      }
      else if constexpr (std::is_same_v<T, TraceMobility>) {
        double v = 0;
        for (std::size_t i = 1; i < m.waypoints.size(); ++i) {
          const auto& a = m.waypoints[i - 1];
          const auto& b = m.waypoints[i];
          v = std::max(v, geo::distance(a.point, b.point) / to_seconds(b.time - a.time));
        }
        return v;
      }
      else {
        return m.speed;
      }
    },
    model);
}

/// First and last instants a trace covers; loops and static nodes cover all time.
inline std::optional<std::pair<SimTime, SimTime>> trace_span(const MobilityModel& model)
{
  if (const auto* tr = std::get_if<TraceMobility>(&model)) {
    return std::pair{tr->waypoints.front().time, tr->waypoints.back().time};
  }
  return std::nullopt;
}

/// Parses a `time_s,node_id,x_m,y_m` CSV whose rows are sorted by time.
inline std::map<NodeId, TraceMobility> parse_trace_csv(std::istream& in, const std::string& source = "trace")
{
  auto fail = [&](std::size_t line, const std::string& why) {
    throw MobilityError(MobilityError::Code::BadTraceFile, source + ":" + std::to_string(line) + ": " + why);
  };
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) fail(1, "missing header");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,node_id,x_m,y_m") fail(lineno, "header must be time_s,node_id,x_m,y_m");

  std::map<NodeId, TraceMobility> out;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 4) fail(lineno, "expected 4 columns");
    double t = 0, x = 0, y = 0;
    std::uint64_t id = 0;
    try {
      std::size_t used = 0;
      t = std::stod(cols[0], &used);
      if (used != cols[0].size()) throw std::invalid_argument("t");
      x = std::stod(cols[2], &used);
      if (used != cols[2].size()) throw std::invalid_argument("x");
      y = std::stod(cols[3], &used);
      if (used != cols[3].size()) throw std::invalid_argument("y");
    }
    catch (const std::exception&) {
      fail(lineno, "malformed number");
    }
    auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), id);
    if (ec != std::errc{} || ptr != cols[1].data() + cols[1].size()) fail(lineno, "malformed node_id");
    if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y)) fail(lineno, "non-finite value");
    if (t < last_t) fail(lineno, "rows must be sorted by time");
    last_t = t;
    auto& tr = out[NodeId{id}];
    auto when = from_seconds(t);
    if (!tr.waypoints.empty() && tr.waypoints.back().time >= when) fail(lineno, "duplicate timestamp for node");
    tr.waypoints.push_back({when, {x, y}});
  }
  return out;
}

inline std::map<NodeId, TraceMobility> load_trace_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw MobilityError(MobilityError::Code::BadTraceFile, path + ": cannot open");
  return parse_trace_csv(in, path);
}

} // namespace vndn::netsim
