#pragma once

// Scenario templates. Each builds a complete Scenario from a few key=value
// parameters; unknown keys and out-of-range values are rejected.

#include "vndn/harness/scenario.hpp"
#include "vndn/harness/stats.hpp"

#include <cmath>
#include <numbers>

namespace vndn::harness {

class BadParams : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// key=value parameters with typed, bounded reads. Every key must be consumed.
class Params {
public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> kv)
    : m_kv(std::move(kv))
  {
  }

  static Params parse(const std::vector<std::string>& items)
  {
    std::map<std::string, std::string> kv;
    for (const auto& item : items) {
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw BadParams("parameter '" + item + "' is not key=value");
      if (!kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
        throw BadParams("parameter '" + item.substr(0, eq) + "' given twice");
      }
    }
    return Params(std::move(kv));
  }

  Params& set(const std::string& key, const std::string& value)
  {
    m_kv[key] = value;
    return *this;
  }

  double real(const std::string& key, double dflt, double lo, double hi)
  {
    m_used.insert(key);
    auto it = m_kv.find(key);
    if (it == m_kv.end()) return dflt;
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
    }
    catch (const std::exception&) {
      throw BadParams(key + ": expected a number, got '" + it->second + "'");
    }
    if (!(v >= lo && v <= hi)) {
      throw BadParams(key + ": " + it->second + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t dflt, std::uint64_t lo, std::uint64_t hi)
  {
    m_used.insert(key);
    auto it = m_kv.find(key);
    if (it == m_kv.end()) return dflt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc{} || ptr != it->second.data() + it->second.size()) {
      throw BadParams(key + ": expected a non-negative integer, got '" + it->second + "'");
    }
    if (v < lo || v > hi) {
      throw BadParams(key + ": " + it->second + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  bool flag(const std::string& key, bool dflt)
  {
    m_used.insert(key);
    auto it = m_kv.find(key);
    if (it == m_kv.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw BadParams(key + ": expected true or false");
  }

  void finish() const
  {
    for (const auto& [k, _] : m_kv) {
      if (!m_used.contains(k)) throw BadParams("unknown parameter '" + k + "'");
    }
  }

private:
  std::map<std::string, std::string> m_kv;
  std::set<std::string> m_used;
};

namespace detail {

inline apps::ConsumerConfig traffic_consumer(std::vector<std::string> labels, double period_s, double slot_s)
{
  apps::ConsumerConfig c;
  c.kind = apps::ContentKind::Traffic;
  for (const auto& l : labels) c.targets.push_back(ndn::Name({"traffic", l}));
  c.issue_period = from_seconds(period_s);
  c.slot_length = from_seconds(slot_s);
  return c;
}

inline std::string grid_label(std::uint64_t r, std::uint64_t c) { return "r" + std::to_string(r) + "c" + std::to_string(c); }

/// rows x cols intersections spaced `spacing` metres apart, ids row-major.
inline geo::RoadGraph grid_graph(std::uint64_t rows, std::uint64_t cols, double spacing)
{
  std::vector<geo::Intersection> ins;
  std::vector<geo::Segment> segs;
  auto id = [&](std::uint64_t r, std::uint64_t c) { return IntersectionId{static_cast<std::int64_t>(r * cols + c)}; };
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      ins.push_back({id(r, c), grid_label(r, c), {static_cast<double>(c) * spacing, static_cast<double>(r) * spacing}});
      if (c + 1 < cols) segs.push_back({SegmentId{static_cast<std::int64_t>(segs.size())}, id(r, c), id(r, c + 1)});
      if (r + 1 < rows) segs.push_back({SegmentId{static_cast<std::int64_t>(segs.size())}, id(r, c), id(r + 1, c)});
    }
  }
  return geo::RoadGraph(std::move(ins), std::move(segs));
}

inline void set_radio(Scenario& s, Params& p, double loss_default)
{
  s.radio.range_m = p.real("range_m", 300.0, 1.0, 10'000.0);
  s.radio.loss_probability = p.real("loss", loss_default, 0.0, 1.0);
  s.lal.radio_range_m = s.radio.range_m;
}

} // namespace detail

/// 15 parked cars on a 3 x 5 grid of intersections; one consumer in a corner
/// asks for the intersection of a producer parked in the opposite corner.
inline Scenario gen_static_grid(Params p)
{
  Scenario s;
  s.name = "static_grid";
  auto rows = p.integer("rows", 3, 1, 50);
  auto cols = p.integer("cols", 5, 2, 50);
  auto spacing = p.real("spacing_m", 40.0, 1.0, 1000.0);
  auto requests = p.integer("requests", 200, 1, 1'000'000);
  auto period = p.real("period_s", 1.0, 0.01, 3600.0);
  detail::set_radio(s, p, 0.25);
  s.seed = p.integer("seed", 1, 0, UINT64_MAX);
  s.graph = detail::grid_graph(rows, cols, spacing);
  s.duration = from_seconds(period * static_cast<double>(requests) + 10.0);
  p.finish();

  const auto& ins = s.graph.intersections();
  for (std::size_t k = 0; k < ins.size(); ++k) {
    NodeSpec n;
    n.id = NodeId{k + 1};
    n.mobility = netsim::StaticPosition{ins[k].point};
    s.nodes.push_back(std::move(n));
  }
  auto consumer = detail::traffic_consumer({ins.back().label}, period, period);
  consumer.max_requests = requests;
  s.nodes.front().apps.push_back(consumer);
  s.nodes.back().apps.push_back(TrafficProducerSpec{});
  validate(s);
  return s;
}

namespace detail {

inline std::vector<geo::GeoPoint> rect_loop(double x0, double y0, double x1, double y1, bool clockwise)
{
  if (clockwise) return {{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}};
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

} // namespace detail

/// A single-file platoon circling one block. Car 1 leads and produces; the
/// last car consumes information about the block corners.
inline Scenario gen_platoon_loop(Params p)
{
  Scenario s;
  s.name = "platoon_loop";
  auto cars = p.integer("nodes", 6, 2, 500);
  auto width = p.real("width_m", 300.0, 10.0, 5000.0);
  auto height = p.real("height_m", 113.5, 10.0, 5000.0);
  auto gap = p.real("gap_m", 25.0, 0.0, 1000.0);
  auto speed = p.real("speed_mps", 8.0, 0.1, 60.0);
  auto period = p.real("period_s", 2.0, 0.01, 3600.0);
  s.duration = from_seconds(p.real("duration_s", 300.0, 1.0, 1e6));
  detail::set_radio(s, p, 0.0);
  s.seed = p.integer("seed", 1, 0, UINT64_MAX);
  p.finish();

  s.graph = geo::RoadGraph({{IntersectionId{0}, "sw", {0, 0}},
                            {IntersectionId{1}, "se", {width, 0}},
                            {IntersectionId{2}, "ne", {width, height}},
                            {IntersectionId{3}, "nw", {0, height}}},
                           {{SegmentId{0}, IntersectionId{0}, IntersectionId{1}},
                            {SegmentId{1}, IntersectionId{1}, IntersectionId{2}},
                            {SegmentId{2}, IntersectionId{2}, IntersectionId{3}},
                            {SegmentId{3}, IntersectionId{3}, IntersectionId{0}}});
  auto pts = detail::rect_loop(0, 0, width, height, false);
  auto length = netsim::loop_length(pts);
  if (gap * static_cast<double>(cars - 1) >= length) throw BadParams("gap_m: platoon longer than the loop");
  for (std::uint64_t k = 0; k < cars; ++k) {
    NodeSpec n;
    n.id = NodeId{k + 1};
    // The leader is furthest along the loop.
    n.mobility = netsim::LoopMobility{pts, speed, gap * static_cast<double>(cars - 1 - k), {}};
    s.nodes.push_back(std::move(n));
  }
  s.nodes.front().apps.push_back(TrafficProducerSpec{});
  s.nodes.back().apps.push_back(detail::traffic_consumer({"sw", "se", "ne", "nw"}, period, period));
  validate(s);
  return s;
}

/// Two groups looping adjacent blocks in opposite directions. The small loop
/// (clockwise) is nested in the large one (counter-clockwise); they share the
/// west side and the part of the north and south sides up to the small block.
inline Scenario gen_double_clock(Params p)
{
  Scenario s;
  s.name = "double_clock";
  auto small_cars = p.integer("small_cars", 4, 2, 100);
  auto large_cars = p.integer("large_cars", 6, 2, 100);
  auto scale = p.real("scale", 1.0, 0.01, 100.0);
  auto speed = p.real("speed_mps", 8.0, 0.1, 60.0);
  auto dwell = p.real("dwell_s", 5.0, 0.0, 600.0);
  auto cycle = p.real("signal_cycle_s", 30.0, 0.0, 600.0);
  auto period = p.real("period_s", 2.0, 0.01, 3600.0);
  auto slot = p.real("slot_s", 60.0, 0.01, 3600.0);
  auto consumers = p.integer("consumers_per_loop", 1, 1, 99);
  s.duration = from_seconds(p.real("duration_s", 600.0, 1.0, 1e6));
  // Below the 98 m gap between the two east edges, so the loops only meet on
  // the shared segments.
  s.radio.range_m = p.real("range_m", 90.0, 1.0, 10'000.0);
  s.radio.loss_probability = p.real("loss", 0.0, 0.0, 1.0);
  s.lal.radio_range_m = s.radio.range_m;
  s.seed = p.integer("seed", 1, 0, UINT64_MAX);
  p.finish();

  // Small block 100.5 x 313 (827 m around), large block 198.5 x 313 (1023 m);
  // shared: 313 + 2 * 100.5 = 514 m.
  const double h = 313.0 * scale;
  const double xs = 100.5 * scale;
  const double xl = 198.5 * scale;
  s.graph = geo::RoadGraph({{IntersectionId{0}, "sw", {0, 0}},
                            {IntersectionId{1}, "sm", {xs, 0}},
                            {IntersectionId{2}, "se", {xl, 0}},
                            {IntersectionId{3}, "nw", {0, h}},
                            {IntersectionId{4}, "nm", {xs, h}},
                            {IntersectionId{5}, "ne", {xl, h}}},
                           {{SegmentId{0}, IntersectionId{0}, IntersectionId{1}},
                            {SegmentId{1}, IntersectionId{1}, IntersectionId{2}},
                            {SegmentId{2}, IntersectionId{3}, IntersectionId{4}},
                            {SegmentId{3}, IntersectionId{4}, IntersectionId{5}},
                            {SegmentId{4}, IntersectionId{0}, IntersectionId{3}},
                            {SegmentId{5}, IntersectionId{1}, IntersectionId{4}},
                            {SegmentId{6}, IntersectionId{2}, IntersectionId{5}}});

  // One traffic light per loop vertex: 4 on the small loop, 6 on the large.
  // All lights share a cycle, which bunches cars into groups.
  auto loop = [&](std::vector<geo::GeoPoint> pts, std::uint64_t count, std::uint64_t first_id) {
    auto length = netsim::loop_length(pts);
    std::vector<netsim::LoopStop> stops;
    for (std::size_t v = 0; v < pts.size(); ++v) stops.push_back({v, from_seconds(dwell), from_seconds(cycle)});
    for (std::uint64_t k = 0; k < count; ++k) {
      NodeSpec n;
      n.id = NodeId{first_id + k};
      n.mobility = netsim::LoopMobility{pts, speed, length * static_cast<double>(k) / static_cast<double>(count), stops};
      s.nodes.push_back(std::move(n));
    }
  };
  loop({{0, 0}, {0, h}, {xs, h}, {xs, 0}}, small_cars, 1);
  loop({{0, 0}, {xs, 0}, {xl, 0}, {xl, h}, {xs, h}, {0, h}}, large_cars, 1 + small_cars);

  // Each loop has a producer followed by consumers; everyone asks about the
  // corners only the large loop passes, so the small loop depends on meeting
  // large-loop cars. The remaining cars are mules.
  if (consumers + 1 >= small_cars || consumers + 1 >= large_cars)
    throw BadParams("consumers_per_loop must leave at least one mule in each loop");
  for (auto first : {std::uint64_t{0}, small_cars}) {
    s.nodes[first].apps.push_back(TrafficProducerSpec{});
    for (std::uint64_t k = 1; k <= consumers; ++k)
      s.nodes[first + k].apps.push_back(detail::traffic_consumer({"se", "ne"}, period, slot));
  }
  validate(s);
  return s;
}

/// Producer P and consumer C1 parked at an intersection with two parked mules.
/// P is switched off right after C1's first satisfaction; consumer C2 drives
/// in later and asks for the same content.
inline Scenario gen_producer_shutdown(Params p)
{
  Scenario s;
  s.name = "producer_shutdown";
  auto mules = p.integer("mules", 2, 1, 100);
  auto arrive = p.real("arrive_s", 40.0, 1.0, 1e5);
  auto approach = p.real("approach_m", 1500.0, 0.0, 1e5);
  detail::set_radio(s, p, 0.0);
  s.seed = p.integer("seed", 1, 0, UINT64_MAX);
  s.duration = from_seconds(arrive + 60.0);
  p.finish();

  s.graph = geo::RoadGraph({{IntersectionId{0}, "x", {0, 0}}, {IntersectionId{1}, "east", {approach + 100.0, 0}}},
                           {{SegmentId{0}, IntersectionId{0}, IntersectionId{1}}});
  auto slot = to_seconds(s.duration) + 1.0; // one content name for the whole run

  NodeSpec producer;
  producer.id = NodeId{1};
  producer.mobility = netsim::StaticPosition{{0, 0}};
  producer.apps.push_back(TrafficProducerSpec{});
  producer.shutdown = ShutdownSpec{std::nullopt, true};
  s.nodes.push_back(std::move(producer));

  NodeSpec c1;
  c1.id = NodeId{2};
  c1.mobility = netsim::StaticPosition{{20, 0}};
  auto req1 = detail::traffic_consumer({"x"}, 1.0, slot);
  req1.start = from_seconds(1.0);
  req1.max_requests = 1;
  c1.apps.push_back(req1);
  s.nodes.push_back(std::move(c1));

  for (std::uint64_t k = 0; k < mules; ++k) {
    NodeSpec m;
    m.id = NodeId{3 + k};
    m.mobility = netsim::StaticPosition{{40.0 + 30.0 * static_cast<double>(k), 10.0}};
    s.nodes.push_back(std::move(m));
  }

  // C2 drives west and parks 60 m from the intersection.
  NodeSpec c2;
  c2.id = NodeId{3 + mules};
  c2.mobility = netsim::TraceMobility{{{SimTime{}, {approach + 60.0, 0}},
                                       {from_seconds(arrive), {60.0, 0}},
                                       {s.duration, {60.0, 0}}}};
  auto req2 = detail::traffic_consumer({"x"}, 1.0, slot);
  req2.start = from_seconds(arrive + 1.0);
  req2.max_requests = 1;
  c2.apps.push_back(req2);
  s.nodes.push_back(std::move(c2));
  validate(s);
  return s;
}

/// A city grid with `cars` vehicles each circling a random block. A fixed
/// fraction are traffic producers; `consumers` others ask for the same set of
/// intersections.
inline Scenario gen_scale(Params p)
{
  Scenario s;
  s.name = "scale";
  auto cars = p.integer("cars", 60, 2, 5000);
  auto fraction = p.real("producer_fraction", 0.14, 0.0, 1.0);
  auto consumers = p.integer("consumers", 1, 0, 5000);
  auto grid = p.integer("grid", 5, 2, 100);
  auto spacing = p.real("spacing_m", 200.0, 10.0, 5000.0);
  auto targets = p.integer("targets", 4, 1, 10'000);
  auto period = p.real("period_s", 5.0, 0.01, 3600.0);
  auto gen_seed = p.integer("layout_seed", 1, 0, UINT64_MAX);
  s.duration = from_seconds(p.real("duration_s", 120.0, 1.0, 1e6));
  detail::set_radio(s, p, 0.0);
  s.seed = p.integer("seed", 1, 0, UINT64_MAX);
  p.finish();

  auto producers = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(cars)));
  if (producers + consumers > cars) throw BadParams("consumers: more producers and consumers than cars");
  s.graph = detail::grid_graph(grid, grid, spacing);

  auto rng = Rng::substream(gen_seed, "layout");
  std::set<std::string> visited_by_producers;
  for (std::uint64_t k = 0; k < cars; ++k) {
    auto r = rng.uniform_int(0, grid - 2);
    auto c = rng.uniform_int(0, grid - 2);
    bool cw = rng.bernoulli(0.5);
    auto x0 = static_cast<double>(c) * spacing;
    auto y0 = static_cast<double>(r) * spacing;
    auto pts = detail::rect_loop(x0, y0, x0 + spacing, y0 + spacing, cw);
    NodeSpec n;
    n.id = NodeId{k + 1};
    n.mobility = netsim::LoopMobility{pts, rng.uniform(8.0, 14.0), rng.uniform(0.0, 4.0 * spacing), {}};
    if (k < producers) {
      n.apps.push_back(TrafficProducerSpec{});
      for (auto [dr, dc] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
        visited_by_producers.insert(detail::grid_label(r + dr, c + dc));
      }
    }
    s.nodes.push_back(std::move(n));
  }

  std::vector<std::string> pool(visited_by_producers.begin(), visited_by_producers.end());
  if (pool.empty()) {
    for (const auto& in : s.graph.intersections()) pool.push_back(in.label);
  }
  std::vector<std::string> chosen;
  while (chosen.size() < std::min<std::size_t>(targets, pool.size())) {
    auto pick = pool[rng.uniform_int(0, pool.size() - 1)];
    if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end()) chosen.push_back(pick);
  }
  for (std::uint64_t k = 0; k < consumers; ++k) {
    auto cfg = detail::traffic_consumer(chosen, period, period);
    cfg.start = from_seconds(rng.uniform(0.0, period));
    s.nodes[producers + k].apps.push_back(cfg);
  }
  validate(s);
  return s;
}

inline const std::vector<std::string>& template_names()
{
  static const std::vector<std::string> names{"static_grid", "platoon_loop", "double_clock", "producer_shutdown",
                                              "scale"};
  return names;
}

inline Scenario gen_scenario(const std::string& name, Params params)
{
  if (name == "static_grid") return gen_static_grid(std::move(params));
  if (name == "platoon_loop") return gen_platoon_loop(std::move(params));
  if (name == "double_clock") return gen_double_clock(std::move(params));
  if (name == "producer_shutdown") return gen_producer_shutdown(std::move(params));
  if (name == "scale") return gen_scale(std::move(params));
  throw BadParams("unknown template '" + name + "'");
}

} // namespace vndn::harness
