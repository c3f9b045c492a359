#pragma once

// Scenario files: JSON describing the road graph, radio, LAL, nodes and links
// of one run. Every validation failure names the offending field.

#include "vndn/apps.hpp"
#include "vndn/lal.hpp"
#include "vndn/ndn/forwarder.hpp"
#include "vndn/netsim/mobility.hpp"
#include "vndn/netsim/radio.hpp"

#include <filesystem>

namespace vndn::harness {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string field, const std::string& reason)
    : std::runtime_error(field + ": " + reason)
    , m_field(std::move(field))
  {
  }

  const std::string& field() const { return m_field; }

private:
  std::string m_field;
};

struct TrafficProducerSpec {
  Duration freshness = from_seconds(300);
};

struct PhotoProducerSpec {
  apps::PhotoProducerConfig config;
};

using AppSpec = std::variant<TrafficProducerSpec, PhotoProducerSpec, apps::ConsumerConfig>;

struct FibSpec {
  ndn::Name prefix;
  NodeId via;
};

struct ShutdownSpec {
  std::optional<SimTime> at;
  bool after_first_satisfy = false; // by any consumer in the run
};

struct NodeSpec {
  NodeId id;
  bool hub = false;
  bool adhoc = true;
  netsim::MobilityModel mobility = netsim::StaticPosition{};
  std::vector<AppSpec> apps;
  std::vector<FibSpec> fib;
  std::optional<std::size_t> cs_capacity;
  std::optional<ShutdownSpec> shutdown;

  bool is_consumer() const
  {
    return std::any_of(apps.begin(), apps.end(),
                       [](const auto& a) { return std::holds_alternative<apps::ConsumerConfig>(a); });
  }
  bool is_producer() const
  {
    return std::any_of(apps.begin(), apps.end(),
                       [](const auto& a) { return !std::holds_alternative<apps::ConsumerConfig>(a); });
  }
  bool is_mule() const { return !hub && apps.empty(); }
};

struct LinkSpec {
  NodeId a;
  NodeId b;
  Duration latency = from_millis(20);
};

struct Scenario {
  std::string name = "scenario";
  Duration duration = from_seconds(60);
  std::uint64_t seed = 1;
  geo::RoadGraph graph;
  netsim::RadioModel radio;
  lal::LalConfig lal;
  ndn::Strategy strategy = ndn::Strategy::ControlledFlood;
  std::size_t cs_capacity = ndn::ContentStore::default_capacity;
  Duration sample_period = from_seconds(1); // position samples feeding producers
  std::vector<NodeSpec> nodes;              // vehicles and hubs
  std::vector<LinkSpec> links;

  const NodeSpec* find(NodeId id) const
  {
    for (const auto& n : nodes) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// JSON reading with field paths

namespace detail {

class Reader {
public:
  Reader(const nlohmann::json& j, std::string path)
    : m_j(j)
    , m_path(std::move(path))
  {
    if (!m_j.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& why) const { throw ValidationError(m_path, why); }
  [[noreturn]] void fail(const std::string& key, const std::string& why) const { throw ValidationError(at(key), why); }

  std::string at(const std::string& key) const { return m_path.empty() ? key : m_path + "." + key; }
  bool has(const char* key) const { return m_j.contains(key); }
  const nlohmann::json& raw(const char* key) const
  {
    if (!has(key)) fail(key, "missing");
    return m_j.at(key);
  }

  double number(const char* key) const
  {
    const auto& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    auto d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }
  double number(const char* key, double dflt) const { return has(key) ? number(key) : dflt; }

  std::uint64_t count(const char* key) const
  {
    const auto& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const char* key, std::uint64_t dflt) const { return has(key) ? count(key) : dflt; }

  bool boolean(const char* key, bool dflt) const
  {
    if (!has(key)) return dflt;
    const auto& v = raw(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const
  {
    const auto& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const char* key, const std::string& dflt) const { return has(key) ? string(key) : dflt; }

  const nlohmann::json& array(const char* key) const
  {
    const auto& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

  Reader object(const char* key) const { return Reader(raw(key), at(key)); }

  Duration positive_seconds(const char* key, Duration dflt) const
  {
    if (!has(key)) return dflt;
    auto s = number(key);
    if (!(s > 0)) fail(key, "must be > 0");
    return from_seconds(s);
  }
  Duration positive_millis(const char* key, Duration dflt) const
  {
    if (!has(key)) return dflt;
    auto ms = number(key);
    if (!(ms > 0)) fail(key, "must be > 0");
    return from_seconds(ms / 1000.0);
  }

  const std::string& path() const { return m_path; }
  const nlohmann::json& json() const { return m_j; }

private:
  const nlohmann::json& m_j;
  std::string m_path;
};

inline geo::GeoPoint point_of(const nlohmann::json& j, const std::string& path)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(path, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline netsim::MobilityModel parse_mobility(const Reader& r, NodeId id, const std::filesystem::path& base_dir)
{
  auto type = r.string("type");
  netsim::MobilityModel model;
  if (type == "static") {
    model = netsim::StaticPosition{{r.number("x"), r.number("y")}};
  }
  else if (type == "trace") {
    netsim::TraceMobility tr;
    if (r.has("file")) {
      auto file = base_dir / r.string("file");
      if (!std::filesystem::exists(file)) r.fail("file", "no such file '" + file.string() + "'");
      std::map<NodeId, netsim::TraceMobility> all;
      try {
        all = netsim::load_trace_csv(file.string());
      }
      catch (const netsim::MobilityError& e) {
        r.fail("file", e.what());
      }
      auto it = all.find(id);
      if (it == all.end()) r.fail("file", "trace has no rows for node " + std::to_string(id.value()));
      tr = it->second;
    }
    else {
      const auto& wps = r.array("waypoints");
      for (std::size_t i = 0; i < wps.size(); ++i) {
        auto path = r.at("waypoints") + "[" + std::to_string(i) + "]";
        const auto& w = wps[i];
        if (!w.is_array() || w.size() != 3 || !w[0].is_number() || !w[1].is_number() || !w[2].is_number()) {
          throw ValidationError(path, "expected [t_s, x, y]");
        }
        tr.waypoints.push_back({from_seconds(w[0].get<double>()), {w[1].get<double>(), w[2].get<double>()}});
      }
    }
    model = std::move(tr);
  }
  else if (type == "loop") {
    netsim::LoopMobility loop;
    const auto& pts = r.array("points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      loop.points.push_back(point_of(pts[i], r.at("points") + "[" + std::to_string(i) + "]"));
    }
    loop.speed = r.number("speed");
    loop.offset_m = r.number("offset_m", 0.0);
    if (r.has("stops")) {
      const auto& stops = r.array("stops");
      for (std::size_t i = 0; i < stops.size(); ++i) {
        Reader s(stops[i], r.at("stops") + "[" + std::to_string(i) + "]");
        auto dwell = s.number("dwell_s");
        if (dwell < 0) s.fail("dwell_s", "must be >= 0");
        double cycle = s.has("cycle_s") ? s.number("cycle_s") : 0.0;
        if (cycle < 0) s.fail("cycle_s", "must be >= 0");
        loop.stops.push_back({static_cast<std::size_t>(s.count("vertex")), from_seconds(dwell), from_seconds(cycle)});
      }
    }
    model = std::move(loop);
  }
  else {
    r.fail("type", "unknown mobility type '" + type + "' (static, trace, loop)");
  }
  try {
    netsim::validate(model);
  }
  catch (const netsim::MobilityError& e) {
    r.fail(e.what());
  }
  return model;
}

inline apps::ConsumerConfig parse_consumer(const Reader& r, apps::ContentKind kind)
{
  apps::ConsumerConfig c;
  c.kind = kind;
  const auto& targets = r.array("targets");
  if (targets.empty()) r.fail("targets", "at least one target required");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto path = r.at("targets") + "[" + std::to_string(i) + "]";
    if (!targets[i].is_string()) throw ValidationError(path, "expected a name string");
    try {
      c.targets.push_back(ndn::parse_name(targets[i].get<std::string>()));
    }
    catch (const ndn::NameError& e) {
      throw ValidationError(path, e.what());
    }
  }
  c.issue_period = r.positive_seconds("period_s", c.issue_period);
  c.slot_length = r.positive_seconds("slot_s", c.issue_period);
  auto start = r.number("start_s", 0.0);
  if (start < 0) r.fail("start_s", "must be >= 0");
  c.start = SimTime{from_seconds(start)};
  c.max_requests = r.count("max_requests", c.max_requests);
  auto lifetime = r.count("lifetime_ms", c.interest_lifetime_ms);
  if (lifetime == 0 || lifetime > 0xffffffffu) r.fail("lifetime_ms", "must be in [1, 2^32)");
  c.interest_lifetime_ms = static_cast<std::uint32_t>(lifetime);
  c.reexpress_timeout = r.positive_seconds("reexpress_timeout_s", c.reexpress_timeout);
  c.max_reexpress = static_cast<std::uint32_t>(r.count("max_reexpress", c.max_reexpress));
  c.window = r.count("window", c.window);
  if (c.window == 0) r.fail("window", "must be > 0");
  return c;
}

inline AppSpec parse_app(const Reader& r)
{
  auto type = r.string("type");
  if (type == "traffic_producer") {
    return TrafficProducerSpec{r.positive_seconds("freshness_s", from_seconds(300))};
  }
  if (type == "photo_producer") {
    PhotoProducerSpec p;
    if (r.has("size_bytes")) {
      auto size = r.count("size_bytes");
      if (size == 0) r.fail("size_bytes", "must be > 0");
      p.config.photo_size_bytes = size;
    }
    p.config.chunk_size = r.count("chunk_size", p.config.chunk_size);
    if (p.config.chunk_size == 0) r.fail("chunk_size", "must be > 0");
    return p;
  }
  if (type == "traffic_consumer") return parse_consumer(r, apps::ContentKind::Traffic);
  if (type == "photo_consumer") return parse_consumer(r, apps::ContentKind::Photo);
  r.fail("type", "unknown app '" + type + "' (traffic_producer, photo_producer, traffic_consumer, photo_consumer)");
}

inline NodeSpec parse_node(const Reader& r, bool hub, const std::filesystem::path& base_dir)
{
  NodeSpec n;
  n.hub = hub;
  n.id = NodeId{r.count("id")};
  n.adhoc = r.boolean("adhoc", !hub);
  if (r.has("mobility")) {
    n.mobility = parse_mobility(r.object("mobility"), n.id, base_dir);
  }
  else if (r.has("position")) {
    n.mobility = netsim::StaticPosition{point_of(r.raw("position"), r.at("position"))};
  }
  else {
    r.fail("mobility", "missing (or give position for a static node)");
  }
  if (hub && !std::holds_alternative<netsim::StaticPosition>(n.mobility)) r.fail("mobility", "hubs are static");
  if (r.has("apps")) {
    const auto& apps = r.array("apps");
    for (std::size_t i = 0; i < apps.size(); ++i) {
      n.apps.push_back(parse_app(Reader(apps[i], r.at("apps") + "[" + std::to_string(i) + "]")));
    }
  }
  if (r.has("fib")) {
    const auto& fib = r.array("fib");
    for (std::size_t i = 0; i < fib.size(); ++i) {
      Reader f(fib[i], r.at("fib") + "[" + std::to_string(i) + "]");
      try {
        n.fib.push_back({ndn::parse_name(f.string("prefix")), NodeId{f.count("via")}});
      }
      catch (const ndn::NameError& e) {
        f.fail("prefix", e.what());
      }
    }
  }
  if (r.has("cs_capacity_bytes")) n.cs_capacity = r.count("cs_capacity_bytes");
  if (r.has("shutdown")) {
    auto s = r.object("shutdown");
    ShutdownSpec spec;
    if (s.has("at_s")) {
      auto t = s.number("at_s");
      if (t < 0) s.fail("at_s", "must be >= 0");
      spec.at = SimTime{from_seconds(t)};
    }
    spec.after_first_satisfy = s.boolean("after_first_satisfy", false);
    if (!spec.at && !spec.after_first_satisfy) s.fail("needs at_s or after_first_satisfy");
    n.shutdown = spec;
  }
  return n;
}

} // namespace detail

/// Cross-field checks run after parsing (and on generated scenarios).
inline void validate(const Scenario& s)
{
  if (s.duration.count() <= 0) throw ValidationError("duration_s", "must be > 0");
  if (!(s.radio.range_m > 0)) throw ValidationError("radio.range_m", "must be > 0");
  if (!(s.radio.loss_probability >= 0 && s.radio.loss_probability <= 1)) {
    throw ValidationError("radio.loss_probability", "must be within [0, 1]");
  }
  try {
    s.lal.validate();
  }
  catch (const std::invalid_argument& e) {
    throw ValidationError("lal", e.what());
  }

  std::map<NodeId, std::size_t> index;
  std::size_t vehicles = 0;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    auto field = (n.hub ? "hubs[" + std::to_string(i - vehicles) + "]" : "nodes[" + std::to_string(i) + "]");
    if (!n.hub) ++vehicles;
    if (!index.emplace(n.id, i).second) {
      throw ValidationError(field + ".id", "duplicate node id " + std::to_string(n.id.value()));
    }
    if (auto span = netsim::trace_span(n.mobility)) {
      if (span->first > SimTime{} || span->second < SimTime{s.duration}) {
        throw ValidationError(field + ".mobility", "trace must cover [0, duration]");
      }
    }
    for (std::size_t a = 0; a < n.apps.size(); ++a) {
      if (!std::holds_alternative<apps::ConsumerConfig>(n.apps[a]) && s.graph.empty()) {
        throw ValidationError(field + ".apps[" + std::to_string(a) + "]", "producers need a road_graph");
      }
    }
  }
  std::set<std::pair<NodeId, NodeId>> seen_links;
  for (std::size_t i = 0; i < s.links.size(); ++i) {
    const auto& l = s.links[i];
    auto field = "links[" + std::to_string(i) + "]";
    if (!index.contains(l.a)) throw ValidationError(field + ".a", "unknown node " + std::to_string(l.a.value()));
    if (!index.contains(l.b)) throw ValidationError(field + ".b", "unknown node " + std::to_string(l.b.value()));
    if (l.a == l.b) throw ValidationError(field, "a link needs two distinct nodes");
    if (l.latency.count() <= 0) throw ValidationError(field + ".latency_ms", "must be > 0");
    if (!seen_links.insert(std::minmax(l.a, l.b)).second) throw ValidationError(field, "duplicate link");
  }
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    for (std::size_t f = 0; f < n.fib.size(); ++f) {
      if (!seen_links.contains(std::minmax(n.id, n.fib[f].via))) {
        throw ValidationError("node " + std::to_string(n.id.value()) + ".fib[" + std::to_string(f) + "].via",
                              "no link to node " + std::to_string(n.fib[f].via.value()));
      }
    }
  }
}

inline Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".")
{
  detail::Reader r(j, "");
  Scenario s;
  s.name = r.string("name", s.name);
  auto dur = r.number("duration_s");
  if (!(dur > 0)) r.fail("duration_s", "must be > 0");
  s.duration = from_seconds(dur);
  s.seed = r.count("seed", s.seed);

  if (r.has("road_graph")) {
    const auto& g = r.raw("road_graph");
    try {
      if (g.is_string()) {
        auto file = base_dir / g.get<std::string>();
        if (!std::filesystem::exists(file)) r.fail("road_graph", "no such file '" + file.string() + "'");
        s.graph = geo::load_road_graph(file.string());
      }
      else {
        s.graph = geo::road_graph_from_json(g);
      }
    }
    catch (const geo::GeoError& e) {
      r.fail("road_graph", e.what());
    }
  }

  if (r.has("radio")) {
    auto radio = r.object("radio");
    s.radio.range_m = radio.number("range_m", s.radio.range_m);
    if (!(s.radio.range_m > 0)) radio.fail("range_m", "must be > 0");
    s.radio.loss_probability = radio.number("loss_probability", 0.0);
    if (s.radio.loss_probability < 0 || s.radio.loss_probability > 1) {
      radio.fail("loss_probability", "must be within [0, 1]");
    }
  }
  s.lal.radio_range_m = s.radio.range_m;

  if (r.has("lal")) {
    auto l = r.object("lal");
    s.lal.t_rank_max = l.positive_millis("t_rank_max_ms", s.lal.t_rank_max);
    s.lal.t_rand_max = l.positive_millis("t_rand_max_ms", s.lal.t_rand_max);
    s.lal.retx_timeout = l.positive_millis("retx_timeout_ms", s.lal.retx_timeout);
    auto retx = l.count("max_retransmission", s.lal.max_retransmission);
    if (retx < 1 || retx > 1000) l.fail("max_retransmission", "must be in [1, 1000]");
    s.lal.max_retransmission = static_cast<std::uint32_t>(retx);
    auto policy = l.string("ack_policy", "any");
    if (policy == "any") s.lal.ack_policy = lal::AckPolicy::Any;
    else if (policy == "all_roads") s.lal.ack_policy = lal::AckPolicy::AllRoadsAtIntersection;
    else l.fail("ack_policy", "expected any or all_roads");
    s.lal.intersection_radius_m = l.number("intersection_radius_m", s.lal.intersection_radius_m);
    s.lal.jitter = l.boolean("jitter", true);
  }

  auto strategy = r.string("strategy", "controlled_flood");
  if (strategy == "controlled_flood") s.strategy = ndn::Strategy::ControlledFlood;
  else if (strategy == "greedy_geo") s.strategy = ndn::Strategy::GreedyGeo;
  else r.fail("strategy", "expected controlled_flood or greedy_geo");

  s.cs_capacity = r.count("cs_capacity_bytes", s.cs_capacity);
  s.sample_period = r.positive_seconds("sample_period_s", s.sample_period);

  for (const char* key : {"nodes", "hubs"}) {
    if (!r.has(key)) continue;
    const auto& arr = r.array(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto path = std::string(key) + "[" + std::to_string(i) + "]";
      s.nodes.push_back(detail::parse_node(detail::Reader(arr[i], path), std::string_view(key) == "hubs", base_dir));
    }
  }
  if (r.has("links")) {
    const auto& arr = r.array("links");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      detail::Reader l(arr[i], "links[" + std::to_string(i) + "]");
      s.links.push_back({NodeId{l.count("a")}, NodeId{l.count("b")}, l.positive_millis("latency_ms", from_millis(20))});
    }
  }
  validate(s);
  return s;
}

inline Scenario load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  auto text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ":" + std::to_string(geo::detail::line_of(text, e.byte)) + ": " + e.what());
  }
  return scenario_from_json(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Writing

namespace detail {

inline nlohmann::json mobility_json(const netsim::MobilityModel& model)
{
  return std::visit(
    [](const auto& m) -> nlohmann::json {
      using T = std::decay_t<decltype(m)>;
      if constexpr (std::is_same_v<T, netsim::StaticPosition>) {
        return {{"type", "static"}, {"x", m.point.x}, {"y", m.point.y}};
      }
      else if constexpr (std::is_same_v<T, netsim::TraceMobility>) {
        auto wps = nlohmann::json::array();
        for (const auto& w : m.waypoints) wps.push_back({to_seconds(w.time), w.point.x, w.point.y});
        return {{"type", "trace"}, {"waypoints", wps}};
      }
      else {
        auto pts = nlohmann::json::array();
        for (const auto& p : m.points) pts.push_back({p.x, p.y});
        nlohmann::json j{{"type", "loop"}, {"points", pts}, {"speed", m.speed}, {"offset_m", m.offset_m}};
        if (!m.stops.empty()) {
          auto stops = nlohmann::json::array();
          for (const auto& s : m.stops) {
            nlohmann::json st = {{"vertex", s.vertex}, {"dwell_s", to_seconds(s.dwell)}};
            if (s.cycle.count() > 0) st["cycle_s"] = to_seconds(s.cycle);
            stops.push_back(st);
          }
          j["stops"] = stops;
        }
        return j;
      }
    },
    model);
}

inline nlohmann::json app_json(const AppSpec& app)
{
  return std::visit(
    [](const auto& a) -> nlohmann::json {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, TrafficProducerSpec>) {
        return {{"type", "traffic_producer"}, {"freshness_s", to_seconds(a.freshness)}};
      }
      else if constexpr (std::is_same_v<T, PhotoProducerSpec>) {
        nlohmann::json j{{"type", "photo_producer"}, {"chunk_size", a.config.chunk_size}};
        if (a.config.photo_size_bytes) j["size_bytes"] = *a.config.photo_size_bytes;
        return j;
      }
      else {
        auto targets = nlohmann::json::array();
        for (const auto& t : a.targets) targets.push_back(t.to_uri());
        nlohmann::json j{{"type", a.kind == apps::ContentKind::Traffic ? "traffic_consumer" : "photo_consumer"},
                         {"targets", targets},
                         {"period_s", to_seconds(a.issue_period)},
                         {"slot_s", to_seconds(a.slot_length)},
                         {"start_s", to_seconds(a.start)},
                         {"lifetime_ms", a.interest_lifetime_ms},
                         {"reexpress_timeout_s", to_seconds(a.reexpress_timeout)},
                         {"max_reexpress", a.max_reexpress},
                         {"window", a.window}};
        if (a.max_requests != std::numeric_limits<std::uint64_t>::max()) j["max_requests"] = a.max_requests;
        return j;
      }
    },
    app);
}

} // namespace detail

inline nlohmann::json to_json(const Scenario& s)
{
  nlohmann::json j;
  j["name"] = s.name;
  j["duration_s"] = to_seconds(s.duration);
  j["seed"] = s.seed;
  if (!s.graph.empty()) j["road_graph"] = geo::to_json(s.graph);
  j["radio"] = {{"range_m", s.radio.range_m}, {"loss_probability", s.radio.loss_probability}};
  j["lal"] = {{"t_rank_max_ms", to_seconds(s.lal.t_rank_max) * 1000},
              {"t_rand_max_ms", to_seconds(s.lal.t_rand_max) * 1000},
              {"retx_timeout_ms", to_seconds(s.lal.retx_timeout) * 1000},
              {"max_retransmission", s.lal.max_retransmission},
              {"ack_policy", s.lal.ack_policy == lal::AckPolicy::Any ? "any" : "all_roads"},
              {"intersection_radius_m", s.lal.intersection_radius_m},
              {"jitter", s.lal.jitter}};
  j["strategy"] = ndn::to_string(s.strategy);
  j["cs_capacity_bytes"] = s.cs_capacity;
  j["sample_period_s"] = to_seconds(s.sample_period);
  auto nodes = nlohmann::json::array();
  auto hubs = nlohmann::json::array();
  for (const auto& n : s.nodes) {
    nlohmann::json o{{"id", n.id.value()}, {"adhoc", n.adhoc}, {"mobility", detail::mobility_json(n.mobility)}};
    if (!n.apps.empty()) {
      auto apps = nlohmann::json::array();
      for (const auto& a : n.apps) apps.push_back(detail::app_json(a));
      o["apps"] = apps;
    }
    if (!n.fib.empty()) {
      auto fib = nlohmann::json::array();
      for (const auto& f : n.fib) fib.push_back({{"prefix", f.prefix.to_uri()}, {"via", f.via.value()}});
      o["fib"] = fib;
    }
    if (n.cs_capacity) o["cs_capacity_bytes"] = *n.cs_capacity;
    if (n.shutdown) {
      nlohmann::json sd{{"after_first_satisfy", n.shutdown->after_first_satisfy}};
      if (n.shutdown->at) sd["at_s"] = to_seconds(*n.shutdown->at);
      o["shutdown"] = sd;
    }
    (n.hub ? hubs : nodes).push_back(o);
  }
  j["nodes"] = nodes;
  if (!hubs.empty()) j["hubs"] = hubs;
  if (!s.links.empty()) {
    auto links = nlohmann::json::array();
    for (const auto& l : s.links) {
      links.push_back({{"a", l.a.value()}, {"b", l.b.value()}, {"latency_ms", to_seconds(l.latency) * 1000}});
    }
    j["links"] = links;
  }
  return j;
}

} // namespace vndn::harness
