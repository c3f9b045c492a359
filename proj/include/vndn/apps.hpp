#pragma once

// Reference applications: info-traffic producer/consumer, road-photo
// producer/consumer with chunked retrieval, and the application-less mule role.

#include "vndn/ndn/chunking.hpp"
#include "vndn/rng.hpp"

#include <limits>
#include <map>

namespace vndn::apps {

// ---------------------------------------------------------------------------
// Info-traffic

struct TrafficReport {
  std::string label;
  SimTime timestamp{};
  std::string congestion;

  friend bool operator==(const TrafficReport&, const TrafficReport&) = default;
};

inline Bytes encode_traffic_payload(const TrafficReport& r)
{
  auto text = "label=" + r.label + ";t_ns=" + std::to_string(r.timestamp.count()) + ";congestion=" + r.congestion;
  return {text.begin(), text.end()};
}

inline std::optional<TrafficReport> parse_traffic_payload(ByteView payload)
{
  std::string text(payload.begin(), payload.end());
  std::map<std::string, std::string> fields;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    auto item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    auto eq = item.find('=');
    if (eq == std::string::npos) return std::nullopt;
    fields[item.substr(0, eq)] = item.substr(eq + 1);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (!fields.contains("label") || !fields.contains("t_ns") || !fields.contains("congestion")) return std::nullopt;
  try {
    return TrafficReport{fields["label"], SimTime{std::stoll(fields["t_ns"])}, fields["congestion"]};
  }
  catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Answers /traffic/... Interests for intersections it visited recently.
class TrafficProducer {
public:
  TrafficProducer(std::uint64_t producer_id, const geo::RoadGraph& graph, Duration freshness_window = from_seconds(300))
    : m_producer_id(producer_id)
    , m_graph(&graph)
    , m_freshness(freshness_window)
  {
  }

  /// Updates the visit log from a position sample.
  void observe(geo::GeoPoint position, SimTime now)
  {
    if (m_graph->empty()) return;
    m_visits[geo::reverse_geocode(*m_graph, position)] = now;
  }

  void record_visit(const std::string& label, SimTime when) { m_visits[label] = when; }

  const std::map<std::string, SimTime>& visit_log() const { return m_visits; }

  std::optional<ndn::Data> produce(const ndn::Interest& interest, SimTime now) const
  {
    if (interest.name[0] != "traffic") return std::nullopt;
    auto label = ndn::geo_label(interest.name, *m_graph);
    if (!label) return std::nullopt;
    auto it = m_visits.find(*label);
    if (it == m_visits.end() || now - it->second > m_freshness) return std::nullopt;

    static constexpr const char* levels[] = {"free", "moderate", "heavy"};
    auto token = levels[detail::fnv1a(*label + std::to_string(now.count())) % 3];
    ndn::Data d{interest.name};
    d.payload = encode_traffic_payload({*label, now, token});
    d.producer_id = m_producer_id;
    return ndn::seal(d);
  }

private:
  std::uint64_t m_producer_id;
  const geo::RoadGraph* m_graph;
  Duration m_freshness;
  std::map<std::string, SimTime> m_visits;
};

inline std::optional<ndn::Data> traffic_produce(const TrafficProducer& p, const ndn::Interest& i, SimTime now)
{
  return p.produce(i, now);
}

// ---------------------------------------------------------------------------
// Road-photo

struct PhotoProducerConfig {
  std::optional<std::size_t> photo_size_bytes; // fixed size, else sampled
  std::size_t min_size = 68'000;
  std::size_t max_size = 100'000;
  std::size_t chunk_size = 1300;
};

/// Takes a synthetic snapshot when asked for a picture of where it currently is.
class PhotoProducer {
public:
  PhotoProducer(std::uint64_t producer_id, const geo::RoadGraph& graph, std::uint64_t seed,
                PhotoProducerConfig cfg = {})
    : m_producer_id(producer_id)
    , m_graph(&graph)
    , m_seed(seed)
    , m_cfg(cfg)
  {
  }

  /// Photo content name of an Interest: the name without a trailing chunk component.
  static ndn::Name base_name(const ndn::Name& n)
  {
    if (n.size() > 1 && ndn::parse_chunk_component(n[n.size() - 1])) return n.parent();
    return n;
  }

  bool at_location(const ndn::Interest& interest, geo::GeoPoint position) const
  {
    if (interest.name[0] != "picture" || m_graph->empty()) return false;
    const auto& here = geo::reverse_geocode(*m_graph, position);
    const auto& comps = interest.name.components();
    return std::find(comps.begin(), comps.end(), here) != comps.end();
  }

  /// Deterministic payload for a photo name: same seed and name, same bytes.
  Bytes snapshot(const ndn::Name& base) const
  {
    auto rng = Rng::substream(m_seed, "photo:" + base.to_uri());
    auto size = m_cfg.photo_size_bytes ? *m_cfg.photo_size_bytes : rng.uniform_int(m_cfg.min_size, m_cfg.max_size);
    Bytes payload(size);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64() >> 56);
    return payload;
  }

  std::vector<ndn::Data> respond(const ndn::Interest& interest, geo::GeoPoint position) const
  {
    if (!at_location(interest, position)) return {};
    auto base = base_name(interest.name);
    return ndn::chunk_content(base, snapshot(base), m_cfg.chunk_size, m_producer_id);
  }

  const PhotoProducerConfig& config() const { return m_cfg; }

private:
  std::uint64_t m_producer_id;
  const geo::RoadGraph* m_graph;
  std::uint64_t m_seed;
  PhotoProducerConfig m_cfg;
};

inline std::vector<ndn::Data> photo_respond(const PhotoProducer& p, const ndn::Interest& i, geo::GeoPoint position)
{
  return p.respond(i, position);
}

// ---------------------------------------------------------------------------
// Consumers

enum class ContentKind { Traffic, Photo };

struct ConsumerConfig {
  ContentKind kind = ContentKind::Traffic;
  std::vector<ndn::Name> targets; // request name = target/<time slot>
  Duration issue_period = from_seconds(1);
  Duration slot_length = from_seconds(1);
  SimTime start{};
  std::uint64_t max_requests = std::numeric_limits<std::uint64_t>::max();
  std::uint32_t interest_lifetime_ms = 4000;
  Duration reexpress_timeout = from_seconds(1);
  std::uint32_t max_reexpress = 3;
  std::size_t window = 8; // outstanding chunk Interests per photo

  void validate() const
  {
    if (targets.empty()) throw std::invalid_argument("consumer needs at least one target");
    if (issue_period.count() <= 0 || slot_length.count() <= 0 || reexpress_timeout.count() <= 0) {
      throw std::invalid_argument("consumer periods must be > 0");
    }
    if (interest_lifetime_ms == 0) throw std::invalid_argument("interest lifetime must be > 0");
    if (window == 0) throw std::invalid_argument("window must be > 0");
  }
};

struct IssuedInterest {
  ndn::Interest interest;
  std::uint64_t request;
  bool first;            // the opening Interest of a request
  std::uint32_t attempt; // 0 for the initial expression
};

struct Satisfaction {
  std::uint64_t request;
  ndn::Name name;
  Duration response_time;
};

struct Unsatisfied {
  std::uint64_t request;
  ndn::Name name;
};

struct AppOutput {
  std::vector<IssuedInterest> issued;
  std::vector<Satisfaction> satisfied;
  std::vector<Unsatisfied> unsatisfied;

  void merge(AppOutput&& o)
  {
    std::move(o.issued.begin(), o.issued.end(), std::back_inserter(issued));
    std::move(o.satisfied.begin(), o.satisfied.end(), std::back_inserter(satisfied));
    std::move(o.unsatisfied.begin(), o.unsatisfied.end(), std::back_inserter(unsatisfied));
  }

  bool empty() const { return issued.empty() && satisfied.empty() && unsatisfied.empty(); }
};

/// Periodic requester. Only the first matching Data satisfies a request; later
/// copies are ignored here (the forwarder still caches them).
class Consumer {
public:
  Consumer(ConsumerConfig cfg, Rng rng)
    : m_cfg(std::move(cfg))
    , m_rng(std::move(rng))
    , m_next_issue(m_cfg.start)
  {
    m_cfg.validate();
  }

  const ConsumerConfig& config() const { return m_cfg; }

  std::optional<SimTime> next_wakeup() const
  {
    std::optional<SimTime> t;
    auto consider = [&](SimTime v) {
      if (!t || v < *t) t = v;
    };
    if (m_issued_requests < m_cfg.max_requests) consider(m_next_issue);
    for (const auto& [_, r] : m_requests) {
      for (const auto& [__, o] : r.outstanding) consider(o.last_issue + m_cfg.reexpress_timeout);
    }
    return t;
  }

  AppOutput step(SimTime now)
  {
    AppOutput out;
    while (m_issued_requests < m_cfg.max_requests && m_next_issue <= now) {
      auto slot = m_next_issue.count() / m_cfg.slot_length.count();
      for (const auto& target : m_cfg.targets) {
        if (m_issued_requests >= m_cfg.max_requests) break;
        auto id = m_next_request++;
        ++m_issued_requests;
        auto& r = m_requests[id];
        r.base = target.append(std::to_string(slot));
        r.first_issue = now;
        out.issued.push_back(express(id, r, r.base, now, true));
      }
      m_next_issue += m_cfg.issue_period;
    }

    for (auto it = m_requests.begin(); it != m_requests.end();) {
      auto& [id, r] = *it;
      bool failed = false;
      for (auto& [name, o] : r.outstanding) {
        if (now < o.last_issue + m_cfg.reexpress_timeout) continue;
        if (o.attempts >= m_cfg.max_reexpress) {
          failed = true;
          break;
        }
        ++o.attempts;
        out.issued.push_back(express(id, r, name, now, false));
      }
      if (failed) {
        out.unsatisfied.push_back({id, r.base});
        it = m_requests.erase(it);
      }
      else {
        ++it;
      }
    }
    return out;
  }

  AppOutput on_data(const ndn::Data& data, SimTime now)
  {
    AppOutput out;
    for (auto it = m_requests.begin(); it != m_requests.end(); ++it) {
      auto& [id, r] = *it;
      if (!r.base.is_prefix_of(data.name)) continue;
      if (m_cfg.kind == ContentKind::Traffic) {
        out.satisfied.push_back({id, r.base, now - r.first_issue});
        m_requests.erase(it);
        return out;
      }
      if (!accept_chunk(r, data)) continue;
      if (r.chunks.size() == r.chunk_count) {
        std::vector<ndn::Data> parts;
        for (auto& [_, c] : r.chunks) parts.push_back(c);
        if (ndn::reassemble(parts)) {
          out.satisfied.push_back({id, r.base, now - r.first_issue});
          m_requests.erase(it);
          return out;
        }
      }
      while (r.next_chunk < r.chunk_count && r.outstanding.size() < m_cfg.window) {
        auto name = r.base.append(ndn::chunk_component(r.next_chunk++));
        out.issued.push_back(express(id, r, name, now, false));
      }
      return out;
    }
    return out;
  }

  std::size_t outstanding_requests() const { return m_requests.size(); }

private:
  struct Outstanding {
    SimTime last_issue{};
    std::uint32_t attempts = 0;
  };

  struct Request {
    ndn::Name base{std::vector<std::string>{"pending"}};
    SimTime first_issue{};
    std::map<ndn::Name, Outstanding> outstanding;
    std::uint32_t chunk_count = 0;
    std::uint32_t next_chunk = 1;
    std::map<std::uint32_t, ndn::Data> chunks;
  };

  IssuedInterest express(std::uint64_t id, Request& r, const ndn::Name& name, SimTime now, bool first)
  {
    auto& o = r.outstanding[name];
    o.last_issue = now;
    ndn::Interest i{name};
    i.nonce = m_rng.next_u64();
    i.lifetime_ms = m_cfg.interest_lifetime_ms;
    return {std::move(i), id, first, o.attempts};
  }

  bool accept_chunk(Request& r, const ndn::Data& data)
  {
    if (data.name.size() <= r.base.size() || data.name.parent() != r.base) return false;
    // The base-name Interest is answered by chunk 0, which reveals the count.
    if (r.chunk_count == 0) r.chunk_count = data.chunk_count;
    if (data.chunk_count != r.chunk_count || data.chunk_index >= r.chunk_count) return false;
    if (!r.chunks.emplace(data.chunk_index, data).second) return false;
    r.outstanding.erase(data.name);
    if (data.chunk_index == 0) r.outstanding.erase(r.base);
    return true;
  }

  ConsumerConfig m_cfg;
  Rng m_rng;
  SimTime m_next_issue;
  std::uint64_t m_issued_requests = 0;
  std::uint64_t m_next_request = 0;
  std::map<std::uint64_t, Request> m_requests;
};

inline AppOutput consumer_step(Consumer& c, SimTime now) { return c.step(now); }

/// Mules source nothing: their behavior is the forwarder and the LAL alone.
inline AppOutput mule_tick() { return {}; }

} // namespace vndn::apps
