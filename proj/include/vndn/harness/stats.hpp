#pragma once

// Run metrics: LAL transmission-count histogram, response times, cache vs
// forwarding counters per node class, and interest overhead. aggregate()
// rebuilds them from an event log alone.

#include "vndn/netsim/event_log.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace vndn::harness {

class MalformedLog : public std::runtime_error {
public:
  MalformedLog(std::size_t line, const std::string& why)
    : std::runtime_error("log line " + std::to_string(line) + ": " + why)
    , m_line(line)
  {
  }

  std::size_t line() const { return m_line; }

private:
  std::size_t m_line;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Node classes as written in the run_begin record.
namespace role {
inline constexpr const char* consumer = "consumer";
inline constexpr const char* producer = "producer";
inline constexpr const char* mule = "mule";
inline constexpr const char* hub = "hub";
} // namespace role

/// Interest handling at a set of nodes. Every received Interest ends in exactly
/// one of the four outcomes, so received == sum of the others.
struct ClassCounters {
  std::uint64_t interests_received = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t interests_forwarded = 0;
  std::uint64_t drops = 0;
  std::uint64_t app_deliveries = 0;

  /// Share of handled Interests answered from the content store.
  double cache_ratio() const
  {
    auto d = cache_hits + interests_forwarded;
    return d == 0 ? 0.0 : static_cast<double>(cache_hits) / static_cast<double>(d);
  }

  bool balanced() const { return interests_received == cache_hits + interests_forwarded + drops + app_deliveries; }

  friend bool operator==(const ClassCounters&, const ClassCounters&) = default;
};

struct Stats {
  std::map<std::uint32_t, std::uint64_t> tx_histogram; // resolved pendings by transmissions made
  std::uint64_t zero_tx_acks = 0;
  std::uint64_t giveups = 0;
  std::uint64_t open_pendings = 0; // unresolved at shutdown or end of run
  std::vector<std::int64_t> response_times_ns; // sorted

  ClassCounters all;
  ClassCounters consumers_mules;
  ClassCounters mules;

  std::uint64_t requests = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t unsatisfied = 0;
  std::uint64_t app_interests_issued = 0; // including re-expressions and chunk Interests
  std::uint64_t adhoc_interest_transmissions = 0;
  std::uint64_t adhoc_data_transmissions = 0;
  std::uint64_t link_transmissions = 0;
  std::uint64_t receptions = 0;
  std::uint64_t losses = 0;
  std::uint64_t out_of_range = 0;

  std::uint64_t resolved_pendings() const
  {
    std::uint64_t n = 0;
    for (const auto& [_, c] : tx_histogram) n += c;
    return n;
  }

  /// Fraction of resolved pendings finished within k transmissions.
  double tx_cdf(std::uint32_t k) const
  {
    auto total = resolved_pendings();
    if (total == 0) return 0.0;
    std::uint64_t n = 0;
    for (const auto& [v, c] : tx_histogram) {
      if (v <= k) n += c;
    }
    return static_cast<double>(n) / static_cast<double>(total);
  }

  double response_cdf(double seconds) const
  {
    if (response_times_ns.empty()) return 0.0;
    auto limit = from_seconds(seconds).count();
    auto n = std::upper_bound(response_times_ns.begin(), response_times_ns.end(), limit) - response_times_ns.begin();
    return static_cast<double>(n) / static_cast<double>(response_times_ns.size());
  }

  double mean_response_s() const
  {
    if (response_times_ns.empty()) return 0.0;
    long double sum = 0;
    for (auto v : response_times_ns) sum += static_cast<long double>(v);
    return static_cast<double>(sum / static_cast<long double>(response_times_ns.size()) / 1e9L);
  }

  double overhead_ratio() const
  {
    return app_interests_issued == 0
             ? 0.0
             : static_cast<double>(adhoc_interest_transmissions) / static_cast<double>(app_interests_issued);
  }

  double satisfaction_rate() const
  {
    return requests == 0 ? 0.0 : static_cast<double>(satisfied) / static_cast<double>(requests);
  }

  friend bool operator==(const Stats&, const Stats&) = default;
};

namespace detail {

/// Applies one Interest-handling outcome to every class the node belongs to.
template <class F>
void for_classes(Stats& s, const std::string& node_role, F&& f)
{
  f(s.all);
  if (node_role == role::consumer || node_role == role::mule) f(s.consumers_mules);
  if (node_role == role::mule) f(s.mules);
}

} // namespace detail

/// Rebuilds Stats from log lines. Independent of the simulator's own counters.
inline Stats aggregate(const std::vector<std::string>& lines)
{
  Stats s;
  std::map<std::int64_t, std::string> roles;
  auto role_of = [&](std::int64_t node) -> const std::string& {
    static const std::string none;
    auto it = roles.find(node);
    return it == roles.end() ? none : it->second;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto lineno = i + 1;
    netsim::SimEventRecord r;
    try {
      r = netsim::SimEventRecord::from_json(nlohmann::json::parse(lines[i]));
    }
    catch (const std::exception& e) {
      throw MalformedLog(lineno, e.what());
    }
    auto str = [&](const char* key) -> std::string {
      if (!r.extra.contains(key) || !r.extra.at(key).is_string()) {
        throw MalformedLog(lineno, std::string("missing string field '") + key + "'");
      }
      return r.extra.at(key).get<std::string>();
    };
    auto num = [&](const char* key) -> std::int64_t {
      if (!r.extra.contains(key) || !r.extra.at(key).is_number_integer()) {
        throw MalformedLog(lineno, std::string("missing integer field '") + key + "'");
      }
      return r.extra.at(key).get<std::int64_t>();
    };
    const auto& k = r.kind;
    namespace kind = netsim::kind;

    if (k == kind::run_begin) {
      if (!r.extra.contains("nodes") || !r.extra.at("nodes").is_array()) throw MalformedLog(lineno, "run_begin without nodes");
      for (const auto& n : r.extra.at("nodes")) {
        roles[n.at("id").get<std::int64_t>()] = n.at("role").get<std::string>();
      }
    }
    else if (k == kind::tx) {
      auto medium = str("medium");
      if (medium == "link") {
        ++s.link_transmissions;
        continue;
      }
      (str("pkt") == "interest" ? s.adhoc_interest_transmissions : s.adhoc_data_transmissions)++;
      s.receptions += static_cast<std::uint64_t>(num("rx"));
      s.losses += static_cast<std::uint64_t>(num("lost"));
      s.out_of_range += static_cast<std::uint64_t>(num("oor"));
    }
    else if (k == kind::rx) {
      if (str("pkt") == "interest") detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.interests_received; });
    }
    else if (k == kind::app_issue) {
      ++s.app_interests_issued;
      if (r.extra.value("first", false)) ++s.requests;
      detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.interests_received; });
    }
    else if (k == kind::cache_hit) {
      detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.cache_hits; });
    }
    else if (k == kind::pit_forward) {
      detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.interests_forwarded; });
    }
    else if (k == kind::drop) {
      if (str("pkt") == "interest") detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.drops; });
    }
    else if (k == kind::app_deliver) {
      if (str("pkt") == "interest") detail::for_classes(s, role_of(r.node), [](auto& c) { ++c.app_deliveries; });
    }
    else if (k == kind::ack) {
      if (r.extra.value("partial", false)) continue;
      auto tx = static_cast<std::uint32_t>(num("tx"));
      ++s.tx_histogram[tx];
      if (tx == 0) ++s.zero_tx_acks;
    }
    else if (k == kind::giveup) {
      ++s.tx_histogram[static_cast<std::uint32_t>(num("tx"))];
      ++s.giveups;
    }
    else if (k == kind::lal_open) {
      ++s.open_pendings;
    }
    else if (k == kind::app_satisfy) {
      ++s.satisfied;
      s.response_times_ns.push_back(num("rt_ns"));
    }
    else if (k == kind::app_unsatisfied) {
      ++s.unsatisfied;
    }
  }
  std::sort(s.response_times_ns.begin(), s.response_times_ns.end());
  return s;
}

inline Stats aggregate_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) lines.push_back(l);
  }
  return aggregate(lines);
}

// ---------------------------------------------------------------------------
// Reports

/// Fixed-format number printing so reports are byte-stable.
inline std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// (value, cumulative fraction) rows of the transmission-count distribution.
inline std::vector<std::pair<std::uint32_t, double>> tx_cdf_rows(const Stats& s)
{
  std::vector<std::pair<std::uint32_t, double>> rows;
  auto total = s.resolved_pendings();
  std::uint64_t acc = 0;
  for (const auto& [v, c] : s.tx_histogram) {
    acc += c;
    rows.emplace_back(v, static_cast<double>(acc) / static_cast<double>(total));
  }
  return rows;
}

/// (seconds, cumulative fraction) rows, one per distinct response time.
inline std::vector<std::pair<double, double>> response_cdf_rows(const Stats& s)
{
  std::vector<std::pair<double, double>> rows;
  const auto& v = s.response_times_ns;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    rows.emplace_back(static_cast<double>(v[i]) / 1e9, static_cast<double>(i + 1) / static_cast<double>(v.size()));
  }
  return rows;
}

inline std::string to_csv(const std::vector<std::pair<std::uint32_t, double>>& rows)
{
  std::string out = "value,cum_fraction\n";
  for (const auto& [v, f] : rows) out += std::to_string(v) + "," + fmt(f) + "\n";
  return out;
}

inline std::string to_csv(const std::vector<std::pair<double, double>>& rows)
{
  std::string out = "value,cum_fraction\n";
  for (const auto& [v, f] : rows) out += fmt(v) + "," + fmt(f) + "\n";
  return out;
}

inline nlohmann::json to_json(const ClassCounters& c)
{
  return {{"interests_received", c.interests_received},
          {"cache_hits", c.cache_hits},
          {"interests_forwarded", c.interests_forwarded},
          {"drops", c.drops},
          {"app_deliveries", c.app_deliveries}};
}

/// Stats as a JSON document. Ratios are written as fixed-format strings so the
/// file does not depend on the JSON library's float printing.
inline nlohmann::json to_json(const Stats& s)
{
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [v, c] : s.tx_histogram) hist[std::to_string(v)] = c;
  return {{"tx_histogram", hist},
          {"resolved_pendings", s.resolved_pendings()},
          {"zero_tx_acks", s.zero_tx_acks},
          {"giveups", s.giveups},
          {"open_pendings", s.open_pendings},
          {"response_times_ns", s.response_times_ns},
          {"all", to_json(s.all)},
          {"consumers_mules", to_json(s.consumers_mules)},
          {"mules", to_json(s.mules)},
          {"requests", s.requests},
          {"satisfied", s.satisfied},
          {"unsatisfied", s.unsatisfied},
          {"app_interests_issued", s.app_interests_issued},
          {"adhoc_interest_transmissions", s.adhoc_interest_transmissions},
          {"adhoc_data_transmissions", s.adhoc_data_transmissions},
          {"link_transmissions", s.link_transmissions},
          {"receptions", s.receptions},
          {"losses", s.losses},
          {"out_of_range", s.out_of_range},
          {"overhead_ratio", fmt(s.overhead_ratio())},
          {"satisfaction_rate", fmt(s.satisfaction_rate())},
          {"mean_response_s", fmt(s.mean_response_s())}};
}

enum class ReportFormat { Json, Csv };

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot write");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

} // namespace detail

/// Writes stats.json (Json) or the CDF tables and a counter table (Csv) into dir.
inline std::vector<std::filesystem::path> report(const Stats& s, ReportFormat format, const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == ReportFormat::Json) {
    written.push_back(dir / "stats.json");
    detail::write_file(written.back(), to_json(s).dump(2) + "\n");
    return written;
  }
  written.push_back(dir / "tx_cdf.csv");
  detail::write_file(written.back(), to_csv(tx_cdf_rows(s)));
  written.push_back(dir / "response_cdf.csv");
  detail::write_file(written.back(), to_csv(response_cdf_rows(s)));

  std::string counters = "class,interests_received,cache_hits,interests_forwarded,drops,app_deliveries\n";
  for (const auto& [name, c] :
       {std::pair{"all", &s.all}, std::pair{"consumers_mules", &s.consumers_mules}, std::pair{"mules", &s.mules}}) {
    counters += std::string(name) + "," + std::to_string(c->interests_received) + "," + std::to_string(c->cache_hits) +
                "," + std::to_string(c->interests_forwarded) + "," + std::to_string(c->drops) + "," +
                std::to_string(c->app_deliveries) + "\n";
  }
  written.push_back(dir / "counters.csv");
  detail::write_file(written.back(), counters);
  return written;
}

} // namespace vndn::harness
