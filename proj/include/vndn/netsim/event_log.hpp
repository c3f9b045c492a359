#pragma once

#include "vndn/digest.hpp"

#include "json.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace vndn::netsim {

/// Record kinds written by the simulator.
namespace kind {
inline constexpr const char* tx = "tx";
inline constexpr const char* rx = "rx";
inline constexpr const char* drop = "drop";
inline constexpr const char* cache_hit = "cache_hit";
inline constexpr const char* pit_forward = "pit_forward";
inline constexpr const char* app_deliver = "app_deliver";
inline constexpr const char* schedule = "schedule";
inline constexpr const char* ack = "ack";
inline constexpr const char* giveup = "giveup";
inline constexpr const char* lal_open = "lal_open";
inline constexpr const char* app_issue = "app_issue";
inline constexpr const char* app_satisfy = "app_satisfy";
inline constexpr const char* app_unsatisfied = "app_unsatisfied";
inline constexpr const char* shutdown = "shutdown";
inline constexpr const char* run_begin = "run_begin";
} // namespace kind

struct SimEventRecord {
  SimTime time{};
  std::int64_t node = -1; // -1 for run-level records
  std::string kind;
  std::string packet_id; // hex, empty when not packet-related
  std::string name;
  nlohmann::json extra = nlohmann::json::object();

  /// One JSON object; keys come out sorted, so equal records serialize equally.
  std::string to_line() const
  {
    nlohmann::json j = extra;
    j["t"] = time.count();
    j["node"] = node;
    j["kind"] = kind;
    if (!packet_id.empty()) j["pid"] = packet_id;
    if (!name.empty()) j["name"] = name;
    return j.dump();
  }

  static SimEventRecord from_json(const nlohmann::json& j)
  {
    SimEventRecord r;
    r.time = SimTime{j.at("t").get<std::int64_t>()};
    r.node = j.at("node").get<std::int64_t>();
    r.kind = j.at("kind").get<std::string>();
    if (j.contains("pid")) r.packet_id = j.at("pid").get<std::string>();
    if (j.contains("name")) r.name = j.at("name").get<std::string>();
    for (const auto& [k, v] : j.items()) {
      if (k != "t" && k != "node" && k != "kind" && k != "pid" && k != "name") r.extra[k] = v;
    }
    return r;
  }
};

inline std::string digest_of_lines(const std::vector<std::string>& lines)
{
  Sha256 h;
  for (const auto& l : lines) h.update(l).update(std::string_view("\n"));
  return to_hex(h.finish());
}

/// Append-only newline-delimited JSON log.
class EventLog {
public:
  void append(const SimEventRecord& r)
  {
    m_lines.push_back(r.to_line());
  }

  const std::vector<std::string>& lines() const { return m_lines; }
  std::size_t size() const { return m_lines.size(); }

  /// Hex SHA-256 of the log text as written to disk.
  std::string digest() const { return digest_of_lines(m_lines); }

  void write(const std::string& path) const
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write");
    for (const auto& l : m_lines) out << l << '\n';
  }

private:
  std::vector<std::string> m_lines;
};

} // namespace vndn::netsim
