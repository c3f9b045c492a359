#pragma once

#include "vndn/ndn/packet.hpp"

#include <map>
#include <set>

namespace vndn::ndn {

struct PitEntry {
  Name name;
  std::set<FaceId> downstream_faces;
  std::set<std::uint64_t> nonces_seen;
  SimTime expiry{};
};

enum class PitOutcome { New, Aggregated, DuplicateNonce };

inline const char* to_string(PitOutcome o)
{
  switch (o) {
    case PitOutcome::New: return "new";
    case PitOutcome::Aggregated: return "aggregated";
    case PitOutcome::DuplicateNonce: return "duplicate_nonce";
  }
  return "?";
}

/// Pending Interest Table keyed by exact Interest name.
class Pit {
public:
  PitOutcome record(const Interest& i, FaceId face, SimTime now)
  {
    auto expiry = now + from_millis(i.lifetime_ms);
    auto it = m_entries.find(i.name);
    if (it != m_entries.end() && it->second.expiry < now) {
      m_entries.erase(it);
      it = m_entries.end();
    }
    if (it == m_entries.end()) {
      m_entries.emplace(i.name, PitEntry{i.name, {face}, {i.nonce}, expiry});
      return PitOutcome::New;
    }
    auto& e = it->second;
    if (e.nonces_seen.contains(i.nonce)) return PitOutcome::DuplicateNonce;
    e.nonces_seen.insert(i.nonce);
    e.downstream_faces.insert(face);
    e.expiry = std::max(e.expiry, expiry);
    return PitOutcome::Aggregated;
  }

  /// Removes and returns every live entry whose name equals or prefixes data_name.
  std::vector<PitEntry> consume(const Name& data_name, SimTime now)
  {
    std::vector<PitEntry> out;
    // Candidate entry names are the prefixes of data_name.
    std::vector<std::string> comps;
    for (const auto& c : data_name.components()) {
      comps.push_back(c);
      auto it = m_entries.find(Name(comps));
      if (it == m_entries.end()) continue;
      if (it->second.expiry >= now) out.push_back(std::move(it->second));
      m_entries.erase(it);
    }
    return out;
  }

  bool has_match(const Name& data_name, SimTime now) const
  {
    std::vector<std::string> comps;
    for (const auto& c : data_name.components()) {
      comps.push_back(c);
      auto it = m_entries.find(Name(comps));
      if (it != m_entries.end() && it->second.expiry >= now) return true;
    }
    return false;
  }

  /// Drops entries whose expiry is strictly before now.
  std::size_t sweep(SimTime now)
  {
    return std::erase_if(m_entries, [now](const auto& kv) { return kv.second.expiry < now; });
  }

  const PitEntry* find(const Name& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return m_entries.size(); }
  bool empty() const { return m_entries.empty(); }

  template <class Fn>
  void for_each(Fn&& fn) const
  {
    for (const auto& [_, e] : m_entries) fn(e);
  }

private:
  std::map<Name, PitEntry> m_entries;
};

inline PitOutcome pit_record(Pit& pit, const Interest& i, FaceId face, SimTime now)
{
  return pit.record(i, face, now);
}

} // namespace vndn::ndn
