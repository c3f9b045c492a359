#pragma once

#include "vndn/ndn/packet.hpp"

#include <list>
#include <map>
#include <optional>
#include <utility>

namespace vndn::ndn {

class CacheError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Byte-bounded LRU packet cache with no expiry. Only payload bytes count
/// against the capacity. A capacity of zero disables caching entirely.
class ContentStore {
public:
  static constexpr std::size_t default_capacity = 10'000'000;

  using Key = std::pair<Name, std::uint32_t>; // (name, chunk index)

  explicit ContentStore(std::size_t capacity_bytes = default_capacity)
    : m_capacity(capacity_bytes)
  {
  }

  /// Stores d (or refreshes its recency) and returns the names evicted to make room.
  /// Throws CacheError when the payload alone exceeds the capacity.
  std::vector<Name> insert(const Data& d)
  {
    std::vector<Name> evicted;
    if (m_capacity == 0) return evicted;
    if (d.payload.size() > m_capacity) {
      throw CacheError("payload of " + std::to_string(d.payload.size()) +
                       " bytes exceeds content store capacity");
    }
    Key key{d.name, d.chunk_index};
    if (auto it = m_entries.find(key); it != m_entries.end()) {
      touch(it->second);
      return evicted;
    }
    m_lru.push_front(key);
    m_entries.emplace(key, Entry{d, m_lru.begin()});
    m_bytes += d.payload.size();
    while (m_bytes > m_capacity) {
      const auto& victim = m_lru.back();
      auto it = m_entries.find(victim);
      m_bytes -= it->second.data.payload.size();
      evicted.push_back(victim.first);
      m_entries.erase(it);
      m_lru.pop_back();
    }
    return evicted;
  }

  /// Exact-name match first; otherwise the lowest chunk index among names
  /// that extend interest_name. Refreshes recency on a hit.
  std::optional<Data> lookup(const Name& interest_name)
  {
    auto it = m_entries.lower_bound(Key{interest_name, 0});
    if (it != m_entries.end() && it->first.first == interest_name) {
      touch(it->second);
      return it->second.data;
    }
    auto best = m_entries.end();
    for (; it != m_entries.end() && interest_name.is_prefix_of(it->first.first); ++it) {
      if (best == m_entries.end() || it->first.second < best->first.second) best = it;
    }
    if (best == m_entries.end()) return std::nullopt;
    touch(best->second);
    return best->second.data;
  }

  bool contains(const Name& name, std::uint32_t chunk_index = 0) const
  {
    return m_entries.contains(Key{name, chunk_index});
  }

  std::size_t size() const { return m_entries.size(); }
  std::size_t bytes() const { return m_bytes; }
  std::size_t capacity() const { return m_capacity; }

  /// Keys from most to least recently used.
  std::vector<Key> recency_order() const { return {m_lru.begin(), m_lru.end()}; }

private:
  struct Entry {
    Data data;
    std::list<Key>::iterator pos;
  };

  void touch(Entry& e) { m_lru.splice(m_lru.begin(), m_lru, e.pos); }

  std::size_t m_capacity;
  std::size_t m_bytes = 0;
  std::list<Key> m_lru;
  std::map<Key, Entry> m_entries;
};

inline std::vector<Name> cs_insert(ContentStore& store, const Data& d) { return store.insert(d); }

inline std::optional<Data> cs_lookup(ContentStore& store, const Name& interest_name)
{
  return store.lookup(interest_name);
}

} // namespace vndn::ndn
