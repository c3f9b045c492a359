#pragma once

#include "vndn/common.hpp"

#include <queue>
#include <vector>

namespace vndn::netsim {

/// Min-queue ordered by (fire time, insertion sequence): FIFO among equal times.
template <class Payload>
class EventQueue {
public:
  struct Entry {
    SimTime time;
    std::uint64_t sequence;
    Payload payload;
  };

  std::uint64_t push(SimTime time, Payload payload)
  {
    auto seq = m_next_seq++;
    m_heap.push(Entry{time, seq, std::move(payload)});
    return seq;
  }

  bool empty() const { return m_heap.empty(); }
  std::size_t size() const { return m_heap.size(); }
  SimTime next_time() const { return m_heap.top().time; }

  Entry pop()
  {
    // The entry is popped right after, so moving out of top() is safe.
    Entry e = std::move(const_cast<Entry&>(m_heap.top()));
    m_heap.pop();
    return e;
  }

private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const
    {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> m_heap;
  std::uint64_t m_next_seq = 0;
};

} // namespace vndn::netsim
