#pragma once

#include "vndn/geo.hpp"
#include "vndn/rng.hpp"

#include <algorithm>

namespace vndn::netsim {

/// Unit-disk range with independent per-receiver Bernoulli loss.
struct RadioModel {
  double range_m = 300.0;
  double loss_probability = 0.0;
  Duration propagation_delay = Duration{1000}; // 1 us
  double bitrate_bps = 1e6;

  Duration serialization_delay(std::size_t frame_bytes) const
  {
    return Duration{static_cast<std::int64_t>(std::llround(static_cast<double>(frame_bytes) * 8.0 / bitrate_bps * 1e9))};
  }
};

struct RadioNode {
  NodeId id;
  geo::GeoPoint position;
  bool alive = true;
};

struct Reception {
  NodeId receiver;
  SimTime time;
};

struct BroadcastOutcome {
  std::vector<Reception> receptions;
  std::size_t lost = 0;
  std::size_t out_of_range = 0; // includes nodes that are switched off
};

/// Receivers of one broadcast. Loss draws are taken only for in-range, live
/// receivers, in ascending node-id order.
inline BroadcastOutcome deliver_broadcast(const RadioModel& radio, NodeId sender, geo::GeoPoint sender_pos,
                                          std::span<const RadioNode> nodes, SimTime t, Rng& rng)
{
  std::vector<const RadioNode*> order;
  order.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (n.id != sender) order.push_back(&n);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  BroadcastOutcome out;
  for (const auto* n : order) {
    if (!n->alive || geo::distance(sender_pos, n->position) > radio.range_m) {
      ++out.out_of_range;
      continue;
    }
    if (radio.loss_probability > 0.0 && rng.bernoulli(radio.loss_probability)) {
      ++out.lost;
      continue;
    }
    out.receptions.push_back({n->id, t + radio.propagation_delay});
  }
  return out;
}

/// Lossless point-to-point infrastructure link with fixed latency.
struct Link {
  NodeId a;
  NodeId b;
  Duration latency = from_millis(20);

  NodeId peer_of(NodeId n) const { return n == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
};

inline SimTime link_deliver(const Link& link, SimTime t) { return t + link.latency; }

} // namespace vndn::netsim
