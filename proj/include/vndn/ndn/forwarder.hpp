#pragma once

// Per-node forwarding decisions. Every function here is a synchronous
// transformation of an explicit NodeState; the caller (the simulator) turns the
// returned actions into link-layer work.

#include "vndn/ndn/content_store.hpp"
#include "vndn/ndn/pit.hpp"

#include <map>
#include <variant>

namespace vndn::ndn {

enum class FaceKind { LocalApp, AdhocBroadcast, InfrastructureLink };

inline const char* to_string(FaceKind k)
{
  switch (k) {
    case FaceKind::LocalApp: return "local";
    case FaceKind::AdhocBroadcast: return "adhoc";
    case FaceKind::InfrastructureLink: return "link";
  }
  return "?";
}

struct Face {
  FaceId id;
  FaceKind kind;
  std::optional<NodeId> peer; // set for infrastructure links
};

enum class Strategy { ControlledFlood, GreedyGeo };

inline const char* to_string(Strategy s)
{
  return s == Strategy::ControlledFlood ? "controlled_flood" : "greedy_geo";
}

struct FibEntry {
  Name prefix;
  FaceId face;
};

enum class DropReason { DuplicateNonce, IntegrityFail, GeoSuppressed, NoRoute };

inline const char* to_string(DropReason r)
{
  switch (r) {
    case DropReason::DuplicateNonce: return "duplicate_nonce";
    case DropReason::IntegrityFail: return "integrity_fail";
    case DropReason::GeoSuppressed: return "geo_suppressed";
    case DropReason::NoRoute: return "no_route";
  }
  return "?";
}

struct NodeState {
  NodeId id;
  std::vector<Face> faces;
  Pit pit;
  ContentStore cs;
  std::vector<FibEntry> fib;
  Strategy strategy = Strategy::ControlledFlood;
  geo::GeoPoint position;
  // Nonces of Interests already forwarded or delivered, kept until their lifetime
  // lapses so that a consumed PIT entry does not let a replay through.
  std::map<std::uint64_t, SimTime> dead_nonces;

  /// Face 0 is the local application face; an ad-hoc face follows when present,
  /// then one face per infrastructure link peer.
  static NodeState make(NodeId id, bool adhoc, std::span<const NodeId> link_peers = {},
                        std::size_t cs_capacity = ContentStore::default_capacity)
  {
    NodeState s{id, {}, {}, ContentStore(cs_capacity)};
    std::uint32_t next = 0;
    s.faces.push_back({FaceId{next++}, FaceKind::LocalApp, std::nullopt});
    if (adhoc) s.faces.push_back({FaceId{next++}, FaceKind::AdhocBroadcast, std::nullopt});
    for (auto peer : link_peers) s.faces.push_back({FaceId{next++}, FaceKind::InfrastructureLink, peer});
    return s;
  }

  const Face& face(FaceId id) const { return faces.at(id.value()); }

  std::optional<FaceId> adhoc_face() const
  {
    for (const auto& f : faces) {
      if (f.kind == FaceKind::AdhocBroadcast) return f.id;
    }
    return std::nullopt;
  }

  std::optional<FaceId> link_face_to(NodeId peer) const
  {
    for (const auto& f : faces) {
      if (f.kind == FaceKind::InfrastructureLink && f.peer == peer) return f.id;
    }
    return std::nullopt;
  }

  FaceId local_face() const { return faces.front().id; }

  /// Expiry sweep run at the start of every event touching this node.
  void sweep(SimTime now)
  {
    pit.sweep(now);
    std::erase_if(dead_nonces, [now](const auto& kv) { return kv.second < now; });
  }
};

struct ReplyData {
  Data data;
  FaceId face;
};
struct DeliverToApp {
  Packet packet;
};
struct ForwardBroadcast {
  Packet packet;
};
struct ForwardUnicast {
  Packet packet;
  FaceId face;
};
struct CacheInsert {
  Name name;
  std::uint32_t chunk_index = 0;
  bool stored = true;
  std::vector<Name> evicted;
};
struct Drop {
  DropReason reason;
};

using Action = std::variant<ReplyData, DeliverToApp, ForwardBroadcast, ForwardUnicast, CacheInsert, Drop>;

/// What the caller knows about where an Interest came from.
struct InterestContext {
  std::optional<geo::GeoPoint> previous_hop; // position of the ad-hoc sender
  const geo::RoadGraph* graph = nullptr;     // for geo hints
};

/// Decision pipeline for an incoming Interest, in order: content store hit,
/// duplicate nonce, local production, then PIT record and strategy forwarding.
/// can_produce(interest) tells whether a local producer can answer right now.
template <class CanProduce>
std::vector<Action> on_interest(NodeState& node, const Interest& interest, FaceId arrival, SimTime now,
                                const InterestContext& ctx, CanProduce&& can_produce)
{
  node.sweep(now);
  if (auto hit = node.cs.lookup(interest.name)) {
    return {ReplyData{std::move(*hit), arrival}};
  }

  auto seen = [&] {
    if (node.dead_nonces.contains(interest.nonce)) return true;
    auto* e = node.pit.find(interest.name);
    return e && e->nonces_seen.contains(interest.nonce);
  };
  if (seen()) return {Drop{DropReason::DuplicateNonce}};

  auto lifetime_end = now + from_millis(interest.lifetime_ms);
  if (can_produce(interest)) {
    node.dead_nonces[interest.nonce] = lifetime_end;
    return {DeliverToApp{interest}};
  }

  if (pit_record(node.pit, interest, arrival, now) == PitOutcome::DuplicateNonce) {
    return {Drop{DropReason::DuplicateNonce}};
  }
  node.dead_nonces[interest.nonce] = lifetime_end;

  Interest out = interest;
  out.hop_count = static_cast<std::uint16_t>(interest.hop_count + 1);

  std::vector<Action> actions;
  bool geo_blocked = false;
  if (node.adhoc_face()) {
    bool forward = true;
    if (node.strategy == Strategy::GreedyGeo && ctx.previous_hop && ctx.graph) {
      if (auto hint = geo_hint(interest.name, *ctx.graph)) {
        forward = geo::distance(node.position, *hint) < geo::distance(*ctx.previous_hop, *hint);
      }
    }
    if (forward) {
      actions.push_back(ForwardBroadcast{out});
    }
    else {
      geo_blocked = true;
    }
  }
  std::set<FaceId> unicast;
  for (const auto& fib : node.fib) {
    if (fib.face != arrival && fib.prefix.is_prefix_of(interest.name)) unicast.insert(fib.face);
  }
  for (auto f : unicast) actions.push_back(ForwardUnicast{out, f});

  if (actions.empty()) {
    actions.push_back(Drop{geo_blocked ? DropReason::GeoSuppressed : DropReason::NoRoute});
  }
  return actions;
}

/// Incoming Data: verify, cache unconditionally, then satisfy matching PIT entries.
inline std::vector<Action> on_data(NodeState& node, const Data& data, FaceId arrival, SimTime now)
{
  node.sweep(now);
  if (!verify(data)) return {Drop{DropReason::IntegrityFail}};

  std::vector<Action> actions;
  CacheInsert ci{data.name, data.chunk_index};
  try {
    ci.evicted = node.cs.insert(data);
    ci.stored = node.cs.contains(data.name, data.chunk_index);
  }
  catch (const CacheError&) {
    ci.stored = false;
  }
  actions.push_back(std::move(ci));

  std::set<FaceId> downstream;
  for (auto& entry : node.pit.consume(data.name, now)) {
    downstream.insert(entry.downstream_faces.begin(), entry.downstream_faces.end());
  }
  bool deliver = false;
  bool broadcast = false;
  for (auto f : downstream) {
    switch (node.face(f).kind) {
      case FaceKind::LocalApp: deliver = true; break;
      case FaceKind::AdhocBroadcast: broadcast = true; break;
      case FaceKind::InfrastructureLink:
        if (f != arrival) actions.push_back(ForwardUnicast{data, f});
        break;
    }
  }
  if (deliver) actions.push_back(DeliverToApp{data});
  if (broadcast) actions.push_back(ForwardBroadcast{data});
  return actions;
}

} // namespace vndn::ndn
