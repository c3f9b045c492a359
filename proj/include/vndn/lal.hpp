#pragma once

// Link Adaptation Layer: broadcast framing, distance-ranked forwarding timers,
// implicit acknowledgment by overhearing, per-road spatial acknowledgment at
// intersections, and bounded retransmission.

#include "vndn/geo.hpp"
#include "vndn/ndn/packet.hpp"
#include "vndn/rng.hpp"

#include <bit>
#include <map>
#include <set>
#include <variant>

namespace vndn::lal {

struct PacketIdTag {};
using PacketId = StrongId<PacketIdTag>;

inline std::string to_hex(PacketId id)
{
  Bytes b;
  be::put(b, id.value());
  return vndn::to_hex(b);
}

/// 64-bit digest of an encoded NDN packet. The Interest hop count is the one
/// field a forwarder rewrites, so it is masked out: a rebroadcast carries the
/// same id as the copy it was made from.
inline PacketId packet_id(ByteView inner)
{
  Sha256 h;
  if (!inner.empty() && inner[0] == static_cast<std::uint8_t>(ndn::PacketKind::Interest) && inner.size() >= 2) {
    h.update(inner.first(inner.size() - 2));
    static constexpr std::uint8_t zero[2] = {0, 0};
    h.update(ByteView(zero, 2));
  }
  else {
    h.update(inner);
  }
  auto d = h.finish();
  return PacketId{be::get<std::uint64_t>(d, 0)};
}

struct LalFrame {
  PacketId packet_id;
  NodeId last_hop_node;
  geo::GeoPoint last_hop_position;
  Bytes inner;

  static LalFrame wrap(Bytes inner, NodeId sender, geo::GeoPoint position)
  {
    auto id = lal::packet_id(inner);
    return {id, sender, position, std::move(inner)};
  }

  friend bool operator==(const LalFrame&, const LalFrame&) = default;
};

class FrameError : public std::runtime_error {
public:
  enum class Code { Truncated, BadKind };

  FrameError(Code code, const std::string& what)
    : std::runtime_error(what)
    , m_code(code)
  {
  }

  Code code() const { return m_code; }

private:
  Code m_code;
};

constexpr std::size_t frame_header_size = 8 + 8 + 8 + 8 + 4;

/// packet_id (8) | last_hop_node (8) | x (8, IEEE-754) | y (8) | inner length (4) | inner
inline Bytes frame_encode(const LalFrame& f)
{
  Bytes out;
  out.reserve(frame_header_size + f.inner.size());
  be::put(out, f.packet_id.value());
  be::put(out, f.last_hop_node.value());
  be::put(out, std::bit_cast<std::uint64_t>(f.last_hop_position.x));
  be::put(out, std::bit_cast<std::uint64_t>(f.last_hop_position.y));
  be::put<std::uint32_t>(out, static_cast<std::uint32_t>(f.inner.size()));
  out.insert(out.end(), f.inner.begin(), f.inner.end());
  return out;
}

inline LalFrame frame_decode(ByteView bytes)
{
  if (bytes.size() < frame_header_size) {
    throw FrameError(FrameError::Code::Truncated, "frame header truncated");
  }
  LalFrame f;
  f.packet_id = PacketId{be::get<std::uint64_t>(bytes, 0)};
  f.last_hop_node = NodeId{be::get<std::uint64_t>(bytes, 8)};
  f.last_hop_position.x = std::bit_cast<double>(be::get<std::uint64_t>(bytes, 16));
  f.last_hop_position.y = std::bit_cast<double>(be::get<std::uint64_t>(bytes, 24));
  auto len = be::get<std::uint32_t>(bytes, 32);
  if (bytes.size() - frame_header_size < len) {
    throw FrameError(FrameError::Code::Truncated, "frame payload truncated");
  }
  if (bytes.size() - frame_header_size > len) {
    throw FrameError(FrameError::Code::Truncated, "frame length mismatch");
  }
  auto inner = bytes.subspan(frame_header_size, len);
  if (inner.empty() || (inner[0] != static_cast<std::uint8_t>(ndn::PacketKind::Interest) &&
                        inner[0] != static_cast<std::uint8_t>(ndn::PacketKind::Data))) {
    throw FrameError(FrameError::Code::BadKind, "frame carries an unknown packet kind");
  }
  f.inner.assign(inner.begin(), inner.end());
  return f;
}

enum class AckPolicy { Any, AllRoadsAtIntersection };

struct LalConfig {
  double radio_range_m = 300.0;
  Duration t_rand_max = from_millis(5);
  Duration t_rank_max = from_millis(20);
  Duration retx_timeout = from_millis(100);
  std::uint32_t max_retransmission = 7;
  AckPolicy ack_policy = AckPolicy::Any;
  // Spatial acknowledgment applies only this close to an intersection.
  double intersection_radius_m = 25.0;
  bool jitter = true;

  void validate() const
  {
    if (!(radio_range_m > 0)) throw std::invalid_argument("radio range must be > 0");
    if (t_rand_max.count() <= 0 || t_rank_max.count() <= 0 || retx_timeout.count() <= 0) {
      throw std::invalid_argument("LAL durations must be > 0");
    }
    if (max_retransmission < 1) throw std::invalid_argument("max_retransmission must be >= 1");
  }
};

/// Contention delay that lets the farthest receiver fire first:
/// t_rank_max * (1 - min(d, R) / R).
inline Duration rank_delay(double d, const LalConfig& cfg)
{
  double frac = 1.0 - std::min(std::max(d, 0.0), cfg.radio_range_m) / cfg.radio_range_m;
  return Duration{static_cast<std::int64_t>(std::llround(static_cast<double>(cfg.t_rank_max.count()) * frac))};
}

enum class PendingState { Scheduled, AwaitingAck, Done, GaveUp };

inline const char* to_string(PendingState s)
{
  switch (s) {
    case PendingState::Scheduled: return "scheduled";
    case PendingState::AwaitingAck: return "awaiting_ack";
    case PendingState::Done: return "done";
    case PendingState::GaveUp: return "gave_up";
  }
  return "?";
}

/// Marks a pending that needs one acknowledgment from anywhere.
inline constexpr SegmentId any_direction{-1};

struct PendingTransmission {
  LalFrame frame; // as received; frame.last_hop_node is the upstream sender
  ndn::PacketKind kind = ndn::PacketKind::Interest;
  std::optional<ndn::Name> interest_name;
  std::uint32_t transmissions_done = 0;
  SimTime next_fire{};
  std::optional<IntersectionId> intersection;
  std::set<SegmentId> required_directions;
  std::set<SegmentId> acked_directions;
  PendingState state = PendingState::Scheduled;
  std::uint64_t generation = 0;

  bool active() const { return state == PendingState::Scheduled || state == PendingState::AwaitingAck; }
};

enum class OverhearResult { Ignored, PartialAck, FullAckCancelled };

struct Transmit {
  LalFrame frame;
  SimTime rearm_at;
};
struct GiveUp {};
using TimerResult = std::variant<Transmit, GiveUp>;

struct KindCounters {
  std::uint64_t transmissions = 0;
  std::uint64_t zero_tx_acks = 0;
  std::uint64_t give_ups = 0;
  std::uint64_t acks_received = 0;

  friend bool operator==(const KindCounters&, const KindCounters&) = default;
};

struct LalCounters {
  KindCounters interest;
  KindCounters data;

  KindCounters& of(ndn::PacketKind k) { return k == ndn::PacketKind::Interest ? interest : data; }
  const KindCounters& of(ndn::PacketKind k) const
  {
    return k == ndn::PacketKind::Interest ? interest : data;
  }

  friend bool operator==(const LalCounters&, const LalCounters&) = default;
};

struct ScheduleResult {
  PendingTransmission* pending;
  bool duplicate; // an active pending already existed and was kept
};

/// A pending that reached Done through an acknowledgment other than overhearing.
struct Resolution {
  PacketId id;
  ndn::PacketKind kind;
  std::uint32_t transmissions;
};

/// One node's LAL. Resolved records stay until a new need for the same packet
/// replaces them, so an acknowledged packet is never sent twice by accident.
class LinkAdaptationLayer {
public:
  LinkAdaptationLayer(NodeId self, LalConfig cfg)
    : m_self(self)
    , m_cfg(cfg)
  {
    m_cfg.validate();
  }

  const LalConfig& config() const { return m_cfg; }
  NodeId self() const { return m_self; }

  /// Arms a pending for frame at now + rank_delay(distance to last hop) + jitter.
  ScheduleResult schedule_forward(const LalFrame& frame, geo::GeoPoint self_pos, SimTime now, Rng& rng,
                                  const geo::RoadGraph* graph = nullptr)
  {
    auto it = m_pending.find(frame.packet_id);
    if (it != m_pending.end() && it->second.active()) {
      return {&it->second, true};
    }
    PendingTransmission p;
    p.frame = frame;
    p.kind = static_cast<ndn::PacketKind>(frame.inner.at(0));
    if (p.kind == ndn::PacketKind::Interest) {
      p.interest_name = std::get<ndn::Interest>(ndn::decode(frame.inner)).name;
    }
    Duration delay = rank_delay(geo::distance(frame.last_hop_position, self_pos), m_cfg);
    if (m_cfg.jitter) {
      delay += Duration{static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(m_cfg.t_rand_max.count()))};
    }
    p.next_fire = now + delay;
    p.required_directions = {any_direction};
    if (m_cfg.ack_policy == AckPolicy::AllRoadsAtIntersection && graph && !graph->empty()) {
      auto near = geo::nearest_intersection(*graph, self_pos);
      if (geo::distance(graph->intersection(near).point, self_pos) <= m_cfg.intersection_radius_m) {
        auto roads = geo::roads_at(*graph, near);
        if (!roads.empty()) {
          p.intersection = near;
          p.required_directions = std::move(roads);
        }
      }
    }
    p.generation = ++m_generation;
    auto& slot = m_pending[frame.packet_id];
    slot = std::move(p);
    return {&slot, false};
  }

  OverhearResult on_overhear(const LalFrame& frame, NodeId heard_from, geo::GeoPoint heard_pos, SimTime,
                             const geo::RoadGraph* graph = nullptr)
  {
    auto it = m_pending.find(frame.packet_id);
    if (it == m_pending.end() || !it->second.active()) return OverhearResult::Ignored;
    auto& p = it->second;
    if (heard_from == m_self || heard_from == p.frame.last_hop_node) return OverhearResult::Ignored;
    if (p.intersection && graph) {
      auto dir = geo::direction_of(*graph, *p.intersection, heard_pos);
      if (p.required_directions.contains(dir)) p.acked_directions.insert(dir);
      if (p.acked_directions != p.required_directions) return OverhearResult::PartialAck;
    }
    else {
      p.acked_directions = p.required_directions;
    }
    resolve_ack(p);
    return OverhearResult::FullAckCancelled;
  }

  /// Fires the timer of an active pending. Returns nullopt for stale timers
  /// (wrong generation or no longer active).
  std::optional<TimerResult> on_timer(PacketId id, std::uint64_t generation, SimTime now, geo::GeoPoint self_pos)
  {
    auto it = m_pending.find(id);
    if (it == m_pending.end()) return std::nullopt;
    auto& p = it->second;
    if (!p.active() || p.generation != generation) return std::nullopt;
    if (p.transmissions_done < m_cfg.max_retransmission) {
      ++p.transmissions_done;
      ++m_counters.of(p.kind).transmissions;
      p.state = PendingState::AwaitingAck;
      p.next_fire = now + m_cfg.retx_timeout;
      return Transmit{LalFrame{p.frame.packet_id, m_self, self_pos, p.frame.inner}, p.next_fire};
    }
    p.state = PendingState::GaveUp;
    ++m_counters.of(p.kind).give_ups;
    return GiveUp{};
  }

  /// A returning Data acknowledges every active Interest pending it satisfies:
  /// the request has made all the progress it needs.
  std::vector<Resolution> ack_interests_satisfied_by(const ndn::Name& data_name)
  {
    std::vector<Resolution> out;
    for (auto& [id, p] : m_pending) {
      if (p.active() && p.interest_name && p.interest_name->is_prefix_of(data_name)) {
        resolve_ack(p);
        out.push_back({id, p.kind, p.transmissions_done});
      }
    }
    return out;
  }

  /// Cancels every active pending without counting an acknowledgment (node shutdown).
  std::vector<PacketId> abandon_all()
  {
    std::vector<PacketId> out;
    for (auto& [id, p] : m_pending) {
      if (p.active()) {
        p.state = PendingState::Done;
        out.push_back(id);
      }
    }
    return out;
  }

  const PendingTransmission* find(PacketId id) const
  {
    auto it = m_pending.find(id);
    return it == m_pending.end() ? nullptr : &it->second;
  }

  const std::map<PacketId, PendingTransmission>& pending() const { return m_pending; }
  const LalCounters& counters() const { return m_counters; }

private:
  void resolve_ack(PendingTransmission& p)
  {
    p.state = PendingState::Done;
    auto& c = m_counters.of(p.kind);
    ++c.acks_received;
    if (p.transmissions_done == 0) ++c.zero_tx_acks;
  }

  NodeId m_self;
  LalConfig m_cfg;
  std::map<PacketId, PendingTransmission> m_pending;
  LalCounters m_counters;
  std::uint64_t m_generation = 0;
};

} // namespace vndn::lal
