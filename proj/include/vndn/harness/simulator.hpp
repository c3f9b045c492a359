#pragma once

// Discrete-event engine gluing forwarders, LALs, radio, links and apps.
// Single-threaded; all randomness comes from named substreams of the run seed.

#include "vndn/harness/scenario.hpp"
#include "vndn/harness/stats.hpp"
#include "vndn/netsim/event_log.hpp"
#include "vndn/netsim/event_queue.hpp"

#include <memory>

namespace vndn::harness {

struct RunResult {
  Stats stats;
  netsim::EventLog log;

  std::string digest() const { return log.digest(); }
};

inline std::string role_of(const NodeSpec& n)
{
  if (n.is_producer()) return role::producer;
  if (n.is_consumer()) return role::consumer;
  return n.hub ? role::hub : role::mule;
}

class Simulator {
public:
  struct Node {
    const NodeSpec* spec;
    std::string role;
    ndn::NodeState state;
    lal::LinkAdaptationLayer lal;
    Rng jitter_rng;
    Rng radio_rng;
    std::optional<apps::TrafficProducer> traffic;
    std::optional<apps::PhotoProducer> photo;
    std::vector<apps::Consumer> consumers;
    std::vector<std::optional<SimTime>> wake; // pending AppWake per consumer
    bool alive = true;
  };

  Simulator(const Scenario& scenario, std::uint64_t seed)
    : m_sc(scenario)
    , m_seed(seed)
  {
    validate(m_sc);
    auto lal_cfg = m_sc.lal;
    lal_cfg.radio_range_m = m_sc.radio.range_m;
    for (const auto& spec : m_sc.nodes) {
      std::vector<NodeId> peers;
      for (const auto& l : m_sc.links) {
        if (l.a == spec.id || l.b == spec.id) peers.push_back(l.a == spec.id ? l.b : l.a);
      }
      auto state = ndn::NodeState::make(spec.id, spec.adhoc, peers, spec.cs_capacity.value_or(m_sc.cs_capacity));
      state.strategy = m_sc.strategy;
      for (const auto& f : spec.fib) state.fib.push_back({f.prefix, *state.link_face_to(f.via)});
      Node n{&spec,
             role_of(spec),
             std::move(state),
             lal::LinkAdaptationLayer(spec.id, lal_cfg),
             Rng::substream(seed, "lal-jitter", spec.id.value()),
             Rng::substream(seed, "radio", spec.id.value()),
             {},
             {},
             {},
             {},
             true};
      for (std::size_t k = 0; k < spec.apps.size(); ++k) {
        std::visit(
          [&](const auto& app) {
            using T = std::decay_t<decltype(app)>;
            if constexpr (std::is_same_v<T, TrafficProducerSpec>) {
              n.traffic.emplace(spec.id.value(), m_sc.graph, app.freshness);
            }
            else if constexpr (std::is_same_v<T, PhotoProducerSpec>) {
              n.photo.emplace(spec.id.value(), m_sc.graph, seed, app.config);
            }
            else {
              n.consumers.emplace_back(app, Rng::substream(seed, "app" + std::to_string(k), spec.id.value()));
              n.wake.emplace_back();
            }
          },
          spec.apps[k]);
      }
      m_index[spec.id] = m_nodes.size();
      m_nodes.push_back(std::move(n));
    }
  }

  RunResult run()
  {
    if (!m_nodes.empty()) begin();
    while (!m_queue.empty() && m_queue.next_time() <= m_sc.duration) {
      auto e = m_queue.pop();
      m_now = e.time;
      std::visit([&](auto& ev) { handle(ev); }, e.payload);
    }
    m_now = m_sc.duration;
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
      if (!m_nodes[i].alive) continue;
      for (const auto& [id, p] : m_nodes[i].lal.pending()) {
        if (p.active()) log_open(i, id, p, "end");
      }
    }
    return {m_stats, m_log};
  }

  const Node& node(NodeId id) const { return m_nodes.at(m_index.at(id)); }

private:
  struct AppWake {
    std::size_t node;
    std::size_t app;
  };
  struct FrameArrival {
    std::size_t node;
    std::shared_ptr<const Bytes> frame;
    std::uint64_t txid;
  };
  struct LalTimer {
    std::size_t node;
    lal::PacketId id;
    std::uint64_t generation;
  };
  struct LinkArrival {
    std::size_t node;
    NodeId from;
    Bytes packet;
  };
  struct PositionSample {};
  struct Shutdown {
    std::size_t node;
  };
  using Event = std::variant<AppWake, FrameArrival, LalTimer, LinkArrival, PositionSample, Shutdown>;

  // -------------------------------------------------------------------------
  // Logging and counters

  void log(std::optional<std::size_t> node, const char* kind, std::string pid = {}, std::string name = {},
           nlohmann::json extra = nlohmann::json::object())
  {
    netsim::SimEventRecord r;
    r.time = m_now;
    r.node = node ? static_cast<std::int64_t>(m_nodes[*node].spec->id.value()) : -1;
    r.kind = kind;
    r.packet_id = std::move(pid);
    r.name = std::move(name);
    r.extra = std::move(extra);
    m_log.append(r);
  }

  template <class F>
  void count(std::size_t i, F&& f)
  {
    detail::for_classes(m_stats, m_nodes[i].role, std::forward<F>(f));
  }

  void log_open(std::size_t i, lal::PacketId id, const lal::PendingTransmission& p, const char* reason)
  {
    log(i, netsim::kind::lal_open, lal::to_hex(id), {},
        {{"pkt", pkt_name(p.kind)}, {"tx", p.transmissions_done}, {"reason", reason}});
    ++m_stats.open_pendings;
  }

  void log_ack(std::size_t i, lal::PacketId id, ndn::PacketKind kind, std::uint32_t tx, const char* via)
  {
    log(i, netsim::kind::ack, lal::to_hex(id), {}, {{"pkt", pkt_name(kind)}, {"tx", tx}, {"via", via}});
    ++m_stats.tx_histogram[tx];
    if (tx == 0) ++m_stats.zero_tx_acks;
  }

  static const char* pkt_name(ndn::PacketKind k) { return k == ndn::PacketKind::Interest ? "interest" : "data"; }

  // -------------------------------------------------------------------------
  // Helpers

  geo::GeoPoint refresh_position(std::size_t i)
  {
    auto& n = m_nodes[i];
    n.state.position = netsim::position_at(n.spec->mobility, m_now);
    return n.state.position;
  }

  const geo::RoadGraph* graph() const { return m_sc.graph.empty() ? nullptr : &m_sc.graph; }

  Duration link_latency(NodeId a, NodeId b) const
  {
    for (const auto& l : m_sc.links) {
      if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return l.latency;
    }
    throw std::logic_error("no link between nodes");
  }

  void begin()
  {
    auto nodes = nlohmann::json::array();
    for (const auto& n : m_nodes) nodes.push_back({{"id", n.spec->id.value()}, {"role", n.role}});
    log(std::nullopt, netsim::kind::run_begin, {}, {},
        {{"scenario", m_sc.name}, {"seed", m_seed}, {"nodes", nodes}});

    m_queue.push(SimTime{}, PositionSample{});
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
      auto& n = m_nodes[i];
      for (std::size_t k = 0; k < n.consumers.size(); ++k) reschedule_wake(i, k);
      if (n.spec->shutdown && n.spec->shutdown->at) m_queue.push(*n.spec->shutdown->at, Shutdown{i});
    }
  }

  void reschedule_wake(std::size_t i, std::size_t k)
  {
    auto& n = m_nodes[i];
    auto w = n.consumers[k].next_wakeup();
    if (!w) return;
    auto at = std::max(*w, m_now);
    if (!n.wake[k] || at < *n.wake[k]) {
      n.wake[k] = at;
      m_queue.push(at, AppWake{i, k});
    }
  }

  // -------------------------------------------------------------------------
  // Sending

  void schedule_lal(std::size_t i, Bytes inner, const lal::LalFrame* received)
  {
    auto& n = m_nodes[i];
    auto pos = refresh_position(i);
    auto frame = received ? lal::LalFrame{received->packet_id, received->last_hop_node, received->last_hop_position,
                                          std::move(inner)}
                          : lal::LalFrame::wrap(std::move(inner), n.spec->id, pos);
    auto res = n.lal.schedule_forward(frame, pos, m_now, n.jitter_rng, graph());
    if (res.duplicate) return;
    const auto& p = *res.pending;
    log(i, netsim::kind::schedule, lal::to_hex(p.frame.packet_id), {},
        {{"pkt", pkt_name(p.kind)},
         {"fire_ns", p.next_fire.count()},
         {"last_hop", p.frame.last_hop_node.value()},
         {"directions", p.required_directions.size()}});
    m_queue.push(p.next_fire, LalTimer{i, p.frame.packet_id, p.generation});
  }

  void link_send(std::size_t i, FaceId face, const ndn::Packet& packet)
  {
    auto& n = m_nodes[i];
    auto peer = *n.state.face(face).peer;
    auto bytes = ndn::encode(packet);
    log(i, netsim::kind::tx, lal::to_hex(lal::packet_id(bytes)), ndn::name_of(packet).to_uri(),
        {{"medium", "link"}, {"to", peer.value()}, {"pkt", pkt_name(ndn::kind_of(packet))}});
    ++m_stats.link_transmissions;
    netsim::Link link{n.spec->id, peer, link_latency(n.spec->id, peer)};
    m_queue.push(netsim::link_deliver(link, m_now), LinkArrival{m_index.at(peer), n.spec->id, std::move(bytes)});
  }

  void send_data(std::size_t i, const ndn::Data& data, FaceId face)
  {
    auto& n = m_nodes[i];
    switch (n.state.face(face).kind) {
      case ndn::FaceKind::LocalApp: deliver_to_consumers(i, data, n.spec->id); break;
      case ndn::FaceKind::AdhocBroadcast: schedule_lal(i, ndn::encode(data), nullptr); break;
      case ndn::FaceKind::InfrastructureLink: link_send(i, face, data); break;
    }
  }

  // -------------------------------------------------------------------------
  // Packet processing

  void handle_interest(std::size_t i, const ndn::Interest& interest, FaceId arrival, const lal::LalFrame* frame)
  {
    auto& n = m_nodes[i];
    auto pos = refresh_position(i);
    std::optional<ndn::Data> produced;
    std::vector<ndn::Data> chunks;
    auto can_produce = [&](const ndn::Interest& in) {
      if (n.traffic && (produced = n.traffic->produce(in, m_now))) return true;
      if (n.photo) chunks = n.photo->respond(in, pos);
      return !chunks.empty();
    };
    ndn::InterestContext ctx{frame ? std::optional(frame->last_hop_position) : std::nullopt, graph()};
    auto actions = ndn::on_interest(n.state, interest, arrival, m_now, ctx, can_produce);
    const auto name = interest.name.to_uri();

    auto faces = nlohmann::json::array();
    for (const auto& a : actions) {
      if (std::holds_alternative<ndn::ForwardBroadcast>(a)) faces.push_back("adhoc");
      if (const auto* u = std::get_if<ndn::ForwardUnicast>(&a)) faces.push_back(n.state.face(u->face).peer->value());
    }
    if (!faces.empty()) {
      log(i, netsim::kind::pit_forward, {}, name, {{"faces", faces}, {"hop", interest.hop_count}});
      count(i, [](auto& c) { ++c.interests_forwarded; });
    }

    for (auto& a : actions) {
      std::visit(
        [&](auto& act) {
          using T = std::decay_t<decltype(act)>;
          if constexpr (std::is_same_v<T, ndn::ReplyData>) {
            log(i, netsim::kind::cache_hit, {}, name,
                {{"data", act.data.name.to_uri()}, {"face", ndn::to_string(n.state.face(act.face).kind)}});
            count(i, [](auto& c) { ++c.cache_hits; });
            send_data(i, act.data, act.face);
          }
          else if constexpr (std::is_same_v<T, ndn::DeliverToApp>) {
            log(i, netsim::kind::app_deliver, {}, name, {{"pkt", "interest"}});
            count(i, [](auto& c) { ++c.app_deliveries; });
            std::optional<ndn::Data> reply = produced;
            if (!reply) {
              for (const auto& c : chunks) {
                try {
                  n.state.cs.insert(c);
                }
                catch (const ndn::CacheError&) {
                }
              }
              for (const auto& c : chunks) {
                if (c.name == interest.name || (c.chunk_index == 0 && interest.name.is_prefix_of(c.name))) {
                  reply = c;
                  break;
                }
              }
            }
            else {
              try {
                n.state.cs.insert(*reply);
              }
              catch (const ndn::CacheError&) {
              }
            }
            if (reply) send_data(i, *reply, arrival);
          }
          else if constexpr (std::is_same_v<T, ndn::ForwardBroadcast>) {
            schedule_lal(i, ndn::encode(act.packet), frame);
          }
          else if constexpr (std::is_same_v<T, ndn::ForwardUnicast>) {
            link_send(i, act.face, act.packet);
          }
          else if constexpr (std::is_same_v<T, ndn::Drop>) {
            log(i, netsim::kind::drop, {}, name, {{"pkt", "interest"}, {"reason", ndn::to_string(act.reason)}});
            count(i, [](auto& c) { ++c.drops; });
          }
        },
        a);
    }
  }

  void handle_data(std::size_t i, const ndn::Data& data, FaceId arrival, const lal::LalFrame* frame, NodeId from)
  {
    auto& n = m_nodes[i];
    const auto name = data.name.to_uri();
    if (ndn::verify(data)) {
      for (const auto& r : n.lal.ack_interests_satisfied_by(data.name)) {
        log_ack(i, r.id, r.kind, r.transmissions, "data_return");
      }
    }
    for (auto& a : ndn::on_data(n.state, data, arrival, m_now)) {
      std::visit(
        [&](auto& act) {
          using T = std::decay_t<decltype(act)>;
          if constexpr (std::is_same_v<T, ndn::Drop>) {
            log(i, netsim::kind::drop, {}, name, {{"pkt", "data"}, {"reason", ndn::to_string(act.reason)}});
          }
          else if constexpr (std::is_same_v<T, ndn::ForwardUnicast>) {
            link_send(i, act.face, act.packet);
          }
          else if constexpr (std::is_same_v<T, ndn::DeliverToApp>) {
            log(i, netsim::kind::app_deliver, {}, name, {{"pkt", "data"}});
            deliver_to_consumers(i, data, from);
          }
          else if constexpr (std::is_same_v<T, ndn::ForwardBroadcast>) {
            schedule_lal(i, ndn::encode(act.packet), frame);
          }
        },
        a);
    }
  }

  void deliver_to_consumers(std::size_t i, const ndn::Data& data, NodeId from)
  {
    for (std::size_t k = 0; k < m_nodes[i].consumers.size(); ++k) {
      auto out = m_nodes[i].consumers[k].on_data(data, m_now);
      process_app_output(i, k, std::move(out), from);
    }
  }

  void process_app_output(std::size_t i, std::size_t k, apps::AppOutput out, std::optional<NodeId> from)
  {
    for (const auto& s : out.satisfied) {
      nlohmann::json extra{{"req", s.request}, {"rt_ns", s.response_time.count()}};
      if (from) extra["from"] = from->value();
      log(i, netsim::kind::app_satisfy, {}, s.name.to_uri(), extra);
      ++m_stats.satisfied;
      m_stats.response_times_ns.insert(
        std::upper_bound(m_stats.response_times_ns.begin(), m_stats.response_times_ns.end(), s.response_time.count()),
        s.response_time.count());
      if (!m_first_satisfy_seen) {
        m_first_satisfy_seen = true;
        for (std::size_t j = 0; j < m_nodes.size(); ++j) {
          const auto& sd = m_nodes[j].spec->shutdown;
          if (sd && sd->after_first_satisfy) m_queue.push(m_now, Shutdown{j});
        }
      }
    }
    for (const auto& u : out.unsatisfied) {
      log(i, netsim::kind::app_unsatisfied, {}, u.name.to_uri(), {{"req", u.request}});
      ++m_stats.unsatisfied;
    }
    for (const auto& iss : out.issued) {
      if (!m_nodes[i].alive) break;
      log(i, netsim::kind::app_issue, {}, iss.interest.name.to_uri(),
          {{"req", iss.request}, {"first", iss.first}, {"attempt", iss.attempt}});
      ++m_stats.app_interests_issued;
      if (iss.first) ++m_stats.requests;
      count(i, [](auto& c) { ++c.interests_received; });
      handle_interest(i, iss.interest, m_nodes[i].state.local_face(), nullptr);
    }
    reschedule_wake(i, k);
  }

  // -------------------------------------------------------------------------
  // Event handlers

  void handle(AppWake& e)
  {
    auto& n = m_nodes[e.node];
    if (n.wake[e.app] != m_now) return; // superseded
    n.wake[e.app].reset();
    if (!n.alive) return;
    process_app_output(e.node, e.app, n.consumers[e.app].step(m_now), std::nullopt);
  }

  void handle(FrameArrival& e)
  {
    auto& n = m_nodes[e.node];
    auto frame = lal::frame_decode(*e.frame);
    auto packet = ndn::decode(frame.inner);
    auto kind = ndn::kind_of(packet);
    auto name = ndn::name_of(packet).to_uri();
    log(e.node, netsim::kind::rx, lal::to_hex(frame.packet_id), name,
        {{"medium", "adhoc"}, {"from", frame.last_hop_node.value()}, {"txid", e.txid}, {"pkt", pkt_name(kind)}});
    if (kind == ndn::PacketKind::Interest) count(e.node, [](auto& c) { ++c.interests_received; });
    if (!n.alive) {
      drop_at_dead_node(e.node, kind, name);
      return;
    }

    refresh_position(e.node);
    auto res = n.lal.on_overhear(frame, frame.last_hop_node, frame.last_hop_position, m_now, graph());
    if (res == lal::OverhearResult::FullAckCancelled) {
      const auto* p = n.lal.find(frame.packet_id);
      log_ack(e.node, frame.packet_id, p->kind, p->transmissions_done, "overhear");
    }
    else if (res == lal::OverhearResult::PartialAck) {
      log(e.node, netsim::kind::ack, lal::to_hex(frame.packet_id), {},
          {{"pkt", pkt_name(kind)}, {"partial", true}, {"from", frame.last_hop_node.value()}});
    }

    auto face = *n.state.adhoc_face();
    if (auto* in = std::get_if<ndn::Interest>(&packet)) {
      handle_interest(e.node, *in, face, &frame);
    }
    else {
      handle_data(e.node, std::get<ndn::Data>(packet), face, &frame, frame.last_hop_node);
    }
  }

  void drop_at_dead_node(std::size_t i, ndn::PacketKind kind, const std::string& name)
  {
    log(i, netsim::kind::drop, {}, name, {{"pkt", pkt_name(kind)}, {"reason", "node_down"}});
    if (kind == ndn::PacketKind::Interest) count(i, [](auto& c) { ++c.drops; });
  }

  void handle(LalTimer& e)
  {
    auto& n = m_nodes[e.node];
    if (!n.alive) return;
    auto pos = refresh_position(e.node);
    auto result = n.lal.on_timer(e.id, e.generation, m_now, pos);
    if (!result) return;
    const auto* p = n.lal.find(e.id);
    if (std::holds_alternative<lal::GiveUp>(*result)) {
      log(e.node, netsim::kind::giveup, lal::to_hex(e.id), {}, {{"pkt", pkt_name(p->kind)}, {"tx", p->transmissions_done}});
      ++m_stats.tx_histogram[p->transmissions_done];
      ++m_stats.giveups;
      return;
    }
    auto& t = std::get<lal::Transmit>(*result);
    broadcast(e.node, t.frame, p->kind, p->transmissions_done);
    m_queue.push(t.rearm_at, LalTimer{e.node, e.id, e.generation});
  }

  void broadcast(std::size_t i, const lal::LalFrame& frame, ndn::PacketKind kind, std::uint32_t attempt)
  {
    auto& n = m_nodes[i];
    auto bytes = std::make_shared<const Bytes>(lal::frame_encode(frame));
    std::vector<netsim::RadioNode> radio_nodes;
    for (std::size_t j = 0; j < m_nodes.size(); ++j) {
      if (!m_nodes[j].state.adhoc_face()) continue;
      radio_nodes.push_back({m_nodes[j].spec->id, netsim::position_at(m_nodes[j].spec->mobility, m_now), m_nodes[j].alive});
    }
    auto arrive = m_now + m_sc.radio.serialization_delay(bytes->size());
    auto outcome = netsim::deliver_broadcast(m_sc.radio, n.spec->id, frame.last_hop_position, radio_nodes, arrive,
                                             n.radio_rng);
    auto txid = m_next_txid++;
    auto packet = ndn::decode(frame.inner);
    log(i, netsim::kind::tx, lal::to_hex(frame.packet_id), ndn::name_of(packet).to_uri(),
        {{"medium", "adhoc"},
         {"pkt", pkt_name(kind)},
         {"attempt", attempt},
         {"txid", txid},
         {"rx", outcome.receptions.size()},
         {"lost", outcome.lost},
         {"oor", outcome.out_of_range}});
    (kind == ndn::PacketKind::Interest ? m_stats.adhoc_interest_transmissions : m_stats.adhoc_data_transmissions)++;
    m_stats.receptions += outcome.receptions.size();
    m_stats.losses += outcome.lost;
    m_stats.out_of_range += outcome.out_of_range;
    for (const auto& r : outcome.receptions) {
      m_queue.push(r.time, FrameArrival{m_index.at(r.receiver), bytes, txid});
    }
  }

  void handle(LinkArrival& e)
  {
    auto& n = m_nodes[e.node];
    auto packet = ndn::decode(e.packet);
    auto kind = ndn::kind_of(packet);
    auto name = ndn::name_of(packet).to_uri();
    log(e.node, netsim::kind::rx, lal::to_hex(lal::packet_id(e.packet)), name,
        {{"medium", "link"}, {"from", e.from.value()}, {"pkt", pkt_name(kind)}});
    if (kind == ndn::PacketKind::Interest) count(e.node, [](auto& c) { ++c.interests_received; });
    if (!n.alive) {
      drop_at_dead_node(e.node, kind, name);
      return;
    }
    auto face = *n.state.link_face_to(e.from);
    if (auto* in = std::get_if<ndn::Interest>(&packet)) {
      handle_interest(e.node, *in, face, nullptr);
    }
    else {
      handle_data(e.node, std::get<ndn::Data>(packet), face, nullptr, e.from);
    }
  }

  void handle(PositionSample&)
  {
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
      auto& n = m_nodes[i];
      if (n.alive && n.traffic) n.traffic->observe(refresh_position(i), m_now);
    }
    m_queue.push(m_now + m_sc.sample_period, PositionSample{});
  }

  void handle(Shutdown& e)
  {
    auto& n = m_nodes[e.node];
    if (!n.alive) return;
    n.alive = false;
    auto abandoned = n.lal.abandon_all();
    log(e.node, netsim::kind::shutdown, {}, {}, {{"abandoned", abandoned.size()}});
    for (auto id : abandoned) log_open(e.node, id, *n.lal.find(id), "shutdown");
  }

  const Scenario& m_sc;
  std::uint64_t m_seed;
  std::vector<Node> m_nodes;
  std::map<NodeId, std::size_t> m_index;
  netsim::EventQueue<Event> m_queue;
  netsim::EventLog m_log;
  Stats m_stats;
  SimTime m_now{};
  std::uint64_t m_next_txid = 0;
  bool m_first_satisfy_seen = false;
};

/// Runs a scenario to its end time.
inline RunResult run(const Scenario& scenario, std::uint64_t seed)
{
  return Simulator(scenario, seed).run();
}

} // namespace vndn::harness
