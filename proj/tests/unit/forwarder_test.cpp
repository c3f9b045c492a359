#include "vndn/ndn/forwarder.hpp"
#include "vndn/rng.hpp"

#include <gtest/gtest.h>

using namespace vndn;
using namespace vndn::ndn;

namespace {

constexpr auto never_produce = [](const Interest&) { return false; };
constexpr auto always_produce = [](const Interest&) { return true; };

Interest interest(const std::string& uri, std::uint64_t nonce)
{
  Interest i{parse_name(uri)};
  i.nonce = nonce;
  return i;
}

Data make_data(const std::string& uri)
{
  Data d{parse_name(uri)};
  d.payload = {1, 2, 3};
  return seal(d);
}

template <class T>
std::size_t count_of(const std::vector<Action>& actions)
{
  return static_cast<std::size_t>(
    std::count_if(actions.begin(), actions.end(), [](const Action& a) { return std::holds_alternative<T>(a); }));
}

geo::RoadGraph hint_graph()
{
  return geo::RoadGraph({{IntersectionId{0}, "target", {0, 0}}, {IntersectionId{1}, "far", {1000, 0}}},
                        {{SegmentId{0}, IntersectionId{0}, IntersectionId{1}}});
}

} // namespace

TEST(NodeState, FaceLayout)
{
  std::vector<NodeId> peers{NodeId{7}, NodeId{9}};
  auto s = NodeState::make(NodeId{1}, true, peers);
  ASSERT_EQ(s.faces.size(), 4u);
  EXPECT_EQ(s.local_face(), FaceId{0});
  EXPECT_EQ(s.adhoc_face(), FaceId{1});
  EXPECT_EQ(s.link_face_to(NodeId{9}), FaceId{3});
  EXPECT_FALSE(s.link_face_to(NodeId{8}));
  EXPECT_FALSE(NodeState::make(NodeId{2}, false).adhoc_face());
}

TEST(OnInterest, CacheHitRepliesAndLeavesPitUntouched)
{
  auto s = NodeState::make(NodeId{1}, true);
  s.cs.insert(make_data("/traffic/x/3"));
  auto actions = on_interest(s, interest("/traffic/x/3", 1), FaceId{1}, SimTime{}, {}, always_produce);
  ASSERT_EQ(actions.size(), 1u);
  const auto& reply = std::get<ReplyData>(actions[0]);
  EXPECT_EQ(reply.face, FaceId{1});
  EXPECT_EQ(reply.data.name, parse_name("/traffic/x/3"));
  EXPECT_TRUE(s.pit.empty());
  EXPECT_TRUE(s.dead_nonces.empty());
}

TEST(OnInterest, DuplicateNonceDrops)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto i = interest("/traffic/x/3", 5);
  auto first = on_interest(s, i, FaceId{1}, SimTime{}, {}, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(first), 1u);
  auto again = on_interest(s, i, FaceId{1}, from_millis(10), {}, never_produce);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(std::get<Drop>(again[0]).reason, DropReason::DuplicateNonce);
}

TEST(OnInterest, ReplayAfterConsumedPitIsStillDuplicate)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto i = interest("/traffic/x/3", 5);
  on_interest(s, i, FaceId{1}, SimTime{}, {}, never_produce);
  on_data(s, make_data("/traffic/x/3"), FaceId{1}, from_millis(5));
  s.cs = ContentStore(0);
  auto again = on_interest(s, i, FaceId{1}, from_millis(10), {}, never_produce);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(std::get<Drop>(again[0]).reason, DropReason::DuplicateNonce);
}

TEST(OnInterest, LocalProducerTakesPrecedenceOverForwarding)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto actions = on_interest(s, interest("/traffic/x/3", 1), FaceId{1}, SimTime{}, {}, always_produce);
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<DeliverToApp>(actions[0]));
  EXPECT_TRUE(s.pit.empty());
}

TEST(OnInterest, FloodIncrementsHopCountAndAggregates)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto i = interest("/traffic/x/3", 1);
  i.hop_count = 4;
  auto actions = on_interest(s, i, FaceId{1}, SimTime{}, {}, never_produce);
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_EQ(std::get<Interest>(std::get<ForwardBroadcast>(actions[0]).packet).hop_count, 5);

  // A second nonce for the same name is aggregated and still broadcast once.
  auto again = on_interest(s, interest("/traffic/x/3", 2), FaceId{0}, from_millis(1), {}, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(again), 1u);
  EXPECT_EQ(s.pit.find(i.name)->downstream_faces, (std::set{FaceId{0}, FaceId{1}}));
}

TEST(OnInterest, GreedyGeoSuppressesWhenNotCloser)
{
  auto g = hint_graph();
  auto s = NodeState::make(NodeId{1}, true);
  s.strategy = Strategy::GreedyGeo;
  s.position = {400, 0};
  InterestContext ctx{geo::GeoPoint{300, 0}, &g};
  auto actions = on_interest(s, interest("/traffic/target/1", 1), FaceId{1}, SimTime{}, ctx, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(actions), 0u);
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_EQ(std::get<Drop>(actions[0]).reason, DropReason::GeoSuppressed);

  s.position = {200, 0};
  auto closer = on_interest(s, interest("/traffic/target/1", 2), FaceId{1}, SimTime{}, ctx, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(closer), 1u);

  // No hint in the name: always forward.
  s.position = {400, 0};
  auto unhinted = on_interest(s, interest("/traffic/elsewhere/1", 3), FaceId{1}, SimTime{}, ctx, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(unhinted), 1u);
}

TEST(OnInterest, FibAddsUnicastOnInfrastructureFaces)
{
  std::vector<NodeId> peers{NodeId{9}};
  auto s = NodeState::make(NodeId{1}, true, peers);
  s.fib.push_back({parse_name("/picture"), FaceId{2}});
  auto actions = on_interest(s, interest("/picture/a/b", 1), FaceId{0}, SimTime{}, {}, never_produce);
  EXPECT_EQ(count_of<ForwardBroadcast>(actions), 1u);
  EXPECT_EQ(count_of<ForwardUnicast>(actions), 1u);

  // Never sent back out of the face it came from.
  auto back = on_interest(s, interest("/picture/a/c", 2), FaceId{2}, SimTime{}, {}, never_produce);
  EXPECT_EQ(count_of<ForwardUnicast>(back), 0u);

  auto hub = NodeState::make(NodeId{2}, false, peers);
  auto none = on_interest(hub, interest("/traffic/a", 3), FaceId{0}, SimTime{}, {}, never_produce);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(std::get<Drop>(none[0]).reason, DropReason::NoRoute);
}

TEST(OnInterest, NeverBroadcastsTheSameNonceTwice)
{
  Rng rng(4);
  auto s = NodeState::make(NodeId{1}, true);
  std::set<std::uint64_t> broadcast;
  std::vector<std::uint64_t> used;
  SimTime now{};
  // Stays within one Interest lifetime, so every replay is still remembered.
  for (int k = 0; k < 2000; ++k) {
    now += from_millis(static_cast<double>(rng.uniform_int(0, 1)));
    auto nonce = used.empty() || rng.bernoulli(0.5) ? rng.next_u64() : used[rng.uniform_int(0, used.size() - 1)];
    used.push_back(nonce);
    auto i = interest("/traffic/n" + std::to_string(rng.uniform_int(0, 5)), nonce);
    for (const auto& a : on_interest(s, i, FaceId{1}, now, {}, never_produce)) {
      if (std::holds_alternative<ForwardBroadcast>(a)) {
        EXPECT_TRUE(broadcast.insert(i.nonce).second) << i.nonce;
      }
    }
    s.pit.for_each([&](const PitEntry& e) { EXPECT_GE(e.expiry, now); });
  }
}

TEST(OnData, CachesRegardlessOfPit)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto actions = on_data(s, make_data("/traffic/x/3"), FaceId{1}, SimTime{});
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_TRUE(std::get<CacheInsert>(actions[0]).stored);
  EXPECT_TRUE(s.cs.contains(parse_name("/traffic/x/3")));
}

TEST(OnData, MatchingPitDeliversAndRebroadcasts)
{
  auto s = NodeState::make(NodeId{1}, true);
  on_interest(s, interest("/traffic/x", 1), FaceId{0}, SimTime{}, {}, never_produce);
  on_interest(s, interest("/traffic/x", 2), FaceId{1}, SimTime{}, {}, never_produce);
  auto actions = on_data(s, make_data("/traffic/x/3"), FaceId{1}, from_millis(10));
  EXPECT_EQ(count_of<CacheInsert>(actions), 1u);
  EXPECT_EQ(count_of<DeliverToApp>(actions), 1u);
  EXPECT_EQ(count_of<ForwardBroadcast>(actions), 1u);
  EXPECT_TRUE(s.pit.empty());
}

TEST(OnData, CorruptedTagDrops)
{
  auto s = NodeState::make(NodeId{1}, true);
  auto d = make_data("/traffic/x/3");
  d.payload[0] ^= 0xff;
  auto actions = on_data(s, d, FaceId{1}, SimTime{});
  ASSERT_EQ(actions.size(), 1u);
  EXPECT_EQ(std::get<Drop>(actions[0]).reason, DropReason::IntegrityFail);
  EXPECT_EQ(s.cs.size(), 0u);
}

TEST(OnData, ValidDataIsAlwaysCachedAfterward)
{
  Rng rng(8);
  auto s = NodeState::make(NodeId{1}, true);
  SimTime now{};
  for (int k = 0; k < 500; ++k) {
    now += from_millis(10);
    auto name = "/c/" + std::to_string(rng.uniform_int(0, 30));
    if (rng.bernoulli(0.5)) on_interest(s, interest(name, rng.next_u64()), FaceId{1}, now, {}, never_produce);
    on_data(s, make_data(name), FaceId{1}, now);
    EXPECT_TRUE(s.cs.contains(parse_name(name)));
  }
}
