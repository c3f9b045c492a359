#include "vndn/apps.hpp"

#include <gtest/gtest.h>

using namespace vndn;
using namespace vndn::apps;

namespace {

geo::RoadGraph two_corners()
{
  return geo::RoadGraph({{IntersectionId{1}, "westwood-at-strathmore", {0, 0}},
                         {IntersectionId{2}, "gayley-at-strathmore", {300, 0}}},
                        {{SegmentId{1}, IntersectionId{1}, IntersectionId{2}}});
}

ndn::Interest interest(const std::string& uri)
{
  return ndn::Interest{ndn::parse_name(uri)};
}

ndn::Data reply(const ndn::Name& name)
{
  ndn::Data d{name};
  d.payload = {9};
  return ndn::seal(d);
}

ConsumerConfig traffic_cfg()
{
  ConsumerConfig c;
  c.targets = {ndn::parse_name("/traffic/westwood-at-strathmore")};
  c.max_requests = 1;
  return c;
}

} // namespace

TEST(TrafficProducer, AnswersOnlyFreshVisits)
{
  auto g = two_corners();
  TrafficProducer p(7, g);
  p.observe({5, 5}, from_seconds(90));
  EXPECT_EQ(p.visit_log().at("westwood-at-strathmore"), from_seconds(90));

  auto i = interest("/traffic/westwood-at-strathmore/3");
  auto d = p.produce(i, from_seconds(100));
  ASSERT_TRUE(d);
  EXPECT_TRUE(ndn::verify(*d));
  EXPECT_EQ(d->producer_id, 7u);
  auto report = parse_traffic_payload(d->payload);
  ASSERT_TRUE(report);
  EXPECT_EQ(report->label, "westwood-at-strathmore");
  EXPECT_EQ(report->timestamp, from_seconds(100));

  EXPECT_FALSE(p.produce(interest("/traffic/gayley-at-strathmore/3"), from_seconds(100)));
  EXPECT_TRUE(p.produce(i, from_seconds(390)));
  EXPECT_FALSE(p.produce(i, from_seconds(391)));
  EXPECT_FALSE(p.produce(interest("/picture/westwood-at-strathmore/3"), from_seconds(100)));
  EXPECT_FALSE(p.produce(interest("/traffic/nowhere/3"), from_seconds(100)));
}

TEST(TrafficPayload, RoundTripAndRejects)
{
  TrafficReport r{"a-at-b", from_millis(1234), "heavy"};
  EXPECT_EQ(parse_traffic_payload(encode_traffic_payload(r)), r);
  std::string junk = "label=x;t_ns=abc;congestion=free";
  EXPECT_FALSE(parse_traffic_payload(ByteView(reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size())));
  std::string missing = "label=x;t_ns=1";
  EXPECT_FALSE(
    parse_traffic_payload(ByteView(reinterpret_cast<const std::uint8_t*>(missing.data()), missing.size())));
}

TEST(PhotoProducer, ChunksAFixedSizePhoto)
{
  auto g = two_corners();
  PhotoProducerConfig cfg;
  cfg.photo_size_bytes = 68'000;
  PhotoProducer p(3, g, 42, cfg);
  auto chunks = p.respond(interest("/picture/westwood-at-strathmore/0"), {10, 0});
  ASSERT_EQ(chunks.size(), 53u);
  EXPECT_EQ(chunks.back().payload.size(), 68'000u - 52u * 1300u);
  auto whole = ndn::reassemble(chunks);
  ASSERT_TRUE(whole);
  EXPECT_EQ(*whole, p.snapshot(ndn::parse_name("/picture/westwood-at-strathmore/0")));

  // Asking for a chunk name still answers with the whole photo.
  EXPECT_EQ(p.respond(interest("/picture/westwood-at-strathmore/0/c4"), {10, 0}).size(), 53u);
  EXPECT_TRUE(p.respond(interest("/picture/westwood-at-strathmore/0"), {290, 0}).empty());
}

TEST(PhotoProducer, SnapshotsAreDeterministicAndSized)
{
  auto g = two_corners();
  PhotoProducer a(3, g, 42), b(3, g, 42), c(3, g, 43);
  for (int k = 0; k < 20; ++k) {
    auto name = ndn::parse_name("/picture/westwood-at-strathmore/" + std::to_string(k));
    auto s = a.snapshot(name);
    EXPECT_EQ(s, b.snapshot(name));
    EXPECT_NE(s, c.snapshot(name));
    EXPECT_GE(s.size(), 68'000u);
    EXPECT_LE(s.size(), 100'000u);
  }
}

TEST(Consumer, DataBeforeTimeoutNeedsOneInterest)
{
  Consumer c(traffic_cfg(), Rng(1));
  auto out = c.step(SimTime{});
  ASSERT_EQ(out.issued.size(), 1u);
  EXPECT_TRUE(out.issued[0].first);
  EXPECT_EQ(out.issued[0].interest.name, ndn::parse_name("/traffic/westwood-at-strathmore/0"));
  EXPECT_EQ(out.issued[0].interest.lifetime_ms, 4000u);

  auto got = c.on_data(reply(out.issued[0].interest.name), from_millis(500));
  ASSERT_EQ(got.satisfied.size(), 1u);
  EXPECT_EQ(got.satisfied[0].response_time, from_millis(500));
  EXPECT_TRUE(c.step(from_seconds(5)).empty());
  EXPECT_FALSE(c.next_wakeup());
}

TEST(Consumer, ReexpressesThenGivesUp)
{
  auto cfg = traffic_cfg();
  cfg.max_reexpress = 2;
  Consumer c(cfg, Rng(1));
  std::vector<IssuedInterest> all;
  std::vector<Unsatisfied> failed;
  for (int s = 0; s <= 10; ++s) {
    auto out = c.step(from_seconds(s));
    all.insert(all.end(), out.issued.begin(), out.issued.end());
    failed.insert(failed.end(), out.unsatisfied.begin(), out.unsatisfied.end());
  }
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[1].attempt, 1u);
  EXPECT_EQ(all[2].attempt, 2u);
  EXPECT_NE(all[0].interest.nonce, all[1].interest.nonce);
  ASSERT_EQ(failed.size(), 1u);
  EXPECT_EQ(c.outstanding_requests(), 0u);
}

TEST(Consumer, OnlyFirstCopySatisfies)
{
  Consumer c(traffic_cfg(), Rng(1));
  auto name = c.step(SimTime{}).issued.at(0).interest.name;
  EXPECT_EQ(c.on_data(reply(name), from_millis(10)).satisfied.size(), 1u);
  EXPECT_TRUE(c.on_data(reply(name), from_millis(11)).empty());
}

TEST(Consumer, SlotsAndPeriods)
{
  ConsumerConfig cfg;
  cfg.targets = {ndn::parse_name("/traffic/a"), ndn::parse_name("/traffic/b")};
  cfg.start = from_seconds(5);
  cfg.issue_period = from_seconds(3);
  cfg.slot_length = from_seconds(2);
  cfg.max_requests = 3;
  Consumer c(cfg, Rng(1));
  EXPECT_EQ(c.next_wakeup(), from_seconds(5));
  EXPECT_TRUE(c.step(from_seconds(4)).empty());
  auto first = c.step(from_seconds(5));
  ASSERT_EQ(first.issued.size(), 2u);
  EXPECT_EQ(first.issued[0].interest.name, ndn::parse_name("/traffic/a/2"));
  EXPECT_EQ(first.issued[1].interest.name, ndn::parse_name("/traffic/b/2"));
  auto second = c.step(from_seconds(8));
  std::size_t firsts = 0;
  for (const auto& i : second.issued) firsts += i.first;
  EXPECT_EQ(firsts, 1u);
  EXPECT_THROW(Consumer(ConsumerConfig{}, Rng(1)), std::invalid_argument);
}

TEST(Consumer, RetrievesAWholePhotoWithinTheWindow)
{
  auto g = two_corners();
  PhotoProducer producer(3, g, 42);
  ConsumerConfig cfg;
  cfg.kind = ContentKind::Photo;
  cfg.targets = {ndn::parse_name("/picture/westwood-at-strathmore")};
  cfg.max_requests = 1;
  Consumer c(cfg, Rng(2));

  auto out = c.step(SimTime{});
  ASSERT_EQ(out.issued.size(), 1u);
  auto all_chunks = producer.respond(out.issued[0].interest, {0, 0});
  std::map<ndn::Name, ndn::Data> by_name;
  for (const auto& d : all_chunks) by_name.emplace(d.name, d);

  std::set<ndn::Name> requested;
  std::vector<ndn::Name> queue{all_chunks.front().name}; // base Interest answered by chunk 0
  SimTime now{};
  std::size_t satisfied = 0;
  while (!queue.empty()) {
    now += from_millis(1);
    auto name = queue.front();
    queue.erase(queue.begin());
    auto got = c.on_data(by_name.at(name), now);
    satisfied += got.satisfied.size();
    for (const auto& i : got.issued) {
      EXPECT_TRUE(requested.insert(i.interest.name).second) << i.interest.name.to_uri();
      queue.push_back(i.interest.name);
    }
    EXPECT_LE(queue.size(), cfg.window);
  }
  EXPECT_EQ(satisfied, 1u);
  EXPECT_EQ(requested.size(), all_chunks.size() - 1);
  EXPECT_EQ(c.outstanding_requests(), 0u);
}

TEST(Mule, SourcesNothing)
{
  EXPECT_TRUE(mule_tick().empty());
}
