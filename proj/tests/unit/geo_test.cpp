#include "vndn/geo.hpp"
#include "vndn/rng.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace vndn;
using namespace vndn::geo;

namespace {

IntersectionId iid(std::int64_t v) { return IntersectionId{v}; }
SegmentId sid(std::int64_t v) { return SegmentId{v}; }

// A plus-shaped crossroads: center 0, arms east 1, north 2, west 3, south 4,
// plus a dead end 5 hanging off the east arm.
RoadGraph crossroads()
{
  return RoadGraph({{iid(0), "center", {0, 0}},
                    {iid(1), "east", {100, 0}},
                    {iid(2), "north", {0, 100}},
                    {iid(3), "west", {-100, 0}},
                    {iid(4), "south", {0, -100}},
                    {iid(5), "stub", {100, 80}}},
                   {{sid(10), iid(0), iid(1)},
                    {sid(11), iid(0), iid(2)},
                    {sid(12), iid(0), iid(3)},
                    {sid(13), iid(0), iid(4)},
                    {sid(14), iid(1), iid(5)}});
}

RoadGraph random_graph(Rng& rng, int n)
{
  std::vector<Intersection> ins;
  std::vector<Segment> segs;
  for (int i = 0; i < n; ++i) {
    ins.push_back({iid(i), "i" + std::to_string(i), {rng.uniform(-500, 500), rng.uniform(-500, 500)}});
    if (i > 0) {
      auto j = static_cast<std::int64_t>(rng.uniform_int(0, static_cast<std::uint64_t>(i - 1)));
      segs.push_back({sid(static_cast<std::int64_t>(segs.size())), iid(j), iid(i)});
    }
  }
  for (int k = 0; k < n / 2; ++k) {
    auto a = static_cast<std::int64_t>(rng.uniform_int(0, n - 1));
    auto b = static_cast<std::int64_t>(rng.uniform_int(0, n - 1));
    if (a != b) segs.push_back({sid(static_cast<std::int64_t>(segs.size())), iid(a), iid(b)});
  }
  return RoadGraph(std::move(ins), std::move(segs));
}

} // namespace

TEST(Distance, Examples)
{
  EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(distance({7.5, -2}, {7.5, -2}), 0.0);
}

TEST(Distance, TriangleInequalityOnRandomTriples)
{
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    GeoPoint a{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
    GeoPoint b{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
    GeoPoint c{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
    EXPECT_DOUBLE_EQ(distance(a, b), distance(b, a));
  }
}

TEST(RoadGraph, RejectsBadInput)
{
  EXPECT_THROW(RoadGraph({{iid(0), "a", {0, 0}}, {iid(0), "b", {1, 0}}}, {}), GeoError);
  EXPECT_THROW(RoadGraph({{iid(0), "a", {0, 0}}, {iid(1), "a", {1, 0}}}, {}), GeoError);
  EXPECT_THROW(RoadGraph({{iid(0), "a/b", {0, 0}}}, {}), GeoError);
  EXPECT_THROW(RoadGraph({{iid(0), "a", {0, 0}}}, {{sid(0), iid(0), iid(9)}}), GeoError);
  EXPECT_THROW(RoadGraph({{iid(0), "a", {0, 0}}, {iid(1), "b", {1, 0}}}, {{sid(0), iid(0), iid(0)}}), GeoError);
}

TEST(NearestIntersection, ExactPointAndTie)
{
  auto g = crossroads();
  EXPECT_EQ(nearest_intersection(g, {100, 0}), iid(1));
  // center, east and south are all 70.7 m from (50, -50).
  EXPECT_EQ(nearest_intersection(g, {50, -50}), iid(0));
  // Equidistant from east (1) and stub (5) only.
  EXPECT_EQ(nearest_intersection(g, {130, 40}), iid(1));
}

TEST(NearestIntersection, EmptyGraph)
{
  RoadGraph g;
  try {
    nearest_intersection(g, {0, 0});
    FAIL() << "expected GeoError";
  }
  catch (const GeoError& e) {
    EXPECT_EQ(e.code(), GeoError::Code::EmptyGraph);
  }
}

TEST(NearestIntersection, MatchesBruteForce)
{
  Rng rng(11);
  for (int round = 0; round < 20; ++round) {
    auto g = random_graph(rng, 25);
    for (int k = 0; k < 100; ++k) {
      GeoPoint p{rng.uniform(-600, 600), rng.uniform(-600, 600)};
      const Intersection* best = nullptr;
      for (const auto& in : g.intersections()) {
        if (!best || distance(p, in.point) < distance(p, best->point) ||
            (distance(p, in.point) == distance(p, best->point) && in.id < best->id)) {
          best = &in;
        }
      }
      EXPECT_EQ(nearest_intersection(g, p), best->id);
    }
  }
}

TEST(ReverseGeocode, Examples)
{
  RoadGraph g({{iid(1), "westwood-at-strathmore", {100, 200}}, {iid(2), "gayley-at-strathmore", {400, 200}}},
              {{sid(1), iid(1), iid(2)}});
  EXPECT_EQ(reverse_geocode(g, {100, 200}), "westwood-at-strathmore");
  // Midway along the segment, slightly nearer the east end.
  EXPECT_EQ(reverse_geocode(g, {251, 200}), "gayley-at-strathmore");
  EXPECT_EQ(reverse_geocode(g, {249, 200}), "westwood-at-strathmore");

  RoadGraph single({{iid(0), "only", {0, 0}}}, {});
  EXPECT_EQ(reverse_geocode(single, {1e6, -1e6}), "only");
}

TEST(ReverseGeocode, EveryIntersectionMapsToItsLabel)
{
  Rng rng(3);
  auto g = random_graph(rng, 40);
  for (const auto& in : g.intersections()) EXPECT_EQ(reverse_geocode(g, in.point), in.label);
}

TEST(RoadsAt, DegreeCounts)
{
  auto g = crossroads();
  EXPECT_EQ(roads_at(g, iid(0)), (std::set{sid(10), sid(11), sid(12), sid(13)}));
  EXPECT_EQ(roads_at(g, iid(5)).size(), 1u);
  EXPECT_EQ(roads_at(g, iid(1)).size(), 2u);

  Rng rng(5);
  auto r = random_graph(rng, 30);
  std::map<IntersectionId, std::size_t> degree;
  for (const auto& s : r.segments()) {
    ++degree[s.a];
    ++degree[s.b];
  }
  for (const auto& in : r.intersections()) EXPECT_EQ(roads_at(r, in.id).size(), degree[in.id]);
}

TEST(DirectionOf, Examples)
{
  auto g = crossroads();
  EXPECT_EQ(direction_of(g, iid(0), {50, 0}), sid(10));
  EXPECT_EQ(direction_of(g, iid(0), {3, -40}), sid(13));
  EXPECT_EQ(direction_of(g, iid(0), {0, 0}), sid(10));
  RoadGraph isolated({{iid(0), "x", {0, 0}}}, {});
  EXPECT_THROW(direction_of(isolated, iid(0), {1, 1}), GeoError);
}

TEST(DirectionOf, MatchesBruteForce)
{
  Rng rng(13);
  auto g = random_graph(rng, 30);
  for (const auto& in : g.intersections()) {
    for (int k = 0; k < 20; ++k) {
      GeoPoint p{rng.uniform(-600, 600), rng.uniform(-600, 600)};
      double best = -1e300;
      SegmentId best_id{-1};
      for (const auto& s : g.segments()) {
        if (s.a != in.id && s.b != in.id) continue;
        auto other = g.intersection(s.a == in.id ? s.b : s.a).point;
        double len = distance(other, in.point);
        double d = ((other.x - in.point.x) * (p.x - in.point.x) + (other.y - in.point.y) * (p.y - in.point.y)) / len;
        if (d > best || (d == best && s.id < best_id)) {
          best = d;
          best_id = s.id;
        }
      }
      EXPECT_EQ(direction_of(g, in.id, p), best_id);
    }
  }
}

TEST(RoadGraphJson, RoundTripAndLineNumbers)
{
  auto g = crossroads();
  EXPECT_EQ(road_graph_from_json(to_json(g)), g);

  auto path = std::filesystem::temp_directory_path() / "vndn_geo_bad.json";
  {
    std::ofstream out(path);
    out << "{\n  \"intersections\": [\n    {\"id\": 0, \"label\": \"a\", \"x\": 0, \"y\": 0}\n  ],\n"
        << "  \"segments\": [ oops ]\n}\n";
  }
  try {
    load_road_graph(path.string());
    FAIL() << "expected GeoError";
  }
  catch (const GeoError& e) {
    EXPECT_NE(std::string(e.what()).find(":5"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}
