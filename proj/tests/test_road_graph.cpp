#include <doctest.h>

#include <sstream>

#include "morp/road_network.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace morp;

namespace {

road_network parse(std::string const& nodes, std::string const& edges) {
  std::istringstream n{nodes}, e{edges};
  return load_network(n, e);
}

std::string const kNodes = "id,lat,lon\nA,0,0\nB,0,1\nC,1,0\n";

}  // namespace

TEST_CASE("loading a small network") {
  auto const net = parse(kNodes,
                         "from,to,mode,travel_seconds\n"
                         "A,B,car,2\nB,C,car,3\nA,C,foot,10\n");
  CHECK(net.size() == 3U);
  CHECK(net.id("B") == 1U);
  CHECK(net.in_car(0));
  CHECK(net.in_foot(2));
  CHECK_FALSE(net.in_foot(1));
  CHECK(shortest_time(net, mode::car, 0, 2) == 5000);
  CHECK(shortest_time(net, mode::car, 2, 0) == kInf);
  CHECK(shortest_time(net, mode::foot, 2, 0) == 10000);
  CHECK(shortest_time(net, mode::car, 1, 1) == 0);
}

TEST_CASE("the worked example has six vertices") {
  CHECK(fixture::worked_example().size() == 6U);
}

TEST_CASE("input errors") {
  SUBCASE("undeclared endpoint") {
    CHECK_THROWS_AS(parse(kNodes, "from,to,mode,travel_seconds\nA,Z,car,1\n"),
                    validation_error);
  }
  SUBCASE("duplicate vertex") {
    CHECK_THROWS_AS(parse("id,lat,lon\nA,0,0\nA,1,1\n", "from,to,mode,travel_seconds\n"),
                    validation_error);
  }
  SUBCASE("non-positive weight") {
    CHECK_THROWS_AS(parse(kNodes, "from,to,mode,travel_seconds\nA,B,car,0\n"),
                    validation_error);
  }
  SUBCASE("bad mode carries the line number") {
    try {
      parse(kNodes, "from,to,mode,travel_seconds\nA,B,car,1\nA,C,bus,1\n");
      FAIL("expected a parse error");
    } catch (parse_error const& e) {
      CHECK(e.line() == 3U);
    }
  }
  SUBCASE("bad header") {
    CHECK_THROWS_AS(parse("name,lat,lon\n", "from,to,mode,travel_seconds\n"), parse_error);
  }
  SUBCASE("unknown vertex query") {
    auto const net = parse(kNodes, "from,to,mode,travel_seconds\nA,B,car,1\n");
    CHECK_THROWS_AS(net.id("Q"), std::domain_error);
    CHECK_THROWS_AS(shortest_time(net, mode::car, 0, 17), std::domain_error);
  }
}

TEST_CASE("mode membership") {
  auto const net = parse(kNodes, "from,to,mode,travel_seconds\nA,B,car,2\n");
  // C is isolated; it counts as a pedestrian vertex.
  CHECK(net.in_foot(2));
  CHECK_FALSE(net.in_car(2));
  CHECK(shortest_time(net, mode::car, 0, 2) == kInf);
  CHECK(shortest_time(net, mode::foot, 2, 2) == 0);
}

TEST_CASE("k_nearest") {
  auto const star = oracle::build({"c", "a", "b", "d"}, {{"c", "a", true, 4},
                                                         {"c", "b", true, 5},
                                                         {"c", "d", true, 7}});
  auto const out = k_nearest(star, 0, 3, direction::outward);
  CHECK_FALSE(out.deficit);
  REQUIRE(out.items.size() == 3U);
  CHECK(out.items[0] == std::pair<vertex_id, time_ms>{1, 4000});
  CHECK(out.items[2] == std::pair<vertex_id, time_ms>{3, 7000});
  auto const in = k_nearest(star, 0, 3, direction::inward);
  CHECK(in.deficit);
  CHECK(in.items.empty());

  auto const ex = fixture::worked_example();
  auto const f = k_nearest(ex, ex.id("F"), 3, direction::outward);
  CHECK(f.deficit);
  CHECK(f.items.empty());
}

TEST_CASE("walk_radius") {
  auto const chain = oracle::build({"u", "v", "w"}, {{"u", "v", false, 100},
                                                     {"v", "w", false, 200}});
  auto const r = walk_radius(chain, 0, 240'000);
  REQUIRE(r.size() == 2U);
  CHECK(r[0] == std::pair<vertex_id, time_ms>{0, 0});
  CHECK(r[1] == std::pair<vertex_id, time_ms>{1, 100'000});
  CHECK(walk_radius(chain, 0, 0).size() == 1U);
}

TEST_CASE("random graphs against Floyd-Warshall") {
  std::mt19937_64 rng{7};
  for (auto iter = 0; iter != 30; ++iter) {
    oracle::random_params p;
    p.n = 50U;
    p.tie_weights = iter % 3 == 0;
    auto const net = oracle::random_network(rng, p);
    auto const car = oracle::car_matrix(net);
    auto const foot = oracle::foot_matrix(net);
    for (vertex_id u = 0; u != net.size(); ++u) {
      for (vertex_id v = 0; v != net.size(); ++v) {
        auto const want_car = net.in_car(u) && net.in_car(v) ? car[u][v] : kInf;
        REQUIRE(shortest_time(net, mode::car, u, v) == (u == v ? 0 : want_car));
        if (net.in_foot(u) && net.in_foot(v)) {
          REQUIRE(shortest_time(net, mode::foot, u, v) == foot[u][v]);
          REQUIRE(foot[u][v] == foot[v][u]);
        }
      }
      // k_nearest matches a full sort of the oracle row.
      if (net.in_car(u)) {
        std::vector<std::pair<time_ms, vertex_id>> row;
        for (vertex_id v = 0; v != net.size(); ++v) {
          if (v != u && car[u][v] != kInf) {
            row.emplace_back(car[u][v], v);
          }
        }
        std::sort(row.begin(), row.end());
        auto const got = k_nearest(net, u, 4, direction::outward);
        CHECK(got.deficit == (row.size() < 4U));
        REQUIRE(got.items.size() == std::min<std::size_t>(4U, row.size()));
        for (auto i = 0U; i != got.items.size(); ++i) {
          CHECK(got.items[i].second == row[i].first);
        }
      }
      if (net.in_foot(u)) {
        auto const radius = walk_radius(net, u, 60'000);
        std::size_t want = 0U;
        for (vertex_id v = 0; v != net.size(); ++v) {
          want += foot[u][v] <= 60'000 ? 1U : 0U;
        }
        CHECK(radius.size() == want);
        for (auto const& [v, w] : radius) {
          CHECK(w == foot[u][v]);
        }
      }
    }
  }
}

TEST_CASE("triangle inequality on sampled triples") {
  std::mt19937_64 rng{11};
  auto const net = oracle::random_network(rng, {});
  std::uniform_int_distribution<vertex_id> pick{0, static_cast<vertex_id>(net.size() - 1U)};
  for (auto i = 0; i != 500; ++i) {
    auto const u = pick(rng), v = pick(rng), w = pick(rng);
    if (!net.in_car(u) || !net.in_car(v) || !net.in_car(w)) {
      continue;
    }
    auto const uw = shortest_time(net, mode::car, u, w);
    auto const via = add_dist(shortest_time(net, mode::car, u, v),
                              shortest_time(net, mode::car, v, w));
    CHECK(uw <= via);
  }
}

TEST_CASE("seconds formatting") {
  CHECK(format_seconds(1500) == "1.500");
  CHECK(format_seconds(kInf) == "inf");
  CHECK(parse_seconds("2.0005") == 2001);
  CHECK(parse_seconds("inf") == kInf);
  CHECK(format_cost(3 * kCostPerSecond / 2) == "1.500000");
  CHECK(parse_milli("0.3") == 300);
}
