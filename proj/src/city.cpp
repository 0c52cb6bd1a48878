#include "morp/city.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>

namespace morp {

namespace {

constexpr double kBaseLat = 40.75;
constexpr double kBaseLon = -73.98;
constexpr double kBlockM = 100.0;
constexpr time_ms kWalkBlock = 71'000;  // 1.4 m/s
constexpr double kMetresPerDegLat = 111'195.0;

bool arterial(unsigned const i) { return i % 5U == 0U; }

}  // namespace

road_network make_city(city_params const& p) {
  std::mt19937_64 rng{p.seed};
  std::uniform_real_distribution<double> jitter{0.9, 1.1};
  std::uniform_real_distribution<double> coin{0.0, 1.0};

  auto const lon_scale = kMetresPerDegLat * std::cos(kBaseLat * 3.14159265358979323846 / 180.0);
  std::vector<std::string> names;
  std::vector<double> lat, lon;
  auto const idx = [&](unsigned r, unsigned c) { return r * p.cols + c; };
  for (auto r = 0U; r != p.rows; ++r) {
    for (auto c = 0U; c != p.cols; ++c) {
      names.push_back("n" + std::to_string(r) + "_" + std::to_string(c));
      lat.push_back(kBaseLat + r * kBlockM / kMetresPerDegLat);
      lon.push_back(kBaseLon + c * kBlockM / lon_scale);
    }
  }

  std::vector<raw_edge> edges;
  auto const jit = [&](time_ms base) {
    return std::max<time_ms>(1, static_cast<time_ms>(static_cast<double>(base) * jitter(rng)));
  };
  // Local streets run one way, alternating by row or column; arterials
  // carry both directions. One-way streets are occasionally two-way.
  auto const street = [&](vertex_id a, vertex_id b, bool fast, bool flip) {
    auto const base = fast ? time_ms{10'000} : time_ms{30'000};
    auto const one_way = !fast && coin(rng) < p.one_way_probability;
    if (one_way && flip) {
      std::swap(a, b);
    }
    edges.push_back({a, b, mode::car, jit(base)});
    if (!one_way) {
      edges.push_back({b, a, mode::car, jit(base)});
    }
    edges.push_back({a, b, mode::foot, kWalkBlock});
  };
  for (auto r = 0U; r != p.rows; ++r) {
    for (auto c = 0U; c != p.cols; ++c) {
      if (c + 1U < p.cols) {
        street(idx(r, c), idx(r, c + 1U), arterial(r), r % 2U == 1U);
      }
      if (r + 1U < p.rows) {
        street(idx(r, c), idx(r + 1U, c), arterial(c), c % 2U == 1U);
      }
    }
  }

  // Pedestrian spurs hang off random intersections; a car can reach the
  // spur end only by a slow alley.
  auto const grid = static_cast<vertex_id>(names.size());
  for (vertex_id v = 0; v != grid; ++v) {
    if (coin(rng) >= p.spur_probability) {
      continue;
    }
    auto const s = static_cast<vertex_id>(names.size());
    names.push_back("s" + std::to_string(v));
    lat.push_back(lat[v] + 0.5 * kBlockM / kMetresPerDegLat);
    lon.push_back(lon[v]);
    edges.push_back({v, s, mode::foot, kWalkBlock / 2});
    if (coin(rng) < 0.5) {
      edges.push_back({v, s, mode::car, 15'000});
      edges.push_back({s, v, mode::car, 15'000});
    }
  }
  return road_network{std::move(names), std::move(lat), std::move(lon), edges};
}

std::vector<request_spec> make_requests(road_network const& net,
                                        demand_params const& p) {
  // Hop distance to the nearest arterial vertex, by BFS over car arcs in
  // either direction.
  auto const n = net.size();
  std::vector<unsigned> hops(n, ~0U);
  std::deque<vertex_id> q;
  for (vertex_id v = 0; v != n; ++v) {
    auto const& name = net.name(v);
    if (name[0] != 'n') {
      continue;
    }
    auto const us = name.find('_');
    auto const r = std::stoul(name.substr(1, us - 1));
    auto const c = std::stoul(name.substr(us + 1));
    if (arterial(static_cast<unsigned>(r)) || arterial(static_cast<unsigned>(c))) {
      hops[v] = 0U;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    auto const v = q.front();
    q.pop_front();
    auto const visit = [&](vertex_id u) {
      if (hops[u] == ~0U) {
        hops[u] = hops[v] + 1U;
        q.push_back(u);
      }
    };
    for (auto const& a : net.car().out(v)) {
      visit(a.to);
    }
    for (auto const& a : net.car_reversed().out(v)) {
      visit(a.to);
    }
  }

  std::vector<vertex_id> pool;
  std::vector<double> weights;
  for (vertex_id v = 0; v != n; ++v) {
    if (net.in_car(v) && hops[v] != ~0U) {
      pool.push_back(v);
      weights.push_back(1.0 / (1.0 + hops[v]));
    }
  }
  std::vector<request_spec> out;
  if (pool.size() < 2U) {
    return out;
  }
  std::mt19937_64 rng{p.seed};
  std::discrete_distribution<std::size_t> pick{weights.begin(), weights.end()};
  std::uniform_int_distribution<time_ms> when{0, p.horizon};
  std::uniform_int_distribution<int> size{1, std::max(1, p.max_demand)};
  std::vector<time_ms> releases(p.count);
  for (auto& t : releases) {
    t = when(rng) / 1000 * 1000;
  }
  std::sort(releases.begin(), releases.end());
  for (auto i = 0U; i != p.count; ++i) {
    request_spec r;
    r.id = "r" + std::to_string(i);
    r.release = releases[i];
    r.s = pool[pick(rng)];
    do {
      r.e = pool[pick(rng)];
    } while (r.e == r.s);
    r.demand = size(rng);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace morp
