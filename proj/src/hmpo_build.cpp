#include "morp/hmpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

namespace morp {

char const* to_string(level const l) {
  switch (l) {
    case level::core: return "core";
    case level::sub: return "sub";
    case level::defective: return "defective";
  }
  return "?";
}

std::vector<vertex_id> dvs_result::members() const {
  std::vector<vertex_id> out;
  for (auto v = vertex_id{0}; v != defective.size(); ++v) {
    if (defective[v]) {
      out.push_back(v);
    }
  }
  return out;
}

dvs_result select_defective(road_network const& net,
                            convenience_tables const& conv,
                            candidate_tables const& mc) {
  auto const n = net.size();
  dvs_result r;
  r.defective.assign(n, 0);

  std::vector<vertex_id> order;
  for (auto v = vertex_id{0}; v != n; ++v) {
    if (net.in_car(v)) {
      order.push_back(v);
    }
  }
  // Decreasing ECO+ECI; kInf sorts first, ties by id.
  std::stable_sort(order.begin(), order.end(), [&](vertex_id a, vertex_id b) {
    return conv.ec_sum(a) > conv.ec_sum(b);
  });

  auto& removed = r.defective;
  std::vector<char> reserved(n, 0);
  std::vector<arc> in_v, out_v;
  dijkstra d{n};
  auto const& fwd = net.car();
  auto const& bwd = net.car_reversed();

  for (auto const u : order) {
    if (reserved[u]) {
      r.rounds.push_back({u, dvs_outcome::reserved});
      continue;
    }
    auto const& cands = mc.mc[u];
    auto const keeps_mp = std::any_of(cands.begin(), cands.end(), [&](auto const& c) {
      return c.v != u && !removed[c.v];
    });
    if (!keeps_mp) {
      r.rounds.push_back({u, dvs_outcome::no_candidate});
      continue;
    }

    in_v.clear();
    out_v.clear();
    for (auto const& a : bwd.out(u)) {
      if (!removed[a.to]) {
        in_v.push_back(a);
      }
    }
    for (auto const& a : fwd.out(u)) {
      if (!removed[a.to]) {
        out_v.push_back(a);
      }
    }

    removed[u] = 1;
    auto ok = true;
    if (!in_v.empty() && !out_v.empty()) {
      auto const max_w = [](std::vector<arc> const& xs) {
        return std::max_element(xs.begin(), xs.end(), [](auto const& a, auto const& b) {
                 return a.w < b.w;
               })->w;
      };
      auto const t_m = max_w(in_v) + max_w(out_v);
      for (auto const& vin : in_v) {
        d.prepare(n);
        d.add_source(vin.to);
        d.run(fwd, [&](vertex_id x) { return removed[x] != 0; }, t_m);
        for (auto const& vout : out_v) {
          if (vout.to != vin.to && d.dist(vout.to) > vin.w + vout.w) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          break;
        }
      }
    }

    if (!ok) {
      removed[u] = 0;
      r.rounds.push_back({u, dvs_outcome::detour});
      continue;
    }
    r.rounds.push_back({u, dvs_outcome::defective});
    for (auto const& c : cands) {
      reserved[c.v] = 1;
    }
  }
  return r;
}

pruned_graph::pruned_graph(road_network const& net,
                           std::vector<char> const& defective) {
  auto const n = net.size();
  alive.assign(n, 1);
  for (auto v = 0U; v != n; ++v) {
    if (defective[v]) {
      alive[v] = 0;
    }
  }
  std::vector<weighted_edge> es;
  for (auto const& e : net.car().edges()) {
    if (alive[e.from] && alive[e.to]) {
      es.push_back(e);
    }
  }
  fwd = digraph{n, es};
  bwd = fwd.reversed();
}

serving_sets build_serving_sets(candidate_tables const& mc,
                                std::vector<char> const& defective) {
  serving_sets s;
  s.ms.resize(mc.mc.size());
  for (auto owner = vertex_id{0}; owner != mc.mc.size(); ++owner) {
    for (auto const& c : mc.mc[owner]) {
      if (!defective[c.v]) {
        s.ms[c.v].push_back(owner);
      }
    }
  }
  // Owners were visited in increasing order, so each list is sorted.
  return s;
}

std::size_t required_coverage(std::size_t const universe_size,
                              double const epsilon) {
  auto const x = epsilon * static_cast<double>(universe_size);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - 1e-9)));
}

std::size_t covered_count(serving_sets const& ms,
                          std::vector<char> const& universe,
                          std::vector<char> const& chosen) {
  std::vector<char> hit(universe.size(), 0);
  std::size_t n = 0U;
  for (auto v = vertex_id{0}; v != ms.ms.size(); ++v) {
    if (!chosen[v]) {
      continue;
    }
    for (auto const e : ms.ms[v]) {
      if (universe[e] && !hit[e]) {
        hit[e] = 1;
        ++n;
      }
    }
  }
  return n;
}

set_cover_result partial_set_cover(serving_sets const& ms,
                                   std::vector<char> const& universe,
                                   double const epsilon,
                                   std::vector<time_ms> const& order_weight) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw std::invalid_argument{"epsilon must lie in (0, 1]"};
  }
  auto const n = ms.ms.size();
  set_cover_result r;
  r.cost.assign(n, kInfCount);
  r.need = required_coverage(
      static_cast<std::size_t>(std::count(universe.begin(), universe.end(), 1)),
      epsilon);

  // Sets ranked by (weight, id); a guess may only use sets ranked below it.
  std::vector<vertex_id> sets;
  for (auto v = vertex_id{0}; v != n; ++v) {
    if (!ms.ms[v].empty()) {
      sets.push_back(v);
    }
  }
  std::stable_sort(sets.begin(), sets.end(), [&](vertex_id a, vertex_id b) {
    return order_weight[a] < order_weight[b];
  });
  std::vector<std::size_t> rank(n, kInfCount);
  for (auto i = 0U; i != sets.size(); ++i) {
    rank[sets[i]] = i;
  }

  std::vector<char> all(n, 0);
  for (auto const v : sets) {
    all[v] = 1;
  }
  if (covered_count(ms, universe, all) < r.need) {
    throw construction_error{
        "partial set cover infeasible: all serving sets together cover fewer "
        "than epsilon of the passenger vertices"};
  }
  if (r.need == 0U) {
    return r;
  }

  // element -> sets containing it
  std::vector<std::vector<vertex_id>> holders(n);
  for (auto const v : sets) {
    for (auto const e : ms.ms[v]) {
      holders[e].push_back(v);
    }
  }

  std::vector<char> covered(n, 0);
  std::vector<std::size_t> open(n, 0U);  // uncovered elements per set
  std::vector<double> frozen(n, 0.0);   // dual mass of covered elements
  std::vector<char> taken(n, 0);

  auto best_cost = kInfCount;
  std::size_t best_rank = kInfCount;
  std::vector<vertex_id> best_cover, chosen;

  for (auto const h : sets) {
    std::fill(covered.begin(), covered.end(), 0);
    std::fill(taken.begin(), taken.end(), 0);
    chosen.clear();
    std::size_t count = 0U;
    auto const take = [&](vertex_id const t, double const y) {
      taken[t] = 1;
      chosen.push_back(t);
      for (auto const e : ms.ms[t]) {
        if (!universe[e] || covered[e]) {
          continue;
        }
        covered[e] = 1;
        ++count;
        for (auto const o : holders[e]) {
          if (rank[o] < rank[h]) {
            --open[o];
            frozen[o] += y;
          }
        }
      }
    };

    auto const prefix = rank[h];
    for (auto i = 0U; i != prefix; ++i) {
      auto const t = sets[i];
      frozen[t] = 0.0;
      open[t] = static_cast<std::size_t>(std::count_if(
          ms.ms[t].begin(), ms.ms[t].end(), [&](vertex_id e) { return universe[e] != 0; }));
    }
    take(h, 0.0);

    auto feasible = true;
    while (count < r.need) {
      // Raise all uncovered duals together until some set becomes tight:
      // set t is tight at level (1 - frozen_t) / open_t.
      auto best = kNoVertex;
      auto best_level = 0.0;
      for (auto i = 0U; i != prefix; ++i) {
        auto const t = sets[i];
        if (taken[t] || open[t] == 0U) {
          continue;
        }
        auto const lvl = (1.0 - frozen[t]) / static_cast<double>(open[t]);
        if (best == kNoVertex) {
          best = t;
          best_level = lvl;
          continue;
        }
        auto const tol = 1e-12 * std::max(1.0, std::abs(best_level));
        if (lvl < best_level - tol) {
          best = t;
          best_level = lvl;
        } else if (std::abs(lvl - best_level) <= tol &&
                   std::tie(order_weight[best], t) <
                       std::tie(order_weight[t], best)) {
          // Equal price: larger ECO+ECI first, then ascending id.
          best = t;
          best_level = lvl;
        }
      }
      if (best == kNoVertex) {
        feasible = false;
        break;
      }
      take(best, best_level);
    }
    if (!feasible) {
      continue;
    }
    r.cost[h] = chosen.size();
    if (chosen.size() < best_cost ||
        (chosen.size() == best_cost && rank[h] < best_rank)) {
      best_cost = chosen.size();
      best_rank = rank[h];
      best_cover = chosen;
    }
  }
  std::sort(best_cover.begin(), best_cover.end());
  r.cover = std::move(best_cover);
  return r;
}

namespace {

// Searches from s for a shortest path of k vertices avoiding `cover`.
bool violates_from(clean_search& cs, digraph const& g,
                   std::vector<char> const& cover, vertex_id const s,
                   unsigned const k) {
  if (cover[s]) {
    return false;
  }
  auto found = false;
  cs.run(g, s, [&](vertex_id v) { return cover[v] == 0; },
         [&](vertex_id v, time_ms, std::uint32_t hops) {
           if (hops >= k && !cover[v]) {
             found = true;
             return false;
           }
           return true;
         });
  return found;
}

}  // namespace

bool is_k_skip_cover(pruned_graph const& g, std::vector<char> const& cover,
                     unsigned const k) {
  return check_k_skip_cover(g, cover, k, kInfCount, 0U).ok;
}

sampled_check check_k_skip_cover(pruned_graph const& g,
                                 std::vector<char> const& cover,
                                 unsigned const k, std::size_t const samples,
                                 std::uint64_t const seed) {
  if (k == 0U) {
    throw std::invalid_argument{"k must be at least 1"};
  }
  std::vector<vertex_id> sources;
  for (auto v = vertex_id{0}; v != g.size(); ++v) {
    if (g.alive[v]) {
      sources.push_back(v);
    }
  }
  sampled_check r;
  if (sources.size() > samples) {
    std::mt19937_64 rng{seed};
    std::shuffle(sources.begin(), sources.end(), rng);
    sources.resize(samples);
    r.sampled = true;
  }
  clean_search cs;
  for (auto const s : sources) {
    ++r.sources_checked;
    if (violates_from(cs, g.fwd, cover, s, k)) {
      r.ok = false;
      break;
    }
  }
  return r;
}

namespace {

// Whether cover stays a k-skip cover once v (currently a member) leaves it.
// Only paths through v can break, and their prefix ending at v is itself a
// short cover-free shortest path, so its start is found by a reverse search.
bool still_cover_without(pruned_graph const& g, std::vector<char>& cover,
                         vertex_id const v, unsigned const k,
                         clean_search& rev, clean_search& fwd) {
  cover[v] = 0;
  std::vector<vertex_id> starts;
  auto broken = false;
  rev.run(g.bwd, v, [&](vertex_id x) { return cover[x] == 0; },
          [&](vertex_id x, time_ms, std::uint32_t hops) {
            if (hops == 0U || cover[x]) {
              return true;
            }
            if (hops >= k) {
              broken = true;
              return false;
            }
            starts.push_back(x);
            return true;
          });
  for (auto it = starts.begin(); !broken && it != starts.end(); ++it) {
    broken = violates_from(fwd, g.fwd, cover, *it, k);
  }
  cover[v] = 1;
  return !broken;
}

}  // namespace

std::vector<char> complete_k_skip(pruned_graph const& g,
                                  std::vector<vertex_id> const& seed_cover,
                                  std::vector<std::size_t> const& cost,
                                  unsigned const k, double const epsilon,
                                  serving_sets const& ms,
                                  std::vector<char> const& universe) {
  if (k == 0U) {
    throw std::invalid_argument{"k must be at least 1"};
  }
  auto const n = g.size();
  auto cover = g.alive;
  std::vector<char> is_seed(n, 0);
  for (auto const v : seed_cover) {
    is_seed[v] = 1;
  }

  auto const need = required_coverage(
      static_cast<std::size_t>(std::count(universe.begin(), universe.end(), 1)),
      epsilon);
  std::vector<std::uint32_t> hits(n, 0U);
  std::size_t covered = 0U;
  for (auto v = vertex_id{0}; v != n; ++v) {
    if (!cover[v]) {
      continue;
    }
    for (auto const e : ms.ms[v]) {
      if (universe[e] && hits[e]++ == 0U) {
        ++covered;
      }
    }
  }
  auto const coverage_without = [&](vertex_id const v) {
    auto lost = std::size_t{0};
    for (auto const e : ms.ms[v]) {
      if (universe[e] && hits[e] == 1U) {
        ++lost;
      }
    }
    return covered - lost;
  };
  auto const drop = [&](vertex_id const v) {
    cover[v] = 0;
    for (auto const e : ms.ms[v]) {
      if (universe[e] && --hits[e] == 0U) {
        --covered;
      }
    }
  };

  auto const by_cost = [&](std::vector<vertex_id>& xs) {
    std::stable_sort(xs.begin(), xs.end(), [&](vertex_id a, vertex_id b) {
      return cost[a] > cost[b];
    });
  };
  std::vector<vertex_id> rest, seeds;
  for (auto v = vertex_id{0}; v != n; ++v) {
    if (cover[v]) {
      (is_seed[v] ? seeds : rest).push_back(v);
    }
  }
  by_cost(rest);
  by_cost(seeds);

  clean_search rev, fwd;
  for (auto const* pass : {&rest, &seeds}) {
    for (auto const v : *pass) {
      if (coverage_without(v) >= need &&
          still_cover_without(g, cover, v, k, rev, fwd)) {
        drop(v);
      }
    }
  }
  return cover;
}

double core_size_bound(std::size_t const n, unsigned const k,
                       unsigned const nc_m, std::size_t const seed_size) {
  auto const r = static_cast<double>(n) / static_cast<double>(k);
  auto const sampled = r > 1.0 ? r * std::log(r) : 0.0;
  return std::max(sampled, static_cast<double>(nc_m) * static_cast<double>(seed_size));
}

void hmpo_graph::index() {
  auto const n = levels.size();
  auto const to_graph = [n](std::vector<super_edge> const& es, bool rev) {
    std::vector<weighted_edge> w;
    w.reserve(es.size());
    for (auto const& e : es) {
      w.push_back(rev ? weighted_edge{e.to, e.from, e.cost}
                      : weighted_edge{e.from, e.to, e.cost});
    }
    return digraph{n, std::move(w)};
  };
  cc = to_graph(e_cc, false);
  sc = to_graph(e_sc, false);
  cs_in = to_graph(e_cs, true);
  ss = to_graph(e_ss, false);
  cc_in = to_graph(e_cc, true);
  sc_in = to_graph(e_sc, true);
  ss_in = to_graph(e_ss, true);
}

hmpo_graph build_super_edges(pruned_graph base, std::vector<char> const& v_co,
                             unsigned const k) {
  hmpo_graph h;
  h.k = k;
  auto const n = base.size();
  h.levels.resize(n);
  for (auto v = 0U; v != n; ++v) {
    h.levels[v] = !base.alive[v] ? level::defective
                  : v_co[v]      ? level::core
                                 : level::sub;
  }
  clean_search cs;
  for (auto s = vertex_id{0}; s != n; ++s) {
    if (!base.alive[s]) {
      continue;
    }
    auto const s_core = h.levels[s] == level::core;
    cs.run(base.fwd, s, [&](vertex_id v) { return h.levels[v] != level::core; },
           [&](vertex_id v, time_ms d, std::uint32_t hops) {
             if (v == s || hops == 0U) {
               return true;
             }
             auto const v_core = h.levels[v] == level::core;
             auto& bucket = s_core ? (v_core ? h.e_cc : h.e_cs)
                                   : (v_core ? h.e_sc : h.e_ss);
             bucket.push_back({s, v, d});
             return true;
           });
  }
  auto const ordered = [](std::vector<super_edge>& es) {
    std::sort(es.begin(), es.end(), [](auto const& a, auto const& b) {
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
  };
  ordered(h.e_cc);
  ordered(h.e_cs);
  ordered(h.e_sc);
  ordered(h.e_ss);
  h.base = std::move(base);
  h.index();
  return h;
}

}  // namespace morp
