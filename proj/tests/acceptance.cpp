// Acceptance run: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "morp/city.hpp"
#include "morp/dispatch.hpp"
#include "morp/hmpo.hpp"
#include "morp/query.hpp"
#include "morp/sim.hpp"
#include "morp/smd.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace morp;

namespace {

// Pinned limits.
constexpr std::size_t kCorpusSize = 200U;
constexpr std::size_t kCorpusMaxVertices = 100U;
constexpr std::size_t kEnumerationMaxVertices = 60U;
constexpr double kQueryBudgetSeconds = 60.0;
constexpr std::size_t kEquivalenceInstances = 50U;
constexpr double kEquivalenceBudgetSeconds = 300.0;
constexpr std::size_t kTrendSeeds = 10U;
constexpr double kTrendBudgetSeconds = 600.0;
constexpr std::size_t kGridSeeds = 10U;
// Cells per degree; about 280 m and 110 m at this latitude.
constexpr double kGridDensities[] = {400.0, 1000.0};
constexpr time_ms kZero = 0;  // exactness tolerance everywhere

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void verdict(int n, bool ok, std::string const& what) {
  std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++failures;
  }
}

// --- random corpus -----------------------------------------------------------

struct corpus_item {
  artifacts a;
  std::vector<char> universe;
};

struct corpus {
  std::vector<corpus_item> items;
  std::size_t redraws = 0U;
};

corpus make_corpus() {
  corpus c;
  std::mt19937_64 rng{20240601};
  for (std::size_t i = 0; i != kCorpusSize; ++i) {
    oracle::random_params rp;
    rp.n = 20U + (i * 37U) % (kCorpusMaxVertices - 19U);
    rp.tie_weights = i % 4U == 0U;
    rp.one_way = 0.2 + 0.05 * static_cast<double>(i % 5U);
    prep_params pp;
    pp.n_r = 3U;
    // k in {2,3} wherever the cover is checked by enumeration.
    pp.k = rp.n <= kEnumerationMaxVertices ? 2U + i % 2U : 2U + i % 4U;
    pp.candidates.d_m = 60'000 + 10'000 * static_cast<time_ms>(i % 4U);
    pp.candidates.thr_cs = 20'000 + 5'000 * static_cast<time_ms>(i % 3U);
    pp.candidates.nc_m = 3U + i % 2U;
    pp.epsilon = 0.8;
    while (true) {
      try {
        corpus_item it{preprocess(oracle::random_network(rng, rp), pp), {}};
        it.universe.resize(it.a.net.size());
        for (vertex_id v = 0; v != it.a.net.size(); ++v) {
          it.universe[v] = it.a.net.in_foot(v) ? 1 : 0;
        }
        c.items.push_back(std::move(it));
        break;
      } catch (construction_error const&) {
        ++c.redraws;
      }
    }
  }
  return c;
}

bool usable(artifacts const& a, vertex_id v) {
  return a.net.in_car(v) && !a.dvs.defective[v];
}

void query_exactness(corpus const& c) {
  auto const t0 = clock_type::now();
  std::size_t pairs = 0U, wrong = 0U;
  for (auto const& it : c.items) {
    auto const& a = it.a;
    auto const d = oracle::car_matrix(a.net, a.dvs.defective);
    query_engine const q{a.hmpo};
    for (vertex_id u = 0; u != a.net.size(); ++u) {
      if (!usable(a, u)) {
        continue;
      }
      for (vertex_id v = 0; v != a.net.size(); ++v) {
        if (!usable(a, v)) {
          continue;
        }
        ++pairs;
        if (q.query(u, v) - d[u][v] != kZero) {
          ++wrong;
        }
      }
    }
  }
  auto const secs = seconds_since(t0);
  verdict(1, wrong == 0U && secs < kQueryBudgetSeconds,
          fmt::format("query exactness: {} graphs, {} pairs, {} mismatches, {:.1f}s "
                      "(limit {:.0f}s), {} redraws",
                      c.items.size(), pairs, wrong, secs, kQueryBudgetSeconds,
                      c.redraws));
}

void no_detour(corpus const& c) {
  std::size_t pairs = 0U, wrong = 0U, defective = 0U;
  for (auto const& it : c.items) {
    auto const& a = it.a;
    auto const full = oracle::car_matrix(a.net);
    auto const pruned = oracle::car_matrix(a.net, a.dvs.defective);
    defective += a.dvs.members().size();
    for (vertex_id u = 0; u != a.net.size(); ++u) {
      for (vertex_id v = 0; v != a.net.size(); ++v) {
        if (usable(a, u) && usable(a, v)) {
          ++pairs;
          wrong += full[u][v] != pruned[u][v] ? 1U : 0U;
        }
      }
    }
  }
  verdict(2, wrong == 0U,
          fmt::format("no detour: {} surviving pairs, {} defective vertices, {} "
                      "distance changes",
                      pairs, defective, wrong));
}

void accessibility(corpus const& c) {
  std::size_t checked = 0U, stranded = 0U;
  for (auto const& it : c.items) {
    auto const& a = it.a;
    for (auto const v : a.dvs.members()) {
      ++checked;
      auto const& mc = a.mc.mc[v];
      auto const ok = std::any_of(mc.begin(), mc.end(), [&](candidate const& x) {
        return !a.dvs.defective[x.v];
      });
      stranded += ok ? 0U : 1U;
    }
  }
  verdict(3, stranded == 0U,
          fmt::format("accessibility: {} defective vertices, {} without a "
                      "non-defective candidate",
                      checked, stranded));
}

void cover_validity(corpus const& c) {
  std::size_t enumerated = 0U, invalid = 0U, oversize = 0U, under = 0U;
  double worst = 0.0;
  for (auto const& it : c.items) {
    auto const& a = it.a;
    auto const k = a.params.k;
    if (a.net.size() <= kEnumerationMaxVertices) {
      ++enumerated;
      invalid += oracle::k_skip_cover(a.net, a.hmpo.base.alive, a.v_co, k) ? 0U : 1U;
    } else {
      invalid += is_k_skip_cover(a.hmpo.base, a.v_co, k) ? 0U : 1U;
    }
    under += covered_count(a.ms, it.universe, a.v_co) >= a.cover.need ? 0U : 1U;
    auto const size =
        static_cast<double>(std::count(a.v_co.begin(), a.v_co.end(), 1));
    auto const bound = core_size_bound(a.net.size(), k, a.params.candidates.nc_m,
                                       a.cover.cover.size());
    oversize += size <= bound ? 0U : 1U;
    worst = std::max(worst, size / bound);
  }
  verdict(4, invalid == 0U && oversize == 0U && under == 0U,
          fmt::format("k-skip cover: {} instances ({} by path enumeration, k in "
                      "{{2,3}}), {} invalid, {} over the size bound (max "
                      "|V_co|/bound {:.2f}), {} under coverage",
                      c.items.size(), enumerated, invalid, oversize, worst, under));
}

void smd_soundness(corpus const& c) {
  std::size_t checks = 0U, violations = 0U;
  for (auto const& it : c.items) {
    auto const& a = it.a;
    auto const& h = a.hmpo;
    auto const d = oracle::car_matrix(a.net, a.dvs.defective);
    for (vertex_id u = 0; u != h.size(); ++u) {
      auto const& e = a.smd.entries[u];
      if (!e.valid()) {
        continue;
      }
      auto const cands = effective_candidates(a.mc, h, u);
      for (vertex_id s = 0; s != h.size(); ++s) {
        if (!usable(a, s) || e.exempt(s) || d[s][e.checker] == kInf) {
          continue;
        }
        for (auto const v : cands) {
          ++checks;
          // SP(s, Ch) - SP(s, v) <= SMD, written without overflow for kInf.
          if (d[s][v] != kInf && d[s][e.checker] - d[s][v] - e.smd > kZero) {
            ++violations;
          }
        }
      }
    }
  }
  verdict(5, violations == 0U && checks > 0U,
          fmt::format("SMD soundness: {} (source, candidate) checks, {} violations",
                      checks, violations));
}

// --- simulations ----------------------------------------------------------------

std::string log_text(road_network const& net, sim_result const& r) {
  std::ostringstream s;
  write_log(s, net, r.log, false);
  return s.str();
}

struct ledger_tally {
  std::size_t runs = 0U, broken = 0U;
  void add(sim_result const& r) {
    ++runs;
    if (r.m.recomputed_cost != r.m.unified_cost ||
        r.m.unified_cost != r.m.drive_cost + r.m.walk_cost + r.m.penalty_cost) {
      ++broken;
    }
  }
};

struct city_instance {
  artifacts a;
  std::vector<request_spec> requests;
};

city_instance make_instance(unsigned side, std::size_t count, std::uint64_t seed) {
  city_params cp;
  cp.rows = cp.cols = side;
  cp.seed = seed;
  demand_params dp;
  dp.count = count;
  dp.seed = seed;
  city_instance c{preprocess(make_city(cp), prep_params{}), {}};
  c.requests = make_requests(c.a.net, dp);
  return c;
}

void smdb_equals_hsrp(ledger_tally& ledger) {
  auto const t0 = clock_type::now();
  std::size_t differing = 0U, served = 0U, pruned = 0U;
  for (std::size_t i = 0; i != kEquivalenceInstances; ++i) {
    auto const inst = make_instance(20U, 500U, 100U + i);
    sim_config c;
    c.fleet = 50U;
    c.seed = 100U + i;
    c.pol = policy::hsrp;
    auto const h = run_simulation(inst.a, inst.requests, c);
    c.pol = policy::smdb;
    auto const s = run_simulation(inst.a, inst.requests, c);
    ledger.add(h);
    ledger.add(s);
    differing += log_text(inst.a.net, h) == log_text(inst.a.net, s) ? 0U : 1U;
    served += s.m.served;
    pruned += s.stats.drivers_pruned;
  }
  auto const secs = seconds_since(t0);
  verdict(6, differing == 0U && secs < kEquivalenceBudgetSeconds,
          fmt::format("SMDB = HSRP: {} instances (20x20, 500 requests, 50 drivers), "
                      "{} logs differ, {} served, {} drivers pruned by SMDB, "
                      "{:.1f}s (limit {:.0f}s)",
                      kEquivalenceInstances, differing, served, pruned, secs,
                      kEquivalenceBudgetSeconds));
}

void worked_examples() {
  std::vector<std::string> bad;
  auto const expect = [&](bool ok, char const* what) {
    if (!ok) {
      bad.emplace_back(what);
    }
  };

  auto const net = fixture::worked_example();
  auto const conv = compute_convenience(net, 3);
  auto const mc = select_candidates(net, conv, fixture::worked_params());
  auto const dvs = select_defective(net, conv, mc);
  auto const ms = build_serving_sets(mc, dvs.defective);
  std::vector<char> const universe(net.size(), 1);
  std::vector<time_ms> weight(net.size());
  for (vertex_id v = 0; v != net.size(); ++v) {
    weight[v] = conv.ec_sum(v);
  }
  auto const id = [&](char const* n) { return net.id(n); };
  auto const names = [&](std::vector<vertex_id> const& vs) {
    std::set<std::string> out;
    for (auto const v : vs) {
      out.insert(net.name(v));
    }
    return out;
  };
  using S = std::set<std::string>;

  auto const sc = partial_set_cover(ms, universe, 0.8, weight);
  expect(names(sc.cover) == S{"B", "E"}, "cover {B,E}");
  expect(sc.cost[id("E")] == 2U, "cost_E = 2");
  expect(sc.cost[id("C")] == 3U, "cost_C = 3");
  expect(names(dvs.members()) == S{"D", "F"}, "V_de = {D,F}");

  pruned_graph const base{net, dvs.defective};
  auto const v_co = complete_k_skip(base, sc.cover, sc.cost, 2, 0.8, ms, universe);
  std::vector<vertex_id> core;
  for (vertex_id v = 0; v != net.size(); ++v) {
    if (v_co[v]) {
      core.push_back(v);
    }
  }
  expect(names(core) == S{"B", "E"}, "V_co = {B,E}");

  auto const h = build_super_edges(base, v_co, 2);
  using E = std::set<std::tuple<std::string, std::string, time_ms>>;
  auto const edges = [&](std::vector<super_edge> const& es) {
    E out;
    for (auto const& e : es) {
      out.emplace(net.name(e.from), net.name(e.to), e.cost);
    }
    return out;
  };
  expect(edges(h.e_cc) == E{{"B", "E", 9000}, {"E", "B", 8000}}, "E_cc");
  expect(edges(h.e_cs) == E{{"B", "A", 5000}, {"B", "C", 4000}}, "E_cs");
  expect(edges(h.e_sc) == E{{"A", "B", 1000}, {"C", "B", 9000}}, "E_sc");
  expect(h.e_ss.empty(), "E_ss empty");

  // Checker bound and the resulting prune.
  auto const sx = fixture::smd_example();
  query_engine const q{sx.h};
  hmpo_oracle const sp{q};
  auto const tables = hmdg(sx.h, sx.mc, q);
  auto const sid = [&](char const* n) { return sx.net.id(n); };
  auto const& e = tables.entries[sid("v22")];
  expect(e.checker == sid("v32") && e.smd == 1000, "LMD(v32) = 1");
  auto const ch = q.query(sid("vd"), sid("v32"));
  auto const bound = bound_other_candidates(tables, sid("v22"), ch);
  expect(ch == 12'000 && bound == 11'000, "12 - 1 = 11");

  request r;
  r.id = "q";
  r.s = sid("v22");
  r.e = sid("v31");
  r.direct = q.query(r.s, r.e);
  r.tp = 10'000;
  r.td = 60'000;
  driver d;
  d.loc = sid("vd");
  std::vector<mp_choice> const pairs{{sid("v22"), 0, sid("v31"), 0},
                                     {sid("v32"), 1000, sid("v31"), 0}};
  dead_vertices dv;
  dispatch_stats st;
  auto const got = smdb_insert(d, r, pairs, tables, dv, sp, {1000, 1000}, 0, &st);
  expect(!got && st.drivers_pruned == 1U && st.insertions_tried == 0U,
         "11 > 10 prunes the driver");

  std::string detail = bad.empty() ? "all reproduced" : "mismatch:";
  for (auto const& b : bad) {
    detail += " [" + b + "]";
  }
  verdict(7, bad.empty(), "worked examples: " + detail);
}

struct mean_tally {
  double served = 0.0, cost = 0.0, response = 0.0;
};

void effectiveness_trend(ledger_tally& ledger) {
  auto const t0 = clock_type::now();
  std::vector<policy> const pols{policy::greedy_dp, policy::basic_mp, policy::smdb};
  std::vector<mean_tally> mean(pols.size());
  for (std::size_t s = 1; s <= kTrendSeeds; ++s) {
    auto const inst = make_instance(30U, 2000U, s);
    std::string line = fmt::format("    seed {:2}:", s);
    for (std::size_t p = 0; p != pols.size(); ++p) {
      sim_config c;
      c.pol = pols[p];
      c.fleet = 100U;
      c.seed = s;
      auto const r = run_simulation(inst.a, inst.requests, c);
      ledger.add(r);
      mean[p].served += static_cast<double>(r.m.served) / kTrendSeeds;
      mean[p].cost += static_cast<double>(r.m.unified_cost) / 1e6 / kTrendSeeds;
      mean[p].response += r.m.mean_response_us / kTrendSeeds;
      line += fmt::format(" {} {}/{} UC {:.0f}", to_string(pols[p]), r.m.served,
                          r.m.requests, static_cast<double>(r.m.unified_cost) / 1e6);
    }
    std::printf("%s\n", line.c_str());
  }
  auto const secs = seconds_since(t0);
  auto const& g = mean[0];
  auto const& b = mean[1];
  auto const& m = mean[2];
  for (std::size_t p = 0; p != pols.size(); ++p) {
    std::printf("    mean %-9s served %.1f  UC %.0f s  response %.0f us\n",
                to_string(pols[p]), mean[p].served, mean[p].cost, mean[p].response);
  }
  auto const ok = b.served >= g.served && m.served >= b.served && b.cost <= g.cost &&
                  m.cost <= b.cost && secs < kTrendBudgetSeconds;
  verdict(8, ok,
          fmt::format("effectiveness trend over {} seeds (30x30, 2000 requests, 100 "
                      "drivers): served basic-greedy {:+.1f}, smdb-basic {:+.1f}; UC "
                      "basic-greedy {:+.0f}, smdb-basic {:+.0f}; smdb vs greedy "
                      "{:+.1f}% served, {:+.1f}% UC; {:.0f}s (limit {:.0f}s)",
                      kTrendSeeds, b.served - g.served, m.served - b.served,
                      b.cost - g.cost, m.cost - b.cost,
                      100.0 * (m.served - g.served) / g.served,
                      100.0 * (m.cost - g.cost) / g.cost, secs, kTrendBudgetSeconds));
}

void grid_invariance(ledger_tally& ledger) {
  std::size_t compared = 0U, differing = 0U;
  std::uint64_t with_grid = 0U, without = 0U;
  for (std::size_t s = 1; s <= kGridSeeds; ++s) {
    auto const inst = make_instance(30U, 800U, 200U + s);
    for (auto const pol : {policy::greedy_dp, policy::smdb}) {
      for (auto const density : kGridDensities) {
        sim_config c;
        c.pol = pol;
        c.fleet = 100U;
        c.seed = 200U + s;
        c.grid_density = density;
        c.use_grid = true;
        auto const on = run_simulation(inst.a, inst.requests, c);
        c.use_grid = false;
        auto const off = run_simulation(inst.a, inst.requests, c);
        ledger.add(on);
        ledger.add(off);
        ++compared;
        differing += log_text(inst.a.net, on) == log_text(inst.a.net, off) ? 0U : 1U;
        with_grid += on.stats.drivers_considered;
        without += off.stats.drivers_considered;
      }
    }
  }
  verdict(9, differing == 0U && with_grid < without,
          fmt::format("grid invariance: {} on/off pairs over {} seeds (30x30, 800 "
                      "requests, 100 drivers), {} differ; drivers considered {} with "
                      "grid vs {} without ({:.1f}% pruned)",
                      compared, kGridSeeds, differing, with_grid, without,
                      100.0 * (1.0 - static_cast<double>(with_grid) /
                                         static_cast<double>(without))));
}

}  // namespace

int main() {
  auto const t0 = clock_type::now();
  auto const c = make_corpus();
  query_exactness(c);
  no_detour(c);
  accessibility(c);
  cover_validity(c);
  smd_soundness(c);

  ledger_tally ledger;
  smdb_equals_hsrp(ledger);
  worked_examples();
  effectiveness_trend(ledger);
  grid_invariance(ledger);
  verdict(10, ledger.broken == 0U && ledger.runs > 0U,
          fmt::format("ledger identity: {} runs, {} mismatches", ledger.runs,
                      ledger.broken));

  std::printf("%d of 10 criteria failed, %.0fs total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
