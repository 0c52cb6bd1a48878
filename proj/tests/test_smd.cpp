#include <doctest.h>

#include <sstream>

#include "morp/smd.hpp"
#include "morp/sim.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace morp;

TEST_CASE("local max difference from a core cost table") {
  // Rows v31, v42, v21, v23 against candidates v22, v32.
  core_cost_table t;
  t.candidates = {5, 3};
  t.vc = {2, 4, 0, 1};
  t.cc = {{2000, 1000}, {2000, 1000}, {1000, 2000}, {1000, 2000}};
  auto const r = local_max_difference(t);
  CHECK(r.lmd[0] == 1000);
  CHECK(r.lmd[1] == 1000);
  CHECK(t.candidates[r.checker] == 3U);  // the tie goes to the lower id

  core_cost_table miss = t;
  miss.cc[0][0] = kInf;
  auto const m = local_max_difference(miss);
  CHECK(m.lmd[0] == kInf);
  CHECK(t.candidates[m.checker] == 3U);
}

TEST_CASE("the surrounding-core example") {
  auto const c = fixture::smd_example();
  query_engine const q{c.h};
  auto const id = [&](char const* n) { return c.net.id(n); };
  auto const tables = hmdg(c.h, c.mc, q);
  auto const& e = tables.entries[id("v22")];

  auto const cc = gather_core_costs(c.h, q, {id("v22"), id("v32")});
  std::vector<vertex_id> want_vc{id("v21"), id("v23"), id("v31"), id("v42")};
  std::sort(want_vc.begin(), want_vc.end());
  CHECK(cc.vc == want_vc);
  // CC(vc, v32) - CC(vc, v22): -1 for v31 and v42, +1 for v21 and v23.
  for (auto i = 0U; i != cc.vc.size(); ++i) {
    auto const diff = cc.cc[i][1] - cc.cc[i][0];
    auto const near32 = cc.vc[i] == id("v31") || cc.vc[i] == id("v42");
    CHECK(diff == (near32 ? -1000 : 1000));
  }

  CHECK(e.checker == id("v32"));
  CHECK(e.smd == 1000);
  CHECK(e.exempt(id("v22")));
  CHECK_FALSE(e.exempt(id("vd")));

  auto const ch = q.query(id("vd"), id("v32"));
  CHECK(ch == 12'000);
  CHECK(bound_other_candidates(tables, id("v22"), ch) == 11'000);
  CHECK(q.query(id("vd"), id("v22")) >= 11'000);

  // Single-candidate owners: the candidate is its own checker.
  auto const& solo = tables.entries[id("v31")];
  CHECK(solo.checker == id("v31"));
  CHECK(solo.smd == 0);
  CHECK(bound_other_candidates(tables, id("v31"), 7000) == 7000);
}

TEST_CASE("smd file round trip") {
  auto const c = fixture::smd_example();
  query_engine const q{c.h};
  auto const t = hmdg(c.h, c.mc, q);
  std::stringstream s, ne;
  write_smd(s, c.net, t);
  write_ne_index(ne, c.net, t);
  auto const back = read_smd(s, ne, c.net);
  REQUIRE(back.entries.size() == t.entries.size());
  for (auto i = 0U; i != t.entries.size(); ++i) {
    CHECK(back.entries[i].checker == t.entries[i].checker);
    CHECK(back.entries[i].smd == t.entries[i].smd);
    CHECK(back.entries[i].ne == t.entries[i].ne);
  }
}

TEST_CASE("soundness and checker optimality on random graphs") {
  std::mt19937_64 rng{17};
  std::size_t checked = 0U;
  for (auto iter = 0; iter != 40; ++iter) {
    oracle::random_params rp;
    rp.n = 25U + iter;
    rp.tie_weights = iter % 3 == 0;
    prep_params pp;
    pp.n_r = 3;
    pp.k = 2U + iter % 3U;
    pp.candidates.d_m = 80'000;
    pp.candidates.thr_cs = 30'000;
    pp.candidates.nc_m = 3U + iter % 2U;
    std::optional<artifacts> a;
    while (!a) {
      try {
        a = preprocess(oracle::random_network(rng, rp), pp);
      } catch (construction_error const&) {
      }
    }
    auto const& h = a->hmpo;
    auto const d = oracle::car_matrix(a->net, a->dvs.defective);
    query_engine const q{h};
    for (vertex_id u = 0; u != h.size(); ++u) {
      auto const& e = a->smd.entries[u];
      auto const cands = effective_candidates(a->mc, h, u);
      if (cands.size() == 1U) {
        CHECK(e.smd == 0);
      }
      if (!e.valid()) {
        continue;
      }
      for (vertex_id s = 0; s != h.size(); ++s) {
        if (h.is_defective(s) || !a->net.in_car(s) || e.exempt(s)) {
          continue;
        }
        auto const lb = bound_other_candidates(a->smd, u, d[s][e.checker]);
        for (auto const v : cands) {
          ++checked;
          REQUIRE(lb <= d[s][v]);
        }
      }
      if (cands.size() > 1U) {
        auto const lmd = local_max_difference(gather_core_costs(h, q, cands));
        for (auto const x : lmd.lmd) {
          CHECK(e.smd <= x);
        }
      }
    }
  }
  CHECK(checked > 1000U);
}
