#pragma once

#include "morp/hmpo.hpp"
#include "oracles.hpp"

namespace fixture {

// Six-vertex bimodal example. With n_r = 3, α = β = 1, d_m = 30 s,
// thr = 15 s and nc_m = 3 it reproduces the published candidate sets,
// DVS outcome, serving sets, partial cover and super-edges.
inline morp::road_network worked_example() {
  using oracle::edge_spec;
  return oracle::build(
      {"A", "B", "C", "D", "E", "F"},
      {
          // foot
          {"A", "B", false, 15}, {"B", "C", false, 15}, {"A", "D", false, 10},
          {"D", "E", false, 10}, {"C", "F", false, 10}, {"E", "F", false, 10},
          // car
          {"A", "B", true, 1}, {"B", "A", true, 5}, {"C", "B", true, 9},
          {"B", "C", true, 4}, {"E", "B", true, 8}, {"B", "E", true, 9},
          {"D", "A", true, 7}, {"D", "E", true, 5}, {"D", "C", true, 3},
          {"A", "F", true, 8}, {"C", "F", true, 9}, {"E", "F", true, 4},
      });
}

inline morp::candidate_params worked_params() {
  morp::candidate_params p;
  p.d_m = 30'000;
  p.thr_cs = 15'000;
  p.nc_m = 3U;
  return p;
}

// Small two-level neighbourhood around a rider at v22 whose candidates are
// v22 and v32. Cores: v21, v23, v31, v42. A driver at vd reaches the
// neighbourhood through v23 after 10 s. v32 is declared before v22 so the
// LMD tie between the two candidates resolves to v32.
struct smd_case {
  morp::road_network net;
  morp::hmpo_graph h;
  morp::candidate_tables mc;
};

inline smd_case smd_example() {
  using oracle::edge_spec;
  std::vector<edge_spec> e;
  auto const both = [&](char const* a, char const* b, double s) {
    e.push_back({a, b, true, s});
    e.push_back({b, a, true, s});
  };
  both("v21", "v22", 1);
  both("v22", "v23", 1);
  both("v22", "v32", 1);
  both("v31", "v32", 1);
  both("v32", "v42", 1);
  both("vd", "x1", 5);
  both("x1", "v23", 5);
  smd_case c;
  c.net = oracle::build({"v21", "v23", "v31", "v32", "v42", "v22", "vd", "x1"}, e);
  std::vector<char> core(c.net.size(), 0);
  for (auto const* n : {"v21", "v23", "v31", "v42"}) {
    core[c.net.id(n)] = 1;
  }
  morp::pruned_graph base{c.net, std::vector<char>(c.net.size(), 0)};
  c.h = morp::build_super_edges(std::move(base), core, 3U);
  c.mc.mc.resize(c.net.size());
  auto const v22 = c.net.id("v22");
  auto const v32 = c.net.id("v32");
  c.mc.mc[v22] = {{v22, 0, 0}, {v32, 1000, 1}};
  for (auto v = morp::vertex_id{0}; v != c.net.size(); ++v) {
    if (v != v22) {
      c.mc.mc[v] = {{v, 0, 0}};
    }
  }
  return c;
}

}  // namespace fixture
