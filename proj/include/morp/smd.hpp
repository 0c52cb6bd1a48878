#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "morp/candidates.hpp"
#include "morp/hmpo.hpp"
#include "morp/query.hpp"

namespace morp {

struct smd_entry {
  vertex_id checker = kNoVertex;
  time_ms smd = kInf;  // kInf: no usable bound for this owner
  std::vector<vertex_id> ne;  // sources exempt from the bound, sorted

  bool valid() const { return checker != kNoVertex && smd != kInf; }
  bool exempt(vertex_id v) const;
};

struct smd_tables {
  std::vector<smd_entry> entries;  // indexed by owner vertex
};

// CC(vc, v) rows for the surrounding core set of one owner.
struct core_cost_table {
  std::vector<vertex_id> vc;
  std::vector<vertex_id> candidates;
  std::vector<std::vector<time_ms>> cc;  // cc[i][j] = SP(vc[i], candidates[j])
};

struct lmd_result {
  std::vector<time_ms> lmd;  // per candidate, kInf when some row misses it
  std::size_t checker = 0U;  // index into candidates
};

// LMD(w) = max over vc of CC(vc,w) - min_v CC(vc,v); the checker minimises
// it, ties by ascending vertex id.
lmd_result local_max_difference(core_cost_table const& t);

core_cost_table gather_core_costs(hmpo_graph const& h, query_engine const& q,
                                  std::vector<vertex_id> const& candidates);

// Effective candidates MC(u) - V_de, in stored order.
std::vector<vertex_id> effective_candidates(candidate_tables const& mc,
                                            hmpo_graph const& h, vertex_id u);

smd_tables hmdg(hmpo_graph const& h, candidate_tables const& mc,
                query_engine const& q);

// checker_distance - smd: a lower bound on SP(source, v) for every candidate.
time_ms bound_other_candidates(smd_tables const& t, vertex_id owner,
                               time_ms checker_distance);

void write_smd(std::ostream& out, road_network const& net, smd_tables const& t);
void write_ne_index(std::ostream& out, road_network const& net,
                    smd_tables const& t);
smd_tables read_smd(std::istream& smd_in, std::istream& ne_in,
                    road_network const& net);

}  // namespace morp
