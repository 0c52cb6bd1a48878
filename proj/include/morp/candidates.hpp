#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "morp/road_network.hpp"
#include "morp/types.hpp"

namespace morp {

// ECO/ECI per vertex. Sums over the n_r reference vertices are kept exactly;
// the means are derived on demand.
struct convenience_tables {
  unsigned n_r = 0U;
  std::vector<time_ms> eco_sum;  // kInf on deficit
  std::vector<time_ms> eci_sum;

  double eco(vertex_id v) const;  // seconds, +inf on deficit
  double eci(vertex_id v) const;
  // eco_sum + eci_sum, kInf if either is infinite.
  time_ms ec_sum(vertex_id v) const { return add_dist(eco_sum[v], eci_sum[v]); }
};

convenience_tables compute_convenience(road_network const& net, unsigned n_r);

// Serving-cost scores are compared in exact integer units of
// milliseconds x thousandths x n_r, so that β·walk + α·(ECI+ECO) never rounds.
using score_t = std::int64_t;
inline constexpr score_t kInfScore = kInf;

score_t scs_units(time_ms walk, time_ms ec_sum, unsigned n_r,
                  std::int64_t alpha_milli, std::int64_t beta_milli);

// β·walk + α·(eci(v)+eco(v)) in seconds; +inf propagates.
double serving_cost_score(vertex_id v, time_ms walk,
                          convenience_tables const& conv, double alpha,
                          double beta);

struct candidate {
  vertex_id v;
  time_ms walk;
  score_t score;
};

struct candidate_params {
  time_ms d_m = 240'000;
  time_ms thr_cs = 100'000;
  unsigned nc_m = 2U;
  std::int64_t alpha_milli = 1000;
  std::int64_t beta_milli = 1000;
};

struct candidate_tables {
  candidate_params params;
  // Indexed by vertex, ordered by nondecreasing score then id. Empty for
  // vertices outside V_p.
  std::vector<std::vector<candidate>> mc;

  bool contains(vertex_id owner, vertex_id v) const;
};

candidate_tables select_candidates(road_network const& net,
                                   convenience_tables const& conv,
                                   candidate_params const& params);

void write_convenience(std::ostream& out, road_network const& net,
                       convenience_tables const& conv);
convenience_tables read_convenience(std::istream& in, road_network const& net,
                                    unsigned n_r);

// One line per owner: `vertex;cand1:walk1,cand2:walk2,...`.
void write_candidates(std::ostream& out, road_network const& net,
                      candidate_tables const& t);
candidate_tables read_candidates(std::istream& in, road_network const& net,
                                 convenience_tables const& conv,
                                 candidate_params const& params);

}  // namespace morp
