#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "morp/candidates.hpp"
#include "morp/dispatch.hpp"
#include "morp/hmpo.hpp"
#include "morp/road_network.hpp"
#include "morp/smd.hpp"

namespace morp {

// --- preprocessing -----------------------------------------------------------

struct prep_params {
  unsigned n_r = 100U;
  candidate_params candidates{};
  double epsilon = 0.8;
  unsigned k = 10U;
};

struct artifacts {
  road_network net;
  prep_params params;
  convenience_tables conv;
  candidate_tables mc;
  dvs_result dvs;
  serving_sets ms;
  set_cover_result cover;
  std::vector<char> v_co;
  hmpo_graph hmpo;
  smd_tables smd;
};

artifacts preprocess(road_network net, prep_params const& params);

// Writes the bundle; nodes/edges are copied in so the directory is
// self-contained. Checksums of the two inputs go into the manifest.
void write_artifacts(std::string const& dir, artifacts const& a,
                     std::string const& nodes_path,
                     std::string const& edges_path);
artifacts read_artifacts(std::string const& dir);

void write_network(std::ostream& nodes, std::ostream& edges,
                   road_network const& net);

// --- requests ----------------------------------------------------------------

struct request_spec {
  std::string id;
  time_ms release = 0;
  vertex_id s = kNoVertex, e = kNoVertex;
  int demand = 1;
  bool no_walk = false;
};

std::vector<request_spec> read_requests(std::istream& in,
                                        road_network const& net);
void write_requests(std::ostream& out, road_network const& net,
                    std::vector<request_spec> const& rs);

struct sim_config {
  policy pol = policy::smdb;
  std::int64_t alpha_milli = 1000;
  std::int64_t beta_milli = 1000;
  std::int64_t p_o_milli = 30'000;
  std::int64_t e_r_milli = 300;
  std::size_t fleet = 20'000U;
  int capacity = 3;
  double grid_density = 50.0;
  bool use_grid = true;
  std::uint64_t seed = 1U;
  std::size_t cache_capacity = kDefaultCacheCapacity;
  // Per-request one-to-all searches from the meeting points instead of
  // point-to-point queries. Same answers, far fewer searches.
  bool one_to_many = true;
};

// Applies `key = value` lines; unknown keys raise config_error.
void apply_config_text(sim_config& c, prep_params* p, std::istream& in);

// Deadlines and penalty from SP_c(s,e). Returns nullopt for s = e or an
// unreachable pair.
std::optional<request> derive_deadlines(request_spec const& spec,
                                        road_network const& net,
                                        sim_config const& c);

// Retires every station with arrival <= t, moving the driver there.
// Returns the number of retired stations.
std::size_t advance_driver(driver& d, time_ms t,
                           std::vector<request> const& requests,
                           std::vector<char>* delivered = nullptr);

// --- grid index ----------------------------------------------------------------

class grid_index {
public:
  grid_index(road_network const& net, double density);

  void insert(std::size_t driver, vertex_id at);
  void move(std::size_t driver, vertex_id from, vertex_id to);

  // Drivers in expanding ring order around src, stopping once the rings left
  // are farther than radius_m.
  std::vector<std::size_t> around(vertex_id src, double radius_m) const;

  // Upper bound on car speed in metres per millisecond.
  double max_speed() const { return max_speed_; }

private:
  using cell = std::pair<std::int64_t, std::int64_t>;
  cell cell_of(vertex_id v) const;
  static std::uint64_t key(cell c);

  road_network const& net_;
  double density_;
  double cell_min_m_;
  double max_speed_ = 0.0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
  std::int64_t min_x_ = 0, max_x_ = -1, min_y_ = 0, max_y_ = -1;
};

// --- simulation ------------------------------------------------------------------

struct metrics {
  std::size_t requests = 0U;
  std::size_t served = 0U;
  std::size_t rejected = 0U;
  std::size_t dropped = 0U;  // s = e or unreachable
  cost_t unified_cost = 0;   // accumulated while assigning
  cost_t drive_cost = 0, walk_cost = 0, penalty_cost = 0;
  cost_t recomputed_cost = 0;  // from the final itineraries
  double mean_response_us = 0.0;
};

struct log_row {
  std::string request_id;
  bool assigned = false;
  std::uint32_t driver_id = 0U;
  vertex_id pi = kNoVertex, de = kNoVertex;
  cost_t delta = 0;
  time_ms wp = 0, wd = 0;
  std::int64_t eval_micros = 0;
};

struct sim_result {
  metrics m;
  std::vector<log_row> log;
  std::vector<driver> fleet;
  std::vector<request> requests;
  dispatch_stats stats;
};

// Initial driver positions, drawn uniformly from V_c (skipping defective
// vertices for HMPO policies) with the run seed.
std::vector<vertex_id> place_drivers(artifacts const& a, policy p,
                                     std::size_t count, std::uint64_t seed);

sim_result run_simulation(artifacts const& a,
                          std::vector<request_spec> const& stream,
                          sim_config const& c);

// Recomputes unified cost from itineraries, walks and rejections alone.
cost_t recompute_unified_cost(artifacts const& a, sim_result const& r,
                              sim_config const& c);

void write_log(std::ostream& out, road_network const& net,
               std::vector<log_row> const& log, bool include_timing);
void write_metrics(std::ostream& out, sim_config const& c, metrics const& m,
                   std::string const& label);

// Merges metrics files into one comparison table keyed by policy and the
// single parameter that varies between runs.
void report(std::vector<std::string> const& metrics_files, std::ostream& out);

}  // namespace morp
