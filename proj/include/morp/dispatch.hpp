#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "morp/candidates.hpp"
#include "morp/hmpo.hpp"
#include "morp/query.hpp"
#include "morp/road_network.hpp"
#include "morp/smd.hpp"

namespace morp {

enum class policy { greedy_dp, basic_mp, fs, hsrp, smdb };

char const* to_string(policy p);
policy parse_policy(std::string_view s);
bool uses_hmpo(policy p);

struct cost_weights {
  std::int64_t alpha_milli = 1000;
  std::int64_t beta_milli = 1000;
};

struct request {
  std::string id;
  vertex_id s = kNoVertex, e = kNoVertex;
  time_ms tr = 0, tp = 0, td = 0;
  time_ms direct = 0;  // SP_c(s, e)
  cost_t penalty = 0;
  int demand = 1;
  bool no_walk = false;
};

enum class stop_kind : std::uint8_t { pickup, dropoff };

struct stop {
  vertex_id v;
  stop_kind kind;
  std::size_t request;  // index into the simulation's request list
  time_ms ready;        // earliest departure (pickups wait for the rider)
  time_ms latest;       // pickup: tp; dropoff: td - wd
  int load_delta;
};

// Remaining stations of a driver with their derived schedule.
struct route {
  std::vector<stop> stops;
  std::vector<time_ms> arr, dep;
  std::vector<int> load;  // onboard after each stop
};

struct driver {
  std::uint32_t id = 0U;
  vertex_id loc = kNoVertex;  // last station reached
  time_ms anchor = 0;         // departure time from loc
  int capacity = 3;
  int onboard = 0;
  route plan;
  std::vector<std::size_t> served;
  std::vector<vertex_id> trail;  // every vertex visited, starting position first

  // Time the vehicle can leave loc: idle vehicles are available from now.
  time_ms start_time(time_ms now) const {
    return plan.stops.empty() ? std::max(anchor, now) : anchor;
  }
};

// Point-to-point car travel times used during dispatch.
class distance_oracle {
public:
  virtual ~distance_oracle() = default;
  virtual time_ms operator()(vertex_id from, vertex_id to) const = 0;
};

// Plain Dijkstra on the full car graph behind an LRU cache.
class car_oracle final : public distance_oracle {
public:
  explicit car_oracle(road_network const& net,
                      std::size_t cache_capacity = kDefaultCacheCapacity)
      : net_{net}, cache_{cache_capacity} {}
  time_ms operator()(vertex_id from, vertex_id to) const override;

private:
  road_network const& net_;
  mutable lru_cache cache_;
};

class hmpo_oracle final : public distance_oracle {
public:
  explicit hmpo_oracle(query_engine const& q) : q_{q} {}
  time_ms operator()(vertex_id from, vertex_id to) const override {
    return q_.query(from, to);
  }

private:
  query_engine const& q_;
};

// Answers every query that starts or ends at one of a few prepared
// vertices from full one-to-all searches; everything else goes to the
// fallback. Within one request all insertion probes touch a meeting point,
// so a handful of searches replaces thousands of point queries.
class endpoint_table final : public distance_oracle {
public:
  endpoint_table(distance_oracle const& fallback, digraph const& fwd,
                 digraph const& bwd)
      : fallback_{fallback}, fwd_{fwd}, bwd_{bwd} {}

  void prepare(std::vector<vertex_id> const& vertices);
  time_ms operator()(vertex_id from, vertex_id to) const override;

private:
  void fill(digraph const& g, vertex_id s, std::vector<time_ms>& out);

  distance_oracle const& fallback_;
  digraph const& fwd_;
  digraph const& bwd_;
  dijkstra search_;
  std::unordered_map<vertex_id, std::vector<time_ms>> to_, from_;
};

// Recomputes arr/dep/load of d.plan starting from d.start_time(now).
void reschedule(driver& d, time_ms now, distance_oracle const& sp);

time_ms route_duration(driver const& d, distance_oracle const& sp);

struct mp_choice {
  vertex_id pi;
  time_ms wp;
  vertex_id de;
  time_ms wd;
};

struct insertion {
  cost_t delta = 0;
  time_ms added_drive = 0;
  std::size_t pickup_after = 0U;   // 0 = straight from the current location
  std::size_t dropoff_after = 0U;  // station index in the original route;
                                   // equal to pickup_after for back-to-back
};

// Best feasible insertion of (pi, de) with pickup_after <= max_pickup_after.
std::optional<insertion> try_insert(driver const& d, request const& r,
                                    mp_choice const& mp,
                                    std::size_t max_pickup_after, time_ms now,
                                    distance_oracle const& sp, cost_weights w);

// Applies an insertion and reschedules.
void apply_insertion(driver& d, request const& r, std::size_t request_index,
                     mp_choice const& mp, insertion const& ins, time_ms now,
                     distance_oracle const& sp);

// Independent feasibility check of a driver's remaining plan.
bool route_feasible(driver const& d, time_ms now, distance_oracle const& sp,
                    std::string* why = nullptr);

struct dispatch_context {
  road_network const& net;
  candidate_tables const* mc = nullptr;
  hmpo_graph const* hmpo = nullptr;
  smd_tables const* smd = nullptr;
  distance_oracle const& sp;
  cost_weights w;
};

struct decision {
  bool assigned = false;
  std::size_t driver = 0U;  // index into the fleet
  mp_choice mp{};
  insertion ins{};
};

struct dispatch_stats {
  std::uint64_t drivers_considered = 0U;
  std::uint64_t drivers_pruned = 0U;
  std::uint64_t pickups_pruned = 0U;
  std::uint64_t insertions_tried = 0U;
};

// Candidate meeting-point pairs for a policy, in evaluation order.
std::vector<mp_choice> candidate_pairs(policy p, dispatch_context const& ctx,
                                       request const& r);

// Evaluates one request against the listed drivers (ascending id order).
decision assign(policy p, dispatch_context const& ctx,
                std::vector<driver> const& fleet,
                std::vector<std::size_t> const& drivers, request const& r,
                time_ms now, dispatch_stats* stats = nullptr);

// Dead vertices for one request: a vertex is dead for drivers whose start
// time there is at or after the recorded time.
class dead_vertices {
public:
  bool dead(vertex_id v, time_ms start) const;
  void mark(vertex_id v, time_ms start);
  std::size_t size() const { return dv_.size(); }

private:
  std::unordered_map<vertex_id, time_ms> dv_;
};

// SMDBoost for one driver: returns the best insertion over pairs, or none.
std::optional<std::pair<mp_choice, insertion>> smdb_insert(
    driver const& d, request const& r, std::vector<mp_choice> const& pairs,
    smd_tables const& smd, dead_vertices& dv, distance_oracle const& sp,
    cost_weights w, time_ms now, dispatch_stats* stats = nullptr);

}  // namespace morp
