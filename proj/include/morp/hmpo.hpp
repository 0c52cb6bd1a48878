#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "morp/candidates.hpp"
#include "morp/graph.hpp"
#include "morp/road_network.hpp"

namespace morp {

enum class level : std::uint8_t { core, sub, defective };

char const* to_string(level l);

// --- defective vertex selection -------------------------------------------

enum class dvs_outcome : std::uint8_t {
  defective,     // removed with zero detour
  reserved,      // a candidate of an earlier defective vertex
  no_candidate,  // removal would leave the vertex without an MP
  detour         // some two-hop path through it has no equal alternative
};

struct dvs_round {
  vertex_id v;
  dvs_outcome outcome;
};

struct dvs_result {
  std::vector<char> defective;    // mask over all vertices
  std::vector<dvs_round> rounds;  // processing order
  std::vector<vertex_id> members() const;
};

dvs_result select_defective(road_network const& net,
                            convenience_tables const& conv,
                            candidate_tables const& mc);

// --- pruned car graph G_c - V_de --------------------------------------------

struct pruned_graph {
  pruned_graph() = default;
  pruned_graph(road_network const& net, std::vector<char> const& defective);

  std::size_t size() const { return alive.size(); }
  std::vector<char> alive;
  digraph fwd;
  digraph bwd;
};

// --- serving sets and partial set cover --------------------------------------

struct serving_sets {
  // ms[u] = {v : u ∈ MC(v)} for non-defective u, sorted; empty otherwise.
  std::vector<std::vector<vertex_id>> ms;
};

serving_sets build_serving_sets(candidate_tables const& mc,
                                std::vector<char> const& defective);

inline constexpr std::size_t kInfCount = std::numeric_limits<std::size_t>::max();

struct set_cover_result {
  std::vector<vertex_id> cover;  // sorted
  std::vector<std::size_t> cost;  // per vertex, kInfCount when never feasible
  std::size_t need = 0U;          // elements that must be covered
};

// Primal-dual partial set cover with unit prices (Gandhi et al.), trying
// every set as the highest-weight member. order_weight ranks the sets.
set_cover_result partial_set_cover(serving_sets const& ms,
                                   std::vector<char> const& universe,
                                   double epsilon,
                                   std::vector<time_ms> const& order_weight);

std::size_t required_coverage(std::size_t universe_size, double epsilon);
std::size_t covered_count(serving_sets const& ms,
                          std::vector<char> const& universe,
                          std::vector<char> const& chosen);

// --- k-skip cover -------------------------------------------------------------

// True iff every shortest path of exactly k vertices in g contains a vertex
// of cover. Exhaustive over all start vertices.
bool is_k_skip_cover(pruned_graph const& g, std::vector<char> const& cover,
                     unsigned k);

struct sampled_check {
  bool ok = true;
  bool sampled = false;
  std::size_t sources_checked = 0U;
};

// Same test restricted to `samples` random start vertices when the graph has
// more than that many vertices.
sampled_check check_k_skip_cover(pruned_graph const& g,
                                 std::vector<char> const& cover, unsigned k,
                                 std::size_t samples, std::uint64_t seed);

std::vector<char> complete_k_skip(pruned_graph const& g,
                                  std::vector<vertex_id> const& seed_cover,
                                  std::vector<std::size_t> const& cost,
                                  unsigned k, double epsilon,
                                  serving_sets const& ms,
                                  std::vector<char> const& universe);

// max((N/k)·ln(N/k), nc_m·|seed|)
double core_size_bound(std::size_t n, unsigned k, unsigned nc_m,
                       std::size_t seed_size);

// --- super-edges ----------------------------------------------------------------

struct super_edge {
  vertex_id from;
  vertex_id to;
  time_ms cost;
  friend bool operator==(super_edge const&, super_edge const&) = default;
};

struct hmpo_graph {
  unsigned k = 0U;
  std::vector<level> levels;
  std::vector<super_edge> e_cc, e_cs, e_sc, e_ss;
  pruned_graph base;

  // Adjacency views built by index().
  digraph cc;     // core -> core
  digraph sc;     // sub -> core
  digraph cs_in;  // sub <- core, stored reversed (arc to the core source)
  digraph ss;     // sub -> sub
  // Reversed views, arcs pointing back to the super-edge source.
  digraph cc_in, sc_in, ss_in;

  std::size_t size() const { return levels.size(); }
  bool is_core(vertex_id v) const { return levels[v] == level::core; }
  bool is_defective(vertex_id v) const { return levels[v] == level::defective; }
  void index();
};

hmpo_graph build_super_edges(pruned_graph base, std::vector<char> const& v_co,
                             unsigned k);

// Tracks, for a Dijkstra search from s, the largest number of vertices on a
// shortest path to each vertex whose vertices before it are all passable
// (s always is). Zero marks vertices reachable only through blocked ones.
class clean_search {
public:
  void prepare(std::size_t n);

  // on_settle(v, dist, hops) returns false to abort the search.
  template <typename Passable, typename OnSettle>
  void run(digraph const& g, vertex_id s, Passable&& passable,
           OnSettle&& on_settle);

  time_ms dist(vertex_id v) const { return stamp_[v] == round_ ? dist_[v] : kInf; }
  std::uint32_t hops(vertex_id v) const {
    return stamp_[v] == round_ ? hops_[v] : 0U;
  }

private:
  void touch(vertex_id v);

  std::vector<time_ms> dist_;
  std::vector<std::uint32_t> hops_;
  std::vector<std::uint32_t> stamp_;
  std::vector<char> done_;
  std::uint32_t round_ = 0U;
  std::vector<std::pair<time_ms, vertex_id>> heap_;
};

}  // namespace morp

#include "morp/clean_search_impl.hpp"
