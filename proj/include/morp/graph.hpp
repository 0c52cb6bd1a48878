#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "morp/types.hpp"

namespace morp {

struct arc {
  vertex_id to;
  time_ms w;
};

struct weighted_edge {
  vertex_id from;
  vertex_id to;
  time_ms w;
};

// Static adjacency in compressed sparse row form. Parallel edges collapse to
// the lightest one and self loops are dropped.
class digraph {
public:
  digraph() = default;
  digraph(std::size_t n, std::vector<weighted_edge> edges);

  std::size_t size() const { return first_.empty() ? 0U : first_.size() - 1U; }
  std::size_t arc_count() const { return arcs_.size(); }

  std::span<arc const> out(vertex_id const v) const {
    return {arcs_.data() + first_[v], arcs_.data() + first_[v + 1]};
  }

  digraph reversed() const;
  std::vector<weighted_edge> edges() const;

  // Weight of the arc u->v or kInf.
  time_ms arc_weight(vertex_id u, vertex_id v) const;

private:
  std::vector<std::uint32_t> first_;
  std::vector<arc> arcs_;
};

// Reusable single-source search state. Labels are reset lazily so repeated
// searches on large graphs only pay for the vertices they touch.
class dijkstra {
public:
  using entry = std::pair<time_ms, vertex_id>;

  explicit dijkstra(std::size_t n = 0U) { resize(n); }

  void resize(std::size_t n);
  void reset();
  // Resets, resizing first when the graph size changed.
  void prepare(std::size_t n) {
    if (n != dist_.size()) {
      resize(n);
    } else {
      reset();
    }
  }

  void add_source(vertex_id v, time_ms d = 0);

  // Pops the next vertex to settle, in (distance, id) order. Returns kNoVertex
  // when the queue is exhausted. The caller relaxes its arcs via relax().
  vertex_id settle_next();
  bool relax(vertex_id v, time_ms d, vertex_id parent);

  time_ms dist(vertex_id v) const { return stamp_[v] == round_ ? dist_[v] : kInf; }
  vertex_id parent(vertex_id v) const {
    return stamp_[v] == round_ ? parent_[v] : kNoVertex;
  }
  bool settled(vertex_id v) const { return stamp_[v] == round_ && done_[v]; }
  time_ms top_dist() const { return pq_.empty() ? kInf : pq_.top().first; }
  std::vector<vertex_id> const& touched() const { return touched_; }

  // Full search over g from the current sources, skipping vertices for which
  // blocked(v) is true, stopping once the frontier exceeds limit.
  template <typename Blocked>
  void run(digraph const& g, Blocked&& blocked, time_ms limit = kInf) {
    while (top_dist() <= limit) {
      auto const u = settle_next();
      if (u == kNoVertex) {
        break;
      }
      auto const du = dist_[u];
      for (auto const& a : g.out(u)) {
        if (!blocked(a.to) && du + a.w <= limit) {
          relax(a.to, du + a.w, u);
        }
      }
    }
  }

  void run(digraph const& g, time_ms limit = kInf) {
    run(g, [](vertex_id) { return false; }, limit);
  }

private:
  void touch(vertex_id v);

  std::vector<time_ms> dist_;
  std::vector<vertex_id> parent_;
  std::vector<std::uint32_t> stamp_;
  std::vector<char> done_;
  std::vector<vertex_id> touched_;
  std::uint32_t round_ = 1U;
  std::priority_queue<entry, std::vector<entry>, std::greater<>> pq_;
};

}  // namespace morp
