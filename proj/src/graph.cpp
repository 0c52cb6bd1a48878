#include "morp/graph.hpp"

#include <algorithm>

namespace morp {

digraph::digraph(std::size_t const n, std::vector<weighted_edge> edges) {
  std::erase_if(edges, [](weighted_edge const& e) { return e.from == e.to; });
  std::sort(edges.begin(), edges.end(), [](auto const& a, auto const& b) {
    return std::tie(a.from, a.to, a.w) < std::tie(b.from, b.to, b.w);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](auto const& a, auto const& b) {
                            return a.from == b.from && a.to == b.to;
                          }),
              edges.end());

  first_.assign(n + 1U, 0U);
  for (auto const& e : edges) {
    ++first_[e.from + 1U];
  }
  for (auto i = 0U; i != n; ++i) {
    first_[i + 1U] += first_[i];
  }
  arcs_.reserve(edges.size());
  for (auto const& e : edges) {
    arcs_.push_back({e.to, e.w});
  }
}

digraph digraph::reversed() const {
  auto es = edges();
  for (auto& e : es) {
    std::swap(e.from, e.to);
  }
  return {size(), std::move(es)};
}

std::vector<weighted_edge> digraph::edges() const {
  std::vector<weighted_edge> es;
  es.reserve(arcs_.size());
  for (auto v = vertex_id{0}; v != size(); ++v) {
    for (auto const& a : out(v)) {
      es.push_back({v, a.to, a.w});
    }
  }
  return es;
}

time_ms digraph::arc_weight(vertex_id const u, vertex_id const v) const {
  auto const adj = out(u);
  auto const it = std::lower_bound(
      adj.begin(), adj.end(), v,
      [](arc const& a, vertex_id const x) { return a.to < x; });
  return (it != adj.end() && it->to == v) ? it->w : kInf;
}

void dijkstra::resize(std::size_t const n) {
  dist_.assign(n, kInf);
  parent_.assign(n, kNoVertex);
  stamp_.assign(n, 0U);
  done_.assign(n, 0);
  touched_.clear();
  round_ = 1U;
  pq_ = {};
}

void dijkstra::reset() {
  touched_.clear();
  pq_ = {};
  if (++round_ == 0U) {
    std::fill(stamp_.begin(), stamp_.end(), 0U);
    round_ = 1U;
  }
}

void dijkstra::touch(vertex_id const v) {
  if (stamp_[v] != round_) {
    stamp_[v] = round_;
    dist_[v] = kInf;
    parent_[v] = kNoVertex;
    done_[v] = 0;
    touched_.push_back(v);
  }
}

void dijkstra::add_source(vertex_id const v, time_ms const d) {
  relax(v, d, kNoVertex);
}

bool dijkstra::relax(vertex_id const v, time_ms const d, vertex_id const parent) {
  touch(v);
  if (done_[v] || d >= dist_[v]) {
    return false;
  }
  dist_[v] = d;
  parent_[v] = parent;
  pq_.emplace(d, v);
  return true;
}

vertex_id dijkstra::settle_next() {
  while (!pq_.empty()) {
    auto const [d, v] = pq_.top();
    pq_.pop();
    if (done_[v] || d != dist_[v]) {
      continue;
    }
    done_[v] = 1;
    return v;
  }
  return kNoVertex;
}

}  // namespace morp
