#include "morp/query.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace morp {

std::optional<time_ms> lru_cache::get(vertex_id const from, vertex_id const to) {
  if (capacity_ == 0U) {
    return std::nullopt;
  }
  std::lock_guard lock{mutex_};
  auto const it = map_.find(make_key(from, to));
  if (it == map_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void lru_cache::put(vertex_id const from, vertex_id const to,
                    time_ms const value) {
  if (capacity_ == 0U) {
    return;
  }
  std::lock_guard lock{mutex_};
  auto const k = make_key(from, to);
  if (auto const it = map_.find(k); it != map_.end()) {
    it->second->second = value;
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(k, value);
  map_.emplace(k, order_.begin());
  if (map_.size() > capacity_) {
    map_.erase(order_.back().first);
    order_.pop_back();
  }
}

std::size_t lru_cache::size() const {
  std::lock_guard lock{mutex_};
  return map_.size();
}

query_engine::query_engine(hmpo_graph const& h, std::size_t const cache_capacity)
    : h_{h}, cache_{cache_capacity} {}

time_ms query_engine::query(vertex_id const u, vertex_id const v) const {
  if (auto const hit = cache_.get(u, v)) {
    return *hit;
  }
  auto const d = search(u, v, false).cost;
  cache_.put(u, v, d);
  return d;
}

route_skeleton query_engine::query_route(vertex_id const u,
                                         vertex_id const v) const {
  return search(u, v, true);
}

route_skeleton query_engine::search(vertex_id const u, vertex_id const v,
                                    bool const want_path) const {
  auto const n = h_.size();
  for (auto const x : {u, v}) {
    if (x >= n) {
      throw std::domain_error{"unknown vertex " + std::to_string(x)};
    }
    if (h_.is_defective(x)) {
      throw std::domain_error{"defective vertex " + std::to_string(x) +
                              " cannot be routed to"};
    }
  }
  route_skeleton r;
  if (u == v) {
    r.cost = 0;
    r.vertices = {u};
    return r;
  }

  auto const u_core = h_.is_core(u);
  auto const v_core = h_.is_core(v);

  // A direct sub-to-sub super-edge is a candidate answer on its own.
  if (!u_core && !v_core) {
    if (auto const w = h_.ss.arc_weight(u, v); w != kInf) {
      r.cost = w;
      r.vertices = {u, v};
    }
  }

  thread_local dijkstra d;
  d.prepare(n);
  if (u_core) {
    d.add_source(u, 0);
  } else {
    for (auto const& a : h_.sc.out(u)) {
      d.add_source(a.to, a.w);
    }
  }

  auto best_core = kNoVertex;
  auto best = r.cost;
  while (d.top_dist() < best) {
    auto const c = d.settle_next();
    if (c == kNoVertex) {
      break;
    }
    auto const dc = d.dist(c);
    if (v_core) {
      if (c == v) {
        best = dc;
        best_core = c;
        break;
      }
    } else if (auto const tail = h_.cs_in.arc_weight(v, c); tail != kInf) {
      if (dc + tail < best) {
        best = dc + tail;
        best_core = c;
      }
    }
    for (auto const& a : h_.cc.out(c)) {
      d.relax(a.to, dc + a.w, c);
    }
  }

  if (best_core == kNoVertex) {
    return r;
  }
  r.cost = best;
  if (want_path) {
    r.vertices.clear();
    for (auto c = best_core; c != kNoVertex; c = d.parent(c)) {
      r.vertices.push_back(c);
    }
    if (!u_core) {
      r.vertices.push_back(u);
    }
    std::reverse(r.vertices.begin(), r.vertices.end());
    if (!v_core) {
      r.vertices.push_back(v);
    }
  }
  return r;
}

}  // namespace morp
