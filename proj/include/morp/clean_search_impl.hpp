#pragma once

#include <algorithm>
#include <functional>

namespace morp {

inline void clean_search::prepare(std::size_t const n) {
  if (dist_.size() != n) {
    dist_.assign(n, kInf);
    hops_.assign(n, 0U);
    stamp_.assign(n, 0U);
    done_.assign(n, 0);
    round_ = 0U;
  }
  if (++round_ == 0U) {
    std::fill(stamp_.begin(), stamp_.end(), 0U);
    round_ = 1U;
  }
  heap_.clear();
}

inline void clean_search::touch(vertex_id const v) {
  if (stamp_[v] != round_) {
    stamp_[v] = round_;
    dist_[v] = kInf;
    hops_[v] = 0U;
    done_[v] = 0;
  }
}

template <typename Passable, typename OnSettle>
void clean_search::run(digraph const& g, vertex_id const s,
                       Passable&& passable, OnSettle&& on_settle) {
  prepare(g.size());
  auto const cmp = std::greater<>{};
  touch(s);
  dist_[s] = 0;
  hops_[s] = 1U;
  heap_.emplace_back(0, s);
  std::size_t open_clean = 1U;

  while (!heap_.empty() && open_clean != 0U) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    auto const [d, u] = heap_.back();
    heap_.pop_back();
    if (done_[u] || d != dist_[u]) {
      continue;
    }
    done_[u] = 1;
    auto const hu = hops_[u];
    if (hu != 0U) {
      --open_clean;
    }
    if (!on_settle(u, d, hu)) {
      return;
    }
    auto const carry = (hu != 0U && (u == s || passable(u))) ? hu + 1U : 0U;
    for (auto const& a : g.out(u)) {
      auto const v = a.to;
      touch(v);
      if (done_[v]) {
        continue;
      }
      auto const nd = d + a.w;
      if (nd < dist_[v]) {
        if (dist_[v] != kInf && hops_[v] != 0U) {
          --open_clean;
        }
        dist_[v] = nd;
        hops_[v] = carry;
        if (carry != 0U) {
          ++open_clean;
        }
        heap_.emplace_back(nd, v);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      } else if (nd == dist_[v] && carry > hops_[v]) {
        if (hops_[v] == 0U) {
          ++open_clean;
        }
        hops_[v] = carry;
      }
    }
  }
}

}  // namespace morp
