#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "morp/hmpo.hpp"
#include "morp/types.hpp"

namespace morp {

inline constexpr std::size_t kDefaultCacheCapacity = std::size_t{1} << 20U;

// Least-recently-used map from ordered vertex pairs to distances.
// Thread safe; a capacity of zero disables it.
class lru_cache {
public:
  explicit lru_cache(std::size_t capacity = kDefaultCacheCapacity)
      : capacity_{capacity} {}

  std::optional<time_ms> get(vertex_id from, vertex_id to);
  void put(vertex_id from, vertex_id to, time_ms value);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

private:
  using key = std::uint64_t;
  static key make_key(vertex_id a, vertex_id b) {
    return (static_cast<key>(a) << 32U) | b;
  }

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::pair<key, time_ms>> order_;
  std::unordered_map<key, std::list<std::pair<key, time_ms>>::iterator> map_;
  std::uint64_t hits_ = 0U, misses_ = 0U;
};

struct route_skeleton {
  time_ms cost = kInf;
  // u, the core vertices on the path, v. Consecutive entries are joined by a
  // single super-edge.
  std::vector<vertex_id> vertices;
};

// Point-to-point shortest times on G_c - V_de over the HMPO graph.
class query_engine {
public:
  explicit query_engine(hmpo_graph const& h,
                        std::size_t cache_capacity = kDefaultCacheCapacity);

  time_ms query(vertex_id u, vertex_id v) const;
  route_skeleton query_route(vertex_id u, vertex_id v) const;

  hmpo_graph const& graph() const { return h_; }
  lru_cache const& cache() const { return cache_; }

private:
  route_skeleton search(vertex_id u, vertex_id v, bool want_path) const;

  hmpo_graph const& h_;
  mutable lru_cache cache_;
};

}  // namespace morp
