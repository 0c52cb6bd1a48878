#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "morp/graph.hpp"
#include "morp/types.hpp"

namespace morp {

enum class mode { car, foot };
enum class direction { outward, inward };

struct raw_edge {
  vertex_id from;
  vertex_id to;
  mode m;
  time_ms w;
};

// Bimodal road network: directed car arcs and undirected foot edges over one
// vertex universe. Immutable once built.
class road_network {
public:
  road_network() = default;
  road_network(std::vector<std::string> names, std::vector<double> lat,
               std::vector<double> lon, std::vector<raw_edge> const& edges);

  std::size_t size() const { return names_.size(); }

  std::string const& name(vertex_id const v) const { return names_[v]; }
  double lat(vertex_id const v) const { return lat_[v]; }
  double lon(vertex_id const v) const { return lon_[v]; }

  std::optional<vertex_id> find(std::string_view name) const;
  // Like find() but throws std::domain_error for unknown names.
  vertex_id id(std::string_view name) const;

  bool in_car(vertex_id const v) const { return in_car_[v] != 0; }
  bool in_foot(vertex_id const v) const { return in_foot_[v] != 0; }

  digraph const& car() const { return car_; }
  digraph const& car_reversed() const { return car_rev_; }
  digraph const& foot() const { return foot_; }

  std::vector<raw_edge> const& raw_edges() const { return raw_; }

private:
  std::vector<std::string> names_;
  std::vector<double> lat_, lon_;
  std::unordered_map<std::string, vertex_id> index_;
  std::vector<char> in_car_, in_foot_;
  digraph car_, car_rev_, foot_;
  std::vector<raw_edge> raw_;
};

road_network load_network(std::istream& nodes, std::istream& edges);
road_network load_network_files(std::string const& nodes_path,
                                std::string const& edges_path);

time_ms shortest_time(road_network const& net, mode m, vertex_id from,
                      vertex_id to);

struct nearest_result {
  std::vector<std::pair<vertex_id, time_ms>> items;
  bool deficit = false;
};

nearest_result k_nearest(road_network const& net, vertex_id u, unsigned n_r,
                         direction dir);

// Every vertex within d_m walking time of u, nearest first, (u,0) included.
std::vector<std::pair<vertex_id, time_ms>> walk_radius(road_network const& net,
                                                       vertex_id u,
                                                       time_ms d_m);

// Great-circle distance in metres.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace morp
