#include "morp/road_network.hpp"

#include <cmath>
#include <fstream>

#include "morp/csv.hpp"

namespace morp {

road_network::road_network(std::vector<std::string> names,
                           std::vector<double> lat, std::vector<double> lon,
                           std::vector<raw_edge> const& edges)
    : names_{std::move(names)}, lat_{std::move(lat)}, lon_{std::move(lon)},
      raw_{edges} {
  auto const n = names_.size();
  for (auto v = vertex_id{0}; v != n; ++v) {
    if (!index_.emplace(names_[v], v).second) {
      throw validation_error{"duplicate vertex id '" + names_[v] + "'"};
    }
  }
  in_car_.assign(n, 0);
  in_foot_.assign(n, 0);
  std::vector<weighted_edge> car, foot;
  for (auto const& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw validation_error{"edge endpoint out of range"};
    }
    if (e.w <= 0 || e.w == kInf) {
      throw validation_error{"edge " + names_[e.from] + "->" + names_[e.to] +
                             " has non-positive or infinite weight"};
    }
    if (e.m == mode::car) {
      car.push_back({e.from, e.to, e.w});
      in_car_[e.from] = in_car_[e.to] = 1;
    } else {
      foot.push_back({e.from, e.to, e.w});
      foot.push_back({e.to, e.from, e.w});
      in_foot_[e.from] = in_foot_[e.to] = 1;
    }
  }
  // A declared vertex without edges is still a place a rider can stand on.
  for (auto v = 0U; v != n; ++v) {
    if (!in_car_[v] && !in_foot_[v]) {
      in_foot_[v] = 1;
    }
  }
  car_ = digraph{n, std::move(car)};
  car_rev_ = car_.reversed();
  foot_ = digraph{n, std::move(foot)};
}

std::optional<vertex_id> road_network::find(std::string_view const name) const {
  auto const it = index_.find(std::string{name});
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

vertex_id road_network::id(std::string_view const name) const {
  auto const v = find(name);
  if (!v) {
    throw std::domain_error{"unknown vertex '" + std::string{name} + "'"};
  }
  return *v;
}

namespace {

double to_double(std::string_view const s, std::size_t const line) {
  try {
    std::size_t used = 0;
    auto const str = std::string{s};
    auto const v = std::stod(str, &used);
    if (used != str.size() || !std::isfinite(v)) {
      throw std::invalid_argument{""};
    }
    return v;
  } catch (std::exception const&) {
    throw parse_error{"invalid number '" + std::string{s} + "'", line};
  }
}

}  // namespace

road_network load_network(std::istream& nodes, std::istream& edges) {
  std::vector<std::string> names;
  std::vector<double> lat, lon;
  std::unordered_map<std::string, vertex_id> index;

  std::vector<std::string_view> f;
  delimited_reader nr{nodes, ','};
  if (!nr.next(f) || f.size() < 3 || f[0] != "id" || f[1] != "lat" ||
      f[2] != "lon") {
    throw parse_error{"nodes header must be 'id,lat,lon'", nr.line()};
  }
  while (nr.next(f)) {
    if (f.size() != 3 || f[0].empty()) {
      throw parse_error{"expected 3 fields", nr.line()};
    }
    auto name = std::string{f[0]};
    if (!index.emplace(name, static_cast<vertex_id>(names.size())).second) {
      throw validation_error{"duplicate vertex id '" + name + "' on line " +
                             std::to_string(nr.line())};
    }
    lat.push_back(to_double(f[1], nr.line()));
    lon.push_back(to_double(f[2], nr.line()));
    names.push_back(std::move(name));
  }

  std::vector<raw_edge> es;
  delimited_reader er{edges, ','};
  if (!er.next(f) || f.size() < 4 || f[0] != "from" || f[1] != "to" ||
      f[2] != "mode" || f[3] != "travel_seconds") {
    throw parse_error{"edges header must be 'from,to,mode,travel_seconds'",
                      er.line()};
  }
  while (er.next(f)) {
    if (f.size() != 4) {
      throw parse_error{"expected 4 fields", er.line()};
    }
    auto const lookup = [&](std::string_view const s) {
      auto const it = index.find(std::string{s});
      if (it == index.end()) {
        throw validation_error{"edge on line " + std::to_string(er.line()) +
                               " references undeclared vertex '" +
                               std::string{s} + "'"};
      }
      return it->second;
    };
    mode m;
    if (f[2] == "car") {
      m = mode::car;
    } else if (f[2] == "foot") {
      m = mode::foot;
    } else {
      throw parse_error{"mode must be car or foot", er.line()};
    }
    auto const secs = to_double(f[3], er.line());
    auto const w = static_cast<time_ms>(std::llround(secs * 1000.0));
    if (w <= 0) {
      throw validation_error{"non-positive travel time on line " +
                             std::to_string(er.line())};
    }
    es.push_back({lookup(f[0]), lookup(f[1]), m, w});
  }
  return {std::move(names), std::move(lat), std::move(lon), es};
}

road_network load_network_files(std::string const& nodes_path,
                                std::string const& edges_path) {
  std::ifstream n{nodes_path}, e{edges_path};
  if (!n) {
    throw std::runtime_error{"cannot open " + nodes_path};
  }
  if (!e) {
    throw std::runtime_error{"cannot open " + edges_path};
  }
  return load_network(n, e);
}

namespace {

void check_vertex(road_network const& net, vertex_id const v) {
  if (v >= net.size()) {
    throw std::domain_error{"unknown vertex " + std::to_string(v)};
  }
}

}  // namespace

time_ms shortest_time(road_network const& net, mode const m,
                      vertex_id const from, vertex_id const to) {
  check_vertex(net, from);
  check_vertex(net, to);
  auto const member = [&](vertex_id const v) {
    return m == mode::car ? net.in_car(v) : net.in_foot(v);
  };
  if (!member(from) || !member(to)) {
    return from == to ? 0 : kInf;
  }
  if (from == to) {
    return 0;
  }
  auto const& g = m == mode::car ? net.car() : net.foot();
  thread_local dijkstra d;
  d.prepare(g.size());
  d.add_source(from);
  while (true) {
    auto const u = d.settle_next();
    if (u == kNoVertex) {
      return kInf;
    }
    if (u == to) {
      return d.dist(u);
    }
    for (auto const& a : g.out(u)) {
      d.relax(a.to, d.dist(u) + a.w, u);
    }
  }
}

nearest_result k_nearest(road_network const& net, vertex_id const u,
                         unsigned const n_r, direction const dir) {
  check_vertex(net, u);
  nearest_result r;
  if (!net.in_car(u)) {
    r.deficit = n_r > 0U;
    return r;
  }
  auto const& g = dir == direction::outward ? net.car() : net.car_reversed();
  dijkstra d{g.size()};
  d.add_source(u);
  while (r.items.size() < n_r) {
    auto const x = d.settle_next();
    if (x == kNoVertex) {
      break;
    }
    if (x != u) {
      r.items.emplace_back(x, d.dist(x));
    }
    for (auto const& a : g.out(x)) {
      d.relax(a.to, d.dist(x) + a.w, x);
    }
  }
  r.deficit = r.items.size() < n_r;
  return r;
}

std::vector<std::pair<vertex_id, time_ms>> walk_radius(road_network const& net,
                                                       vertex_id const u,
                                                       time_ms const d_m) {
  check_vertex(net, u);
  std::vector<std::pair<vertex_id, time_ms>> out;
  dijkstra d{net.size()};
  d.add_source(u);
  while (d.top_dist() <= d_m) {
    auto const x = d.settle_next();
    if (x == kNoVertex) {
      break;
    }
    out.emplace_back(x, d.dist(x));
    for (auto const& a : net.foot().out(x)) {
      if (d.dist(x) + a.w <= d_m) {
        d.relax(a.to, d.dist(x) + a.w, x);
      }
    }
  }
  return out;
}

double haversine_m(double const lat1, double const lon1, double const lat2,
                   double const lon2) {
  constexpr auto kEarthRadius = 6371000.0;
  constexpr auto kRad = 3.14159265358979323846 / 180.0;
  auto const dlat = (lat2 - lat1) * kRad;
  auto const dlon = (lon2 - lon1) * kRad;
  auto const a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                 std::cos(lat1 * kRad) * std::cos(lat2 * kRad) *
                     std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace morp
