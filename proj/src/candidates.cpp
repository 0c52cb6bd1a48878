#include "morp/candidates.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "morp/csv.hpp"

namespace morp {

namespace {

double mean_seconds(time_ms const sum, unsigned const n_r) {
  return sum == kInf ? std::numeric_limits<double>::infinity()
                     : static_cast<double>(sum) / 1000.0 / n_r;
}

time_ms nearest_sum(road_network const& net, vertex_id const u,
                    unsigned const n_r, direction const dir) {
  auto const r = k_nearest(net, u, n_r, dir);
  if (r.deficit) {
    return kInf;
  }
  time_ms s = 0;
  for (auto const& [v, d] : r.items) {
    s += d;
  }
  return s;
}

}  // namespace

double convenience_tables::eco(vertex_id const v) const {
  return mean_seconds(eco_sum[v], n_r);
}

double convenience_tables::eci(vertex_id const v) const {
  return mean_seconds(eci_sum[v], n_r);
}

convenience_tables compute_convenience(road_network const& net,
                                       unsigned const n_r) {
  if (n_r == 0U) {
    throw std::invalid_argument{"n_r must be at least 1"};
  }
  convenience_tables t;
  t.n_r = n_r;
  t.eco_sum.resize(net.size());
  t.eci_sum.resize(net.size());
  for (auto u = vertex_id{0}; u != net.size(); ++u) {
    t.eco_sum[u] = nearest_sum(net, u, n_r, direction::outward);
    t.eci_sum[u] = nearest_sum(net, u, n_r, direction::inward);
  }
  return t;
}

score_t scs_units(time_ms const walk, time_ms const ec_sum, unsigned const n_r,
                  std::int64_t const alpha_milli,
                  std::int64_t const beta_milli) {
  if (walk == kInf || ec_sum == kInf) {
    return kInfScore;
  }
  return beta_milli * walk * static_cast<score_t>(n_r) + alpha_milli * ec_sum;
}

double serving_cost_score(vertex_id const v, time_ms const walk,
                          convenience_tables const& conv, double const alpha,
                          double const beta) {
  auto const ec = conv.ec_sum(v);
  if (walk == kInf || ec == kInf) {
    return std::numeric_limits<double>::infinity();
  }
  return beta * static_cast<double>(walk) / 1000.0 +
         alpha * static_cast<double>(ec) / 1000.0 / conv.n_r;
}

bool candidate_tables::contains(vertex_id const owner, vertex_id const v) const {
  auto const& c = mc[owner];
  return std::any_of(c.begin(), c.end(),
                     [&](candidate const& x) { return x.v == v; });
}

candidate_tables select_candidates(road_network const& net,
                                   convenience_tables const& conv,
                                   candidate_params const& params) {
  if (params.nc_m == 0U || params.d_m < 0 || params.thr_cs < 0) {
    throw std::invalid_argument{"invalid candidate parameters"};
  }
  auto const n_r = conv.n_r;
  auto const score_of = [&](vertex_id const v, time_ms const walk) {
    return scs_units(walk, conv.ec_sum(v), n_r, params.alpha_milli,
                     params.beta_milli);
  };
  auto const thr = static_cast<score_t>(params.thr_cs) * 1000 *
                   static_cast<score_t>(n_r);

  candidate_tables t;
  t.params = params;
  t.mc.resize(net.size());
  std::vector<candidate> pool;
  for (auto u = vertex_id{0}; u != net.size(); ++u) {
    if (!net.in_foot(u)) {
      continue;
    }
    auto const self = net.in_car(u) ? score_of(u, 0) : kInfScore;
    auto const limit = self == kInfScore ? kInfScore : self + thr;
    pool.clear();
    for (auto const& [v, walk] : walk_radius(net, u, params.d_m)) {
      if (v == u || !net.in_car(v)) {
        continue;
      }
      auto const s = score_of(v, walk);
      if (s != kInfScore && s <= limit) {
        pool.push_back({v, walk, s});
      }
    }
    auto const by_score = [](candidate const& a, candidate const& b) {
      return std::tie(a.score, a.v) < std::tie(b.score, b.v);
    };
    std::sort(pool.begin(), pool.end(), by_score);
    if (pool.size() > params.nc_m - 1U) {
      pool.resize(params.nc_m - 1U);
    }
    // A foot-only owner cannot be reached by car, so it is not its own MP.
    if (net.in_car(u)) {
      pool.push_back({u, 0, self});
    }
    std::sort(pool.begin(), pool.end(), by_score);
    t.mc[u] = pool;
  }
  return t;
}

void write_convenience(std::ostream& out, road_network const& net,
                       convenience_tables const& conv) {
  out << "vertex,eco_total_s,eci_total_s\n";
  for (auto v = vertex_id{0}; v != net.size(); ++v) {
    out << net.name(v) << ',' << format_seconds(conv.eco_sum[v]) << ','
        << format_seconds(conv.eci_sum[v]) << '\n';
  }
}

convenience_tables read_convenience(std::istream& in, road_network const& net,
                                    unsigned const n_r) {
  convenience_tables t;
  t.n_r = n_r;
  t.eco_sum.assign(net.size(), kInf);
  t.eci_sum.assign(net.size(), kInf);
  delimited_reader r{in, ','};
  std::vector<std::string_view> f;
  r.next(f);  // header
  while (r.next(f)) {
    if (f.size() != 3) {
      throw parse_error{"expected 3 fields", r.line()};
    }
    auto const v = net.id(f[0]);
    t.eco_sum[v] = parse_seconds(f[1]);
    t.eci_sum[v] = parse_seconds(f[2]);
  }
  return t;
}

void write_candidates(std::ostream& out, road_network const& net,
                      candidate_tables const& t) {
  for (auto u = vertex_id{0}; u != net.size(); ++u) {
    if (!net.in_foot(u)) {
      continue;
    }
    out << net.name(u) << ';';
    auto first = true;
    for (auto const& c : t.mc[u]) {
      out << (first ? "" : ",") << net.name(c.v) << ':'
          << format_seconds(c.walk);
      first = false;
    }
    out << '\n';
  }
}

candidate_tables read_candidates(std::istream& in, road_network const& net,
                                 convenience_tables const& conv,
                                 candidate_params const& params) {
  candidate_tables t;
  t.params = params;
  t.mc.resize(net.size());
  delimited_reader r{in, ';'};
  std::vector<std::string_view> f;
  while (r.next(f)) {
    if (f.size() != 2) {
      throw parse_error{"expected 'vertex;candidates'", r.line()};
    }
    auto const u = net.id(f[0]);
    if (f[1].empty()) {
      continue;
    }
    for (auto const item : split(f[1], ',')) {
      auto const kv = split(item, ':');
      if (kv.size() != 2) {
        throw parse_error{"expected 'candidate:walk'", r.line()};
      }
      auto const v = net.id(kv[0]);
      auto const walk = parse_seconds(kv[1]);
      t.mc[u].push_back({v, walk,
                         scs_units(walk, conv.ec_sum(v), conv.n_r,
                                   params.alpha_milli, params.beta_milli)});
    }
  }
  return t;
}

}  // namespace morp
