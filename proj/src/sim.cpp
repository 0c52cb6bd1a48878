#include "morp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "morp/csv.hpp"

namespace morp {

std::vector<request_spec> read_requests(std::istream& in,
                                        road_network const& net) {
  std::vector<request_spec> out;
  delimited_reader r{in, ','};
  std::vector<std::string_view> f;
  if (!r.next(f) || f.size() < 5 || f[0] != "id" || f[1] != "release_s" ||
      f[2] != "src_vertex" || f[3] != "dst_vertex" || f[4] != "capacity") {
    throw parse_error{
        "requests header must be 'id,release_s,src_vertex,dst_vertex,capacity'",
        r.line()};
  }
  auto const with_flag = f.size() == 6U && f[5] == "no_walk";
  while (r.next(f)) {
    if (f.size() != (with_flag ? 6U : 5U)) {
      throw parse_error{"wrong number of fields", r.line()};
    }
    request_spec s;
    s.id = std::string{f[0]};
    try {
      s.release = parse_seconds(f[1]);
      s.demand = std::stoi(std::string{f[4]});
    } catch (std::exception const&) {
      throw parse_error{"invalid number", r.line()};
    }
    if (s.release < 0 || s.release == kInf || s.demand < 1) {
      throw parse_error{"release must be finite and capacity positive", r.line()};
    }
    s.s = net.id(f[2]);
    s.e = net.id(f[3]);
    s.no_walk = with_flag && f[5] == "1";
    out.push_back(std::move(s));
  }
  return out;
}

void write_requests(std::ostream& out, road_network const& net,
                    std::vector<request_spec> const& rs) {
  out << "id,release_s,src_vertex,dst_vertex,capacity\n";
  for (auto const& r : rs) {
    out << r.id << ',' << format_seconds(r.release) << ',' << net.name(r.s)
        << ',' << net.name(r.e) << ',' << r.demand << '\n';
  }
}

void apply_config_text(sim_config& c, prep_params* p, std::istream& in) {
  std::string line;
  std::size_t no = 0U;
  while (std::getline(in, line)) {
    ++no;
    auto const body = trim(std::string_view{line}.substr(0, line.find('#')));
    if (body.empty()) {
      continue;
    }
    auto const eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw config_error{"config line " + std::to_string(no) + ": expected key = value"};
    }
    auto key = std::string{trim(body.substr(0, eq))};
    std::replace(key.begin(), key.end(), '-', '_');
    auto const val = std::string{trim(body.substr(eq + 1))};
    try {
      if (key == "policy") {
        c.pol = parse_policy(val);
      } else if (key == "alpha") {
        c.alpha_milli = parse_milli(val);
      } else if (key == "beta") {
        c.beta_milli = parse_milli(val);
      } else if (key == "p_o") {
        c.p_o_milli = parse_milli(val);
      } else if (key == "e_r") {
        c.e_r_milli = parse_milli(val);
      } else if (key == "drivers") {
        c.fleet = std::stoul(val);
      } else if (key == "capacity") {
        c.capacity = std::stoi(val);
      } else if (key == "grid_density") {
        c.grid_density = std::stod(val);
      } else if (key == "use_grid") {
        c.use_grid = val == "1" || val == "true";
      } else if (key == "seed") {
        c.seed = std::stoull(val);
      } else if (key == "one_to_many") {
        c.one_to_many = val == "1" || val == "true";
      } else if (key == "query_cache_capacity") {
        c.cache_capacity = std::stoul(val);
      } else if (p != nullptr && key == "n_r") {
        p->n_r = static_cast<unsigned>(std::stoul(val));
      } else if (p != nullptr && key == "d_m") {
        p->candidates.d_m = parse_seconds(val);
      } else if (p != nullptr && key == "nc_m") {
        p->candidates.nc_m = static_cast<unsigned>(std::stoul(val));
      } else if (p != nullptr && key == "thr_cs") {
        p->candidates.thr_cs = parse_seconds(val);
      } else if (p != nullptr && key == "epsilon") {
        p->epsilon = std::stod(val);
      } else if (p != nullptr && key == "k") {
        p->k = static_cast<unsigned>(std::stoul(val));
      } else {
        throw config_error{"unknown key '" + key + "'"};
      }
    } catch (config_error const&) {
      throw;
    } catch (std::exception const&) {
      throw config_error{"config line " + std::to_string(no) + ": bad value for " + key};
    }
  }
}

std::optional<request> derive_deadlines(request_spec const& spec,
                                        road_network const& net,
                                        sim_config const& c) {
  if (spec.s == spec.e) {
    return std::nullopt;
  }
  auto const sp = shortest_time(net, mode::car, spec.s, spec.e);
  if (sp == kInf) {
    return std::nullopt;
  }
  request r;
  r.id = spec.id;
  r.s = spec.s;
  r.e = spec.e;
  r.tr = spec.release;
  r.direct = sp;
  auto const slack = (sp * c.e_r_milli + 500) / 1000;
  r.td = r.tr + sp + slack;
  r.tp = r.td - sp;
  r.penalty = c.p_o_milli * sp;
  r.demand = spec.demand;
  r.no_walk = spec.no_walk;
  return r;
}

std::size_t advance_driver(driver& d, time_ms const t,
                           std::vector<request> const&,
                           std::vector<char>* delivered) {
  auto& p = d.plan;
  std::size_t k = 0U;
  while (k != p.stops.size() && p.arr[k] <= t) {
    auto const& s = p.stops[k];
    d.loc = s.v;
    d.anchor = p.dep[k];
    d.onboard += s.load_delta;
    d.trail.push_back(s.v);
    if (delivered != nullptr && s.kind == stop_kind::dropoff) {
      (*delivered)[s.request] = 1;
    }
    ++k;
  }
  if (k != 0U) {
    auto const cut = [k](auto& xs) {
      xs.erase(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k));
    };
    cut(p.stops);
    cut(p.arr);
    cut(p.dep);
    cut(p.load);
  }
  return k;
}

// --- grid ---------------------------------------------------------------------

namespace {

constexpr auto kMetresPerDegree = 6371000.0 * 3.14159265358979323846 / 180.0;

}  // namespace

grid_index::grid_index(road_network const& net, double const density)
    : net_{net}, density_{density} {
  if (!(density > 0.0)) {
    throw config_error{"grid density must be positive"};
  }
  auto max_lat = 0.0;
  for (auto v = vertex_id{0}; v != net.size(); ++v) {
    max_lat = std::max(max_lat, std::abs(net.lat(v)));
  }
  for (auto const& e : net.car().edges()) {
    auto const m = haversine_m(net.lat(e.from), net.lon(e.from), net.lat(e.to),
                               net.lon(e.to));
    max_speed_ = std::max(max_speed_, m / static_cast<double>(e.w));
  }
  // Small safety margin covers the gap between parallel and great-circle
  // distances across one cell.
  auto const rad = max_lat * 3.14159265358979323846 / 180.0;
  cell_min_m_ = 0.999 * kMetresPerDegree / density *
                std::min(1.0, std::cos(std::min(rad, 1.5)));
}

grid_index::cell grid_index::cell_of(vertex_id const v) const {
  return {static_cast<std::int64_t>(std::floor(net_.lat(v) * density_)),
          static_cast<std::int64_t>(std::floor(net_.lon(v) * density_))};
}

std::uint64_t grid_index::key(cell const c) {
  return (static_cast<std::uint64_t>(c.first) << 32U) ^
         (static_cast<std::uint64_t>(c.second) & 0xffffffffULL);
}

void grid_index::insert(std::size_t const driver, vertex_id const at) {
  auto const c = cell_of(at);
  cells_[key(c)].push_back(driver);
  if (max_x_ < min_x_) {
    min_x_ = max_x_ = c.first;
    min_y_ = max_y_ = c.second;
  } else {
    min_x_ = std::min(min_x_, c.first);
    max_x_ = std::max(max_x_, c.first);
    min_y_ = std::min(min_y_, c.second);
    max_y_ = std::max(max_y_, c.second);
  }
}

void grid_index::move(std::size_t const driver, vertex_id const from,
                      vertex_id const to) {
  auto const a = cell_of(from);
  auto const b = cell_of(to);
  if (a == b) {
    return;
  }
  auto& v = cells_[key(a)];
  v.erase(std::find(v.begin(), v.end(), driver));
  insert(driver, to);
}

std::vector<std::size_t> grid_index::around(vertex_id const src,
                                            double const radius_m) const {
  std::vector<std::size_t> out;
  if (max_x_ < min_x_) {
    return out;
  }
  auto const [cx, cy] = cell_of(src);
  auto const reach = std::max({cx - min_x_, max_x_ - cx, cy - min_y_, max_y_ - cy});
  auto const visit = [&](std::int64_t x, std::int64_t y) {
    if (auto const it = cells_.find(key({x, y})); it != cells_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  };
  for (std::int64_t r = 0; r <= reach; ++r) {
    if (static_cast<double>(r - 1) * cell_min_m_ > radius_m) {
      break;
    }
    if (r == 0) {
      visit(cx, cy);
      continue;
    }
    for (auto x = cx - r; x <= cx + r; ++x) {
      visit(x, cy - r);
      visit(x, cy + r);
    }
    for (auto y = cy - r + 1; y <= cy + r - 1; ++y) {
      visit(cx - r, y);
      visit(cx + r, y);
    }
  }
  return out;
}

// --- simulation -----------------------------------------------------------------

std::vector<vertex_id> place_drivers(artifacts const& a, policy const p,
                                     std::size_t const count,
                                     std::uint64_t const seed) {
  std::vector<vertex_id> pool;
  for (auto v = vertex_id{0}; v != a.net.size(); ++v) {
    if (a.net.in_car(v)) {
      pool.push_back(v);
    }
  }
  std::vector<vertex_id> out;
  if (pool.empty()) {
    return out;
  }
  auto const skip_defective = p != policy::greedy_dp && !a.dvs.defective.empty();
  auto const usable =
      std::any_of(pool.begin(), pool.end(), [&](vertex_id v) {
        return !skip_defective || !a.dvs.defective[v];
      });
  if (!usable) {
    return out;
  }
  std::mt19937_64 rng{seed};
  std::uniform_int_distribution<std::size_t> pick{0U, pool.size() - 1U};
  while (out.size() != count) {
    auto const v = pool[pick(rng)];
    if (skip_defective && a.dvs.defective[v]) {
      continue;
    }
    out.push_back(v);
  }
  return out;
}

sim_result run_simulation(artifacts const& a,
                          std::vector<request_spec> const& stream,
                          sim_config const& c) {
  auto const& net = a.net;
  if (c.pol != policy::greedy_dp && a.mc.mc.size() != net.size()) {
    throw config_error{"policy needs meeting-point candidates"};
  }
  if (uses_hmpo(c.pol) && a.hmpo.size() != net.size()) {
    throw config_error{"policy needs the HMPO graph"};
  }
  if (c.pol == policy::smdb && a.smd.entries.size() != net.size()) {
    throw config_error{"policy needs SMD tables"};
  }

  std::optional<query_engine> engine;
  std::optional<car_oracle> car;
  std::optional<hmpo_oracle> hmpo;
  distance_oracle const* sp = nullptr;
  if (uses_hmpo(c.pol)) {
    engine.emplace(a.hmpo, c.cache_capacity);
    hmpo.emplace(*engine);
    sp = &*hmpo;
  } else {
    car.emplace(net, c.cache_capacity);
    sp = &*car;
  }
  // HMPO policies search G_c - V_de, which gives the same distances as
  // the HMPO queries.
  endpoint_table table{*sp, uses_hmpo(c.pol) ? a.hmpo.base.fwd : net.car(),
                       uses_hmpo(c.pol) ? a.hmpo.base.bwd : net.car_reversed()};
  cost_weights const w{c.alpha_milli, c.beta_milli};
  dispatch_context const ctx{net,
                             c.pol == policy::greedy_dp ? nullptr : &a.mc,
                             uses_hmpo(c.pol) ? &a.hmpo : nullptr,
                             c.pol == policy::smdb ? &a.smd : nullptr,
                             c.one_to_many ? static_cast<distance_oracle const&>(table) : *sp,
                             w};

  sim_result res;
  auto& m = res.m;
  auto& fleet = res.fleet;
  auto const starts = place_drivers(a, c.pol, c.fleet, c.seed);
  for (auto i = 0U; i != starts.size(); ++i) {
    driver d;
    d.id = static_cast<std::uint32_t>(i);
    d.loc = starts[i];
    d.capacity = c.capacity;
    d.trail.push_back(d.loc);
    fleet.push_back(std::move(d));
  }

  std::optional<grid_index> grid;
  if (c.use_grid) {
    grid.emplace(net, c.grid_density);
    for (auto i = 0U; i != fleet.size(); ++i) {
      grid->insert(i, fleet[i].loc);
    }
  }

  // Valid requests in release order; ties keep file order.
  auto& reqs = res.requests;
  std::vector<std::size_t> order(stream.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return stream[x].release < stream[y].release;
  });
  for (auto const i : order) {
    if (auto r = derive_deadlines(stream[i], net, c)) {
      reqs.push_back(std::move(*r));
    } else {
      ++m.dropped;
    }
  }
  m.requests = reqs.size();

  using due = std::pair<time_ms, std::size_t>;
  std::priority_queue<due, std::vector<due>, std::greater<>> next;
  std::vector<std::size_t> everyone(fleet.size());
  std::iota(everyone.begin(), everyone.end(), 0U);

  double total_us = 0.0;
  std::vector<std::size_t> cands;
  for (auto ri = 0U; ri != reqs.size(); ++ri) {
    auto const& r = reqs[ri];
    auto const now = r.tr;

    while (!next.empty() && next.top().first <= now) {
      auto const idx = next.top().second;
      next.pop();
      auto& d = fleet[idx];
      auto const before = d.loc;
      if (advance_driver(d, now, reqs) != 0U) {
        if (grid) {
          grid->move(idx, before, d.loc);
        }
        if (!d.plan.stops.empty()) {
          next.emplace(d.plan.arr.front(), idx);
        }
      }
    }

    auto const t0 = std::chrono::steady_clock::now();
    auto const pairs = candidate_pairs(c.pol, ctx, r);
    if (c.one_to_many) {
      std::vector<vertex_id> ends;
      for (auto const& mp : pairs) {
        ends.push_back(mp.pi);
        ends.push_back(mp.de);
      }
      table.prepare(ends);
    }
    std::vector<std::size_t> const* pool = &everyone;
    if (grid) {
      auto earliest = kInf;
      for (auto const& d : fleet) {
        earliest = std::min(earliest, d.start_time(now));
      }
      auto spread = 0.0;
      for (auto const& mp : pairs) {
        spread = std::max(spread, haversine_m(net.lat(r.s), net.lon(r.s),
                                              net.lat(mp.pi), net.lon(mp.pi)));
      }
      auto const budget = earliest == kInf ? 0.0 : static_cast<double>(std::max<time_ms>(0, r.tp - earliest));
      cands = grid->around(r.s, grid->max_speed() * budget + spread + 1.0);
      std::sort(cands.begin(), cands.end());
      pool = &cands;
    }
    auto const dec = assign(c.pol, ctx, fleet, *pool, r, now, &res.stats);
    auto const us = std::chrono::duration_cast<std::chrono::microseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    total_us += static_cast<double>(us);

    log_row row;
    row.request_id = r.id;
    row.eval_micros = us;
    if (dec.assigned) {
      auto& d = fleet[dec.driver];
      apply_insertion(d, r, ri, dec.mp, dec.ins, now, *sp);
      next.emplace(d.plan.arr.front(), dec.driver);
      ++m.served;
      m.unified_cost += dec.ins.delta;
      m.drive_cost += c.alpha_milli * dec.ins.added_drive;
      m.walk_cost += c.beta_milli * (dec.mp.wp + dec.mp.wd);
      row.assigned = true;
      row.driver_id = d.id;
      row.pi = dec.mp.pi;
      row.de = dec.mp.de;
      row.delta = dec.ins.delta;
      row.wp = dec.mp.wp;
      row.wd = dec.mp.wd;
    } else {
      ++m.rejected;
      m.unified_cost += r.penalty;
      m.penalty_cost += r.penalty;
      row.delta = r.penalty;
    }
    res.log.push_back(std::move(row));
  }
  m.mean_response_us = reqs.empty() ? 0.0 : total_us / static_cast<double>(reqs.size());
  m.recomputed_cost = recompute_unified_cost(a, res, c);
  return res;
}

cost_t recompute_unified_cost(artifacts const& a, sim_result const& r,
                              sim_config const& c) {
  time_ms drive = 0;
  for (auto const& d : r.fleet) {
    auto path = d.trail;
    for (auto const& s : d.plan.stops) {
      path.push_back(s.v);
    }
    for (auto i = 1U; i < path.size(); ++i) {
      drive = add_dist(drive, shortest_time(a.net, mode::car, path[i - 1U], path[i]));
    }
  }
  if (drive == kInf) {
    return kInf;
  }
  time_ms walk = 0;
  for (auto const& row : r.log) {
    if (row.assigned) {
      walk += row.wp + row.wd;
    }
  }
  cost_t penalty = 0;
  for (auto i = 0U; i != r.log.size(); ++i) {
    if (!r.log[i].assigned) {
      penalty += r.requests[i].penalty;
    }
  }
  return c.alpha_milli * drive + c.beta_milli * walk + penalty;
}

void write_log(std::ostream& out, road_network const& net,
               std::vector<log_row> const& log, bool const include_timing) {
  out << "request_id,decision,driver_id,pi,de,delta_cost,walk_pick_s,walk_drop_s,"
         "eval_micros\n";
  for (auto const& r : log) {
    out << r.request_id << ',' << (r.assigned ? "assigned" : "rejected") << ',';
    if (r.assigned) {
      out << r.driver_id << ',' << net.name(r.pi) << ',' << net.name(r.de) << ','
          << format_cost(r.delta) << ',' << format_seconds(r.wp) << ','
          << format_seconds(r.wd);
    } else {
      out << ",,," << format_cost(r.delta) << ",,";
    }
    out << ',' << (include_timing ? r.eval_micros : 0) << '\n';
  }
}

namespace {

std::string milli_str(std::int64_t const v) {
  std::ostringstream s;
  s << v / 1000;
  if (auto const rem = std::abs(v % 1000); rem != 0) {
    auto frac = std::to_string(1000 + rem).substr(1);
    while (frac.back() == '0') {
      frac.pop_back();
    }
    s << '.' << frac;
  }
  return s.str();
}

constexpr char const* kMetricsHeader =
    "label,policy,seed,drivers,capacity,e_r,alpha,beta,p_o,grid_density,use_grid,"
    "requests,served,rejected,dropped,unified_cost,drive_cost,walk_cost,"
    "penalty_cost,recomputed_cost,ledger_ok,mean_response_us";

}  // namespace

void write_metrics(std::ostream& out, sim_config const& c, metrics const& m,
                   std::string const& label) {
  out << kMetricsHeader << '\n';
  out << label << ',' << to_string(c.pol) << ',' << c.seed << ',' << c.fleet << ','
      << c.capacity << ',' << milli_str(c.e_r_milli) << ','
      << milli_str(c.alpha_milli) << ',' << milli_str(c.beta_milli) << ','
      << milli_str(c.p_o_milli) << ',' << c.grid_density << ','
      << (c.use_grid ? 1 : 0) << ',' << m.requests << ',' << m.served << ','
      << m.rejected << ',' << m.dropped << ',' << format_cost(m.unified_cost) << ','
      << format_cost(m.drive_cost) << ',' << format_cost(m.walk_cost) << ','
      << format_cost(m.penalty_cost) << ',' << format_cost(m.recomputed_cost)
      << ',' << (m.unified_cost == m.recomputed_cost ? 1 : 0) << ','
      << m.mean_response_us << '\n';
}

void report(std::vector<std::string> const& metrics_files, std::ostream& out) {
  using row = std::map<std::string, std::string>;
  std::vector<row> rows;
  for (auto const& path : metrics_files) {
    std::ifstream in{path};
    if (!in) {
      throw std::runtime_error{"cannot open " + path};
    }
    delimited_reader r{in, ','};
    std::vector<std::string_view> f;
    if (!r.next(f)) {
      throw std::runtime_error{path + " is empty"};
    }
    std::vector<std::string> const header(f.begin(), f.end());
    while (r.next(f)) {
      if (f.size() != header.size()) {
        throw parse_error{"field count differs from header in " + path, r.line()};
      }
      row x;
      for (auto i = 0U; i != f.size(); ++i) {
        x[header[i]] = std::string{f[i]};
      }
      rows.push_back(std::move(x));
    }
  }

  std::vector<std::string> const params = {"drivers", "capacity", "e_r", "alpha",
                                           "beta", "p_o", "grid_density", "use_grid"};
  std::vector<std::string> varying;
  for (auto const& p : params) {
    std::set<std::string> seen;
    for (auto const& x : rows) {
      seen.insert(x.at(p));
    }
    if (seen.size() > 1U) {
      varying.push_back(p);
    }
  }
  if (varying.size() > 1U) {
    std::string names;
    for (auto const& v : varying) {
      names += (names.empty() ? "" : ", ") + v;
    }
    throw std::runtime_error{"inconsistent parameter sets: runs differ in " + names};
  }
  auto const swept = varying.empty() ? std::string{} : varying.front();

  struct acc {
    std::size_t runs = 0U;
    double served = 0, rejected = 0, uc = 0, resp = 0;
  };
  auto const num = [](std::string const& s) { return std::stod(s); };
  std::map<std::pair<std::string, double>, acc> groups;
  std::map<std::pair<std::string, double>, std::string> label_of;
  for (auto const& x : rows) {
    auto const value = swept.empty() ? 0.0 : num(x.at(swept));
    auto& g = groups[{x.at("policy"), value}];
    label_of[{x.at("policy"), value}] = swept.empty() ? "" : x.at(swept);
    ++g.runs;
    g.served += num(x.at("served"));
    g.rejected += num(x.at("rejected"));
    g.uc += num(x.at("unified_cost"));
    g.resp += num(x.at("mean_response_us"));
  }

  out << "policy,parameter,value,runs,mean_served,mean_rejected,mean_unified_cost,"
         "mean_response_us,flag\n";
  std::map<std::string, double> last_served;
  for (auto const& [k, g] : groups) {
    auto const n = static_cast<double>(g.runs);
    auto const served = g.served / n;
    std::string flag;
    if (swept == "e_r") {
      auto const it = last_served.find(k.first);
      if (it != last_served.end() && served < it->second) {
        flag = "served_decreased";
      }
      last_served[k.first] = served;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.6f,%.1f", served, g.rejected / n,
                  g.uc / n, g.resp / n);
    out << k.first << ',' << swept << ',' << label_of[k] << ',' << g.runs << ','
        << buf << ',' << flag << '\n';
  }
}

}  // namespace morp
