#include "morp/dispatch.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace morp {

char const* to_string(policy const p) {
  switch (p) {
    case policy::greedy_dp: return "greedy_dp";
    case policy::basic_mp: return "basic_mp";
    case policy::fs: return "fs";
    case policy::hsrp: return "hsrp";
    case policy::smdb: return "smdb";
  }
  return "?";
}

policy parse_policy(std::string_view const s) {
  for (auto const p : {policy::greedy_dp, policy::basic_mp, policy::fs,
                       policy::hsrp, policy::smdb}) {
    if (s == to_string(p)) {
      return p;
    }
  }
  throw config_error{"unknown policy '" + std::string{s} + "'"};
}

bool uses_hmpo(policy const p) { return p == policy::hsrp || p == policy::smdb; }

time_ms car_oracle::operator()(vertex_id const from, vertex_id const to) const {
  if (auto const hit = cache_.get(from, to)) {
    return *hit;
  }
  auto const d = shortest_time(net_, mode::car, from, to);
  cache_.put(from, to, d);
  return d;
}

void endpoint_table::fill(digraph const& g, vertex_id const s,
                          std::vector<time_ms>& out) {
  search_.prepare(g.size());
  search_.add_source(s);
  search_.run(g);
  out.resize(g.size());
  for (auto v = vertex_id{0}; v != g.size(); ++v) {
    out[v] = search_.dist(v);
  }
}

void endpoint_table::prepare(std::vector<vertex_id> const& vertices) {
  to_.clear();
  from_.clear();
  for (auto const v : vertices) {
    if (to_.count(v) == 0U) {
      fill(bwd_, v, to_[v]);
      fill(fwd_, v, from_[v]);
    }
  }
}

time_ms endpoint_table::operator()(vertex_id const from, vertex_id const to) const {
  if (from == to) {
    return 0;
  }
  if (auto const it = to_.find(to); it != to_.end()) {
    return it->second[from];
  }
  if (auto const it = from_.find(from); it != from_.end()) {
    return it->second[to];
  }
  return fallback_(from, to);
}

void reschedule(driver& d, time_ms const now, distance_oracle const& sp) {
  auto& p = d.plan;
  auto const n = p.stops.size();
  p.arr.resize(n);
  p.dep.resize(n);
  p.load.resize(n);
  auto t = d.start_time(now);
  auto prev = d.loc;
  auto load = d.onboard;
  for (auto m = 0U; m != n; ++m) {
    auto const& s = p.stops[m];
    p.arr[m] = add_dist(t, sp(prev, s.v));
    p.dep[m] = p.arr[m] == kInf ? kInf : std::max(p.arr[m], s.ready);
    load += s.load_delta;
    p.load[m] = load;
    t = p.dep[m];
    prev = s.v;
  }
}

time_ms route_duration(driver const& d, distance_oracle const& sp) {
  time_ms total = 0;
  auto prev = d.loc;
  for (auto const& s : d.plan.stops) {
    total = add_dist(total, sp(prev, s.v));
    prev = s.v;
  }
  return total;
}

namespace {

constexpr time_ms sat_add(time_ms const a, time_ms const b) {
  return add_dist(a, b);
}

}  // namespace

std::optional<insertion> try_insert(driver const& d, request const& r,
                                    mp_choice const& mp,
                                    std::size_t const max_pickup_after,
                                    time_ms const now,
                                    distance_oracle const& sp,
                                    cost_weights const w) {
  auto const& p = d.plan;
  auto const n = p.stops.size();
  auto const a = r.demand;
  auto const cap = d.capacity;
  auto const ready_p = r.tr + mp.wp;
  auto const latest_p = r.tp;
  auto const latest_q = r.td - mp.wd;
  if (ready_p > latest_p || a > cap) {
    return std::nullopt;
  }

  // Station m in 0..n: m = 0 is the current location.
  auto const x = [&](std::size_t m) { return m == 0U ? d.loc : p.stops[m - 1U].v; };
  auto const dep = [&](std::size_t m) {
    return m == 0U ? d.start_time(now) : p.dep[m - 1U];
  };
  auto const load = [&](std::size_t m) { return m == 0U ? d.onboard : p.load[m - 1U]; };
  auto const leg = [&](std::size_t m) { return p.arr[m - 1U] - dep(m - 1U); };

  // slack[m]: largest arrival delay at station m that keeps every later
  // deadline; waiting time at a station absorbs delay.
  std::vector<time_ms> slack(n + 2U, kInf);
  for (auto m = n; m >= 1U; --m) {
    auto const& s = p.stops[m - 1U];
    auto const own = s.latest - p.arr[m - 1U];
    auto const wait = p.dep[m - 1U] - p.arr[m - 1U];
    slack[m] = std::min(own, sat_add(wait, slack[m + 1U]));
  }
  auto const fits = [&](std::size_t m, time_ms new_arr) {
    return m > n || new_arr - p.arr[m - 1U] <= slack[m];
  };

  std::optional<insertion> best;
  auto const consider = [&](time_ms added, std::size_t i, std::size_t j) {
    auto const delta = w.alpha_milli * added + w.beta_milli * (mp.wp + mp.wd);
    if (!best || std::tie(delta, i, j) <
                     std::tie(best->delta, best->pickup_after, best->dropoff_after)) {
      best = insertion{delta, added, i, j};
    }
  };

  auto const d_pq = sp(mp.pi, mp.de);
  auto const last_i = std::min(max_pickup_after, n);
  for (auto i = std::size_t{0}; i <= last_i; ++i) {
    if (load(i) + a > cap) {
      continue;
    }
    auto const d_ip = sp(x(i), mp.pi);
    if (d_ip == kInf) {
      continue;
    }
    auto const arr_p = dep(i) + d_ip;
    if (arr_p > latest_p) {
      continue;
    }
    auto const dep_p = std::max(arr_p, ready_p);

    // dropoff directly after the pickup
    if (d_pq != kInf && dep_p + d_pq <= latest_q) {
      auto const arr_q = dep_p + d_pq;
      if (i == n) {
        consider(d_ip + d_pq, i, i);
      } else {
        auto const d_qn = sp(mp.de, x(i + 1U));
        if (d_qn != kInf && fits(i + 1U, arr_q + d_qn)) {
          consider(d_ip + d_pq + d_qn - leg(i + 1U), i, i);
        }
      }
    }
    if (i == n) {
      continue;
    }

    // dropoff after a later station j; stations i+1..j shift together
    auto const d_pn = sp(mp.pi, x(i + 1U));
    if (d_pn == kInf) {
      continue;
    }
    auto const head = d_ip + d_pn - leg(i + 1U);
    auto cur_arr = dep_p + d_pn;
    for (auto m = i + 1U; m <= n; ++m) {
      auto const& s = p.stops[m - 1U];
      if (cur_arr > s.latest || load(m) + a > cap) {
        break;
      }
      auto const cur_dep = std::max(cur_arr, s.ready);
      auto const d_mq = sp(x(m), mp.de);
      if (d_mq != kInf && cur_dep + d_mq <= latest_q) {
        auto const arr_q = cur_dep + d_mq;
        if (m == n) {
          consider(head + d_mq, i, m);
        } else {
          auto const d_qn = sp(mp.de, x(m + 1U));
          if (d_qn != kInf && fits(m + 1U, arr_q + d_qn)) {
            consider(head + d_mq + d_qn - leg(m + 1U), i, m);
          }
        }
      }
      if (m < n) {
        cur_arr = cur_dep + leg(m + 1U);
      }
    }
  }
  return best;
}

void apply_insertion(driver& d, request const& r, std::size_t const request_index,
                     mp_choice const& mp, insertion const& ins,
                     time_ms const now, distance_oracle const& sp) {
  if (d.plan.stops.empty()) {
    d.anchor = d.start_time(now);
  }
  auto& st = d.plan.stops;
  auto const pick = stop{mp.pi, stop_kind::pickup, request_index, r.tr + mp.wp,
                         r.tp, r.demand};
  auto const drop = stop{mp.de, stop_kind::dropoff, request_index, 0,
                         r.td - mp.wd, -r.demand};
  st.insert(st.begin() + static_cast<std::ptrdiff_t>(ins.pickup_after), pick);
  st.insert(st.begin() + static_cast<std::ptrdiff_t>(ins.dropoff_after + 1U), drop);
  d.served.push_back(request_index);
  reschedule(d, now, sp);
}

bool route_feasible(driver const& d, time_ms const now,
                    distance_oracle const& sp, std::string* why) {
  auto const fail = [&](std::string msg) {
    if (why != nullptr) {
      *why = std::move(msg);
    }
    return false;
  };
  auto const& p = d.plan;
  if (p.arr.size() != p.stops.size() || p.dep.size() != p.stops.size()) {
    return fail("schedule size mismatch");
  }
  auto t = d.start_time(now);
  auto prev = d.loc;
  auto onboard = d.onboard;
  if (onboard < 0 || onboard > d.capacity) {
    return fail("onboard out of range at start");
  }
  std::vector<std::size_t> open;
  for (auto m = 0U; m != p.stops.size(); ++m) {
    auto const& s = p.stops[m];
    auto const arr = add_dist(t, sp(prev, s.v));
    if (arr != p.arr[m]) {
      return fail("arrival time inconsistent at station " + std::to_string(m));
    }
    if (arr > s.latest) {
      return fail("deadline missed at station " + std::to_string(m));
    }
    auto const depart = std::max(arr, s.ready);
    if (depart != p.dep[m]) {
      return fail("departure time inconsistent at station " + std::to_string(m));
    }
    if (s.kind == stop_kind::pickup) {
      open.push_back(s.request);
    } else {
      auto const it = std::find(open.begin(), open.end(), s.request);
      if (it != open.end()) {
        open.erase(it);
      }
    }
    onboard += s.load_delta;
    if (onboard < 0 || onboard > d.capacity) {
      return fail("capacity violated at station " + std::to_string(m));
    }
    t = depart;
    prev = s.v;
  }
  if (!open.empty()) {
    return fail("pickup without later dropoff");
  }
  return true;
}

namespace {

void push_unique(std::vector<std::pair<vertex_id, time_ms>>& out, vertex_id v,
                 time_ms w) {
  for (auto const& [x, _] : out) {
    if (x == v) {
      return;
    }
  }
  out.emplace_back(v, w);
}

std::vector<std::pair<vertex_id, time_ms>> endpoint_options(
    policy const p, dispatch_context const& ctx, vertex_id const u,
    bool const no_walk) {
  std::vector<std::pair<vertex_id, time_ms>> out;
  auto const self_ok = ctx.net.in_car(u) &&
                       !(uses_hmpo(p) && ctx.hmpo->is_defective(u));
  if (p == policy::greedy_dp || no_walk || ctx.mc->mc[u].empty()) {
    if (self_ok) {
      out.emplace_back(u, 0);
    }
    return out;
  }
  for (auto const& c : ctx.mc->mc[u]) {
    if (uses_hmpo(p) && ctx.hmpo->is_defective(c.v)) {
      continue;
    }
    push_unique(out, c.v, c.walk);
  }
  return out;
}

using choice_key = std::tuple<cost_t, std::uint32_t, std::size_t, std::size_t,
                              vertex_id, vertex_id>;

choice_key key_of(std::uint32_t driver_id, mp_choice const& mp,
                  insertion const& ins) {
  return {ins.delta, driver_id, ins.pickup_after, ins.dropoff_after, mp.pi, mp.de};
}

}  // namespace

std::vector<mp_choice> candidate_pairs(policy const p,
                                       dispatch_context const& ctx,
                                       request const& r) {
  if (p != policy::greedy_dp && ctx.mc == nullptr) {
    throw config_error{"meeting-point candidates required for policy " +
                       std::string{to_string(p)}};
  }
  if (uses_hmpo(p) && ctx.hmpo == nullptr) {
    throw config_error{"HMPO graph required for policy " + std::string{to_string(p)}};
  }
  auto const src = endpoint_options(p, ctx, r.s, r.no_walk);
  auto const dst = endpoint_options(p, ctx, r.e, r.no_walk);
  std::vector<mp_choice> out;
  for (auto const& [pi, wp] : src) {
    for (auto const& [de, wd] : dst) {
      if (pi != de) {
        out.push_back({pi, wp, de, wd});
      }
    }
  }
  return out;
}

bool dead_vertices::dead(vertex_id const v, time_ms const start) const {
  auto const it = dv_.find(v);
  return it != dv_.end() && it->second <= start;
}

void dead_vertices::mark(vertex_id const v, time_ms const start) {
  auto const [it, fresh] = dv_.emplace(v, start);
  if (!fresh) {
    it->second = std::min(it->second, start);
  }
}

std::optional<std::pair<mp_choice, insertion>> smdb_insert(
    driver const& d, request const& r, std::vector<mp_choice> const& pairs,
    smd_tables const& smd, dead_vertices& dv, distance_oracle const& sp,
    cost_weights const w, time_ms const now, dispatch_stats* stats) {
  auto const start = d.start_time(now);
  if (dv.dead(d.loc, start)) {
    if (stats != nullptr) {
      ++stats->drivers_pruned;
    }
    return std::nullopt;
  }
  auto const n = d.plan.stops.size();
  auto max_after = n;
  auto const& entry = smd.entries[r.s];
  if (entry.valid() && !r.no_walk) {
    for (auto idx = std::size_t{0}; idx <= n; ++idx) {
      auto const v = idx == 0U ? d.loc : d.plan.stops[idx - 1U].v;
      auto const t = idx == 0U ? start : d.plan.dep[idx - 1U];
      if (entry.exempt(v)) {
        continue;
      }
      auto const lb = bound_other_candidates(smd, r.s, sp(v, entry.checker));
      // Strictly later than tp: arriving exactly at tp is still feasible.
      if (add_dist(t, lb) > r.tp) {
        if (idx == 0U) {
          dv.mark(d.loc, start);
          if (stats != nullptr) {
            ++stats->drivers_pruned;
          }
          return std::nullopt;
        }
        max_after = idx - 1U;
        if (stats != nullptr) {
          stats->pickups_pruned += n - max_after;
        }
        break;
      }
    }
  }

  std::optional<std::pair<mp_choice, insertion>> best;
  for (auto const& mp : pairs) {
    if (stats != nullptr) {
      ++stats->insertions_tried;
    }
    auto const ins = try_insert(d, r, mp, max_after, now, sp, w);
    if (ins && (!best || key_of(d.id, mp, *ins) < key_of(d.id, best->first, best->second))) {
      best = std::pair{mp, *ins};
    }
  }
  return best;
}

decision assign(policy const p, dispatch_context const& ctx,
                std::vector<driver> const& fleet,
                std::vector<std::size_t> const& drivers, request const& r,
                time_ms const now, dispatch_stats* stats) {
  if (now < r.tr) {
    throw std::logic_error{"request evaluated before its release time"};
  }
  if (p == policy::smdb && ctx.smd == nullptr) {
    throw config_error{"SMD tables required for policy smdb"};
  }
  auto const pairs = candidate_pairs(p, ctx, r);
  decision best;
  std::optional<choice_key> best_key;
  auto const offer = [&](std::size_t idx, mp_choice const& mp, insertion const& ins) {
    auto const k = key_of(fleet[idx].id, mp, ins);
    if (!best_key || k < *best_key) {
      best_key = k;
      best = decision{true, idx, mp, ins};
    }
  };

  dead_vertices dv;
  for (auto const idx : drivers) {
    auto const& d = fleet[idx];
    if (stats != nullptr) {
      ++stats->drivers_considered;
    }
    if (p == policy::smdb) {
      if (auto const got = smdb_insert(d, r, pairs, *ctx.smd, dv, ctx.sp, ctx.w, now, stats)) {
        offer(idx, got->first, got->second);
      }
      continue;
    }
    for (auto const& mp : pairs) {
      if (stats != nullptr) {
        ++stats->insertions_tried;
      }
      auto const ins = try_insert(d, r, mp, d.plan.stops.size(), now, ctx.sp, ctx.w);
      if (!ins) {
        continue;
      }
      if (p == policy::fs) {
        return decision{true, idx, mp, *ins};
      }
      offer(idx, mp, *ins);
    }
  }
  return best;
}

}  // namespace morp
