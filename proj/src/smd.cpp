#include "morp/smd.hpp"

#include <algorithm>

#include "morp/csv.hpp"

namespace morp {

bool smd_entry::exempt(vertex_id const v) const {
  return std::binary_search(ne.begin(), ne.end(), v);
}

lmd_result local_max_difference(core_cost_table const& t) {
  auto const m = t.candidates.size();
  lmd_result r;
  r.lmd.assign(m, 0);
  for (auto const& row : t.cc) {
    auto const lo = *std::min_element(row.begin(), row.end());
    if (lo == kInf) {
      continue;
    }
    for (auto j = 0U; j != m; ++j) {
      if (row[j] == kInf) {
        r.lmd[j] = kInf;
      } else if (r.lmd[j] != kInf) {
        r.lmd[j] = std::max(r.lmd[j], row[j] - lo);
      }
    }
  }
  for (auto j = 1U; j < m; ++j) {
    auto const b = r.checker;
    if (r.lmd[j] < r.lmd[b] ||
        (r.lmd[j] == r.lmd[b] && t.candidates[j] < t.candidates[b])) {
      r.checker = j;
    }
  }
  return r;
}

std::vector<vertex_id> effective_candidates(candidate_tables const& mc,
                                            hmpo_graph const& h,
                                            vertex_id const u) {
  std::vector<vertex_id> out;
  for (auto const& c : mc.mc[u]) {
    if (!h.is_defective(c.v)) {
      out.push_back(c.v);
    }
  }
  return out;
}

core_cost_table gather_core_costs(hmpo_graph const& h, query_engine const& q,
                                  std::vector<vertex_id> const& candidates) {
  core_cost_table t;
  t.candidates = candidates;
  for (auto const v : candidates) {
    auto const& in = h.is_core(v) ? h.cc_in : h.cs_in;
    for (auto const& a : in.out(v)) {
      t.vc.push_back(a.to);
    }
  }
  std::sort(t.vc.begin(), t.vc.end());
  t.vc.erase(std::unique(t.vc.begin(), t.vc.end()), t.vc.end());
  for (auto const c : t.vc) {
    auto& row = t.cc.emplace_back();
    for (auto const v : candidates) {
      row.push_back(q.query(c, v));
    }
  }
  return t;
}

smd_tables hmdg(hmpo_graph const& h, candidate_tables const& mc,
                query_engine const& q) {
  auto const n = h.size();
  smd_tables out;
  out.entries.resize(n);

  for (auto u = vertex_id{0}; u != n; ++u) {
    auto const cands = effective_candidates(mc, h, u);
    if (cands.empty()) {
      continue;
    }
    auto& entry = out.entries[u];

    // Sources with a super-edge straight into a sub-level candidate never
    // pass a surrounding core vertex, and the candidates themselves trivially
    // break the bound, so both are exempt.
    for (auto const v : cands) {
      entry.ne.push_back(v);
    }
    for (auto const v : cands) {
      auto const& in = h.is_core(v) ? h.sc_in : h.ss_in;
      for (auto const& a : in.out(v)) {
        entry.ne.push_back(a.to);
      }
    }
    std::sort(entry.ne.begin(), entry.ne.end());
    entry.ne.erase(std::unique(entry.ne.begin(), entry.ne.end()), entry.ne.end());

    if (cands.size() == 1U) {
      entry.checker = cands.front();
      entry.smd = 0;
      continue;
    }

    auto const t = gather_core_costs(h, q, cands);
    auto const r = local_max_difference(t);
    entry.checker = cands[r.checker];
    entry.smd = r.lmd[r.checker];
  }
  return out;
}

time_ms bound_other_candidates(smd_tables const& t, vertex_id const owner,
                               time_ms const checker_distance) {
  auto const& e = t.entries[owner];
  if (!e.valid() || checker_distance == kInf) {
    return e.valid() ? kInf : 0;
  }
  return checker_distance - e.smd;
}

void write_smd(std::ostream& out, road_network const& net, smd_tables const& t) {
  out << "vertex,checker,smd_seconds\n";
  for (auto u = vertex_id{0}; u != t.entries.size(); ++u) {
    auto const& e = t.entries[u];
    if (e.checker == kNoVertex) {
      continue;
    }
    out << net.name(u) << ',' << net.name(e.checker) << ','
        << format_seconds(e.smd) << '\n';
  }
}

void write_ne_index(std::ostream& out, road_network const& net,
                    smd_tables const& t) {
  for (auto u = vertex_id{0}; u != t.entries.size(); ++u) {
    auto const& e = t.entries[u];
    if (e.checker == kNoVertex) {
      continue;
    }
    out << net.name(u) << ';';
    for (auto i = 0U; i != e.ne.size(); ++i) {
      out << (i == 0U ? "" : ",") << net.name(e.ne[i]);
    }
    out << '\n';
  }
}

smd_tables read_smd(std::istream& smd_in, std::istream& ne_in,
                    road_network const& net) {
  smd_tables t;
  t.entries.resize(net.size());
  std::vector<std::string_view> f;
  delimited_reader r{smd_in, ','};
  r.next(f);  // header
  while (r.next(f)) {
    if (f.size() != 3) {
      throw parse_error{"expected 3 fields", r.line()};
    }
    auto& e = t.entries[net.id(f[0])];
    e.checker = net.id(f[1]);
    e.smd = parse_seconds(f[2]);
  }
  delimited_reader nr{ne_in, ';'};
  while (nr.next(f)) {
    if (f.size() != 2) {
      throw parse_error{"expected 'vertex;sources'", nr.line()};
    }
    auto& e = t.entries[net.id(f[0])];
    if (!f[1].empty()) {
      for (auto const s : split(f[1], ',')) {
        e.ne.push_back(net.id(s));
      }
    }
    std::sort(e.ne.begin(), e.ne.end());
  }
  return t;
}

}  // namespace morp
