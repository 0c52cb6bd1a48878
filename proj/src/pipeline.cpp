#include <boost/crc.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "morp/csv.hpp"
#include "morp/sim.hpp"

namespace fs = std::filesystem;

namespace morp {

artifacts preprocess(road_network net, prep_params const& params) {
  artifacts a;
  a.net = std::move(net);
  a.params = params;
  auto const& g = a.net;
  a.conv = compute_convenience(g, params.n_r);
  a.mc = select_candidates(g, a.conv, params.candidates);
  a.dvs = select_defective(g, a.conv, a.mc);
  a.ms = build_serving_sets(a.mc, a.dvs.defective);

  std::vector<char> universe(g.size(), 0);
  std::vector<time_ms> weight(g.size());
  for (auto v = vertex_id{0}; v != g.size(); ++v) {
    universe[v] = g.in_foot(v) ? 1 : 0;
    weight[v] = a.conv.ec_sum(v);
  }
  a.cover = partial_set_cover(a.ms, universe, params.epsilon, weight);
  pruned_graph base{g, a.dvs.defective};
  a.v_co = complete_k_skip(base, a.cover.cover, a.cover.cost, params.k,
                           params.epsilon, a.ms, universe);
  a.hmpo = build_super_edges(std::move(base), a.v_co, params.k);
  query_engine const q{a.hmpo};
  a.smd = hmdg(a.hmpo, a.mc, q);
  return a;
}

void write_network(std::ostream& nodes, std::ostream& edges,
                   road_network const& net) {
  nodes << "id,lat,lon\n";
  nodes.precision(10);
  for (auto v = vertex_id{0}; v != net.size(); ++v) {
    nodes << net.name(v) << ',' << net.lat(v) << ',' << net.lon(v) << '\n';
  }
  edges << "from,to,mode,travel_seconds\n";
  for (auto const& e : net.raw_edges()) {
    edges << net.name(e.from) << ',' << net.name(e.to) << ','
          << (e.m == mode::car ? "car" : "foot") << ',' << format_seconds(e.w)
          << '\n';
  }
}

namespace {

std::uint32_t crc_of_file(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  if (!in) {
    throw std::runtime_error{"cannot open " + p.string()};
  }
  std::string const bytes{std::istreambuf_iterator<char>{in}, {}};
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::ofstream open_out(fs::path const& p) {
  std::ofstream out{p};
  if (!out) {
    throw std::runtime_error{"cannot write " + p.string()};
  }
  return out;
}

std::ifstream open_in(fs::path const& p) {
  std::ifstream in{p};
  if (!in) {
    throw config_error{"missing artifact " + p.string()};
  }
  return in;
}

void write_edges(fs::path const& p, road_network const& net,
                 std::vector<super_edge> const& es) {
  auto out = open_out(p);
  out << "from,to,cost_seconds\n";
  for (auto const& e : es) {
    out << net.name(e.from) << ',' << net.name(e.to) << ','
        << format_seconds(e.cost) << '\n';
  }
}

std::vector<super_edge> read_edges(fs::path const& p, road_network const& net) {
  auto in = open_in(p);
  std::vector<super_edge> es;
  delimited_reader r{in, ','};
  std::vector<std::string_view> f;
  r.next(f);
  while (r.next(f)) {
    if (f.size() != 3) {
      throw parse_error{"expected 3 fields in " + p.string(), r.line()};
    }
    es.push_back({net.id(f[0]), net.id(f[1]), parse_seconds(f[2])});
  }
  return es;
}

std::map<std::string, std::string> read_manifest(fs::path const& p) {
  auto in = open_in(p);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto const eq = line.find('=');
    if (eq == std::string::npos) {
      continue;
    }
    kv[std::string{trim(std::string_view{line}.substr(0, eq))}] =
        std::string{trim(std::string_view{line}.substr(eq + 1))};
  }
  return kv;
}

}  // namespace

void write_artifacts(std::string const& dir, artifacts const& a,
                     std::string const& nodes_path,
                     std::string const& edges_path) {
  fs::path const d{dir};
  fs::create_directories(d);
  fs::copy_file(nodes_path, d / "nodes.csv", fs::copy_options::overwrite_existing);
  fs::copy_file(edges_path, d / "edges.csv", fs::copy_options::overwrite_existing);
  auto const& net = a.net;
  auto const& p = a.params;

  std::size_t n_core = 0U, n_sub = 0U, n_de = 0U;
  for (auto const l : a.hmpo.levels) {
    (l == level::core ? n_core : l == level::sub ? n_sub : n_de) += 1U;
  }
  {
    auto out = open_out(d / "manifest.txt");
    out << "k = " << p.k << '\n'
        << "epsilon = " << p.epsilon << '\n'
        << "n_r = " << p.n_r << '\n'
        << "d_m = " << format_seconds(p.candidates.d_m) << '\n'
        << "thr_cs = " << format_seconds(p.candidates.thr_cs) << '\n'
        << "nc_m = " << p.candidates.nc_m << '\n'
        << "alpha_milli = " << p.candidates.alpha_milli << '\n'
        << "beta_milli = " << p.candidates.beta_milli << '\n'
        << "nodes_crc32 = " << crc_of_file(nodes_path) << '\n'
        << "edges_crc32 = " << crc_of_file(edges_path) << '\n'
        << "vertices = " << net.size() << '\n'
        << "core = " << n_core << '\n'
        << "sub = " << n_sub << '\n'
        << "defective = " << n_de << '\n'
        << "seed_cover = " << a.cover.cover.size() << '\n'
        << "e_cc = " << a.hmpo.e_cc.size() << '\n'
        << "e_cs = " << a.hmpo.e_cs.size() << '\n'
        << "e_sc = " << a.hmpo.e_sc.size() << '\n'
        << "e_ss = " << a.hmpo.e_ss.size() << '\n';
  }
  {
    auto out = open_out(d / "convenience.csv");
    write_convenience(out, net, a.conv);
  }
  {
    auto out = open_out(d / "candidates.txt");
    write_candidates(out, net, a.mc);
  }
  {
    auto out = open_out(d / "partition.csv");
    out << "vertex,level\n";
    for (auto v = vertex_id{0}; v != net.size(); ++v) {
      out << net.name(v) << ',' << to_string(a.hmpo.levels[v]) << '\n';
    }
  }
  {
    auto out = open_out(d / "cover.csv");
    out << "vertex,cost,seed\n";
    std::vector<char> seed(net.size(), 0);
    for (auto const v : a.cover.cover) {
      seed[v] = 1;
    }
    for (auto v = vertex_id{0}; v != net.size(); ++v) {
      if (a.cover.cost[v] == kInfCount && !seed[v]) {
        continue;
      }
      out << net.name(v) << ','
          << (a.cover.cost[v] == kInfCount ? std::string{"inf"}
                                           : std::to_string(a.cover.cost[v]))
          << ',' << int{seed[v]} << '\n';
    }
  }
  write_edges(d / "e_cc.csv", net, a.hmpo.e_cc);
  write_edges(d / "e_cs.csv", net, a.hmpo.e_cs);
  write_edges(d / "e_sc.csv", net, a.hmpo.e_sc);
  write_edges(d / "e_ss.csv", net, a.hmpo.e_ss);
  {
    auto out = open_out(d / "smd.csv");
    write_smd(out, net, a.smd);
  }
  {
    auto out = open_out(d / "ne_index.txt");
    write_ne_index(out, net, a.smd);
  }
}

artifacts read_artifacts(std::string const& dir) {
  fs::path const d{dir};
  auto const kv = read_manifest(d / "manifest.txt");
  auto const get = [&](std::string const& k) {
    auto const it = kv.find(k);
    if (it == kv.end()) {
      throw config_error{"manifest lacks '" + k + "'"};
    }
    return it->second;
  };
  if (std::to_string(crc_of_file(d / "nodes.csv")) != get("nodes_crc32") ||
      std::to_string(crc_of_file(d / "edges.csv")) != get("edges_crc32")) {
    throw config_error{"network files in " + dir + " do not match the manifest"};
  }

  artifacts a;
  a.net = load_network_files((d / "nodes.csv").string(), (d / "edges.csv").string());
  auto const& net = a.net;
  auto& p = a.params;
  p.k = static_cast<unsigned>(std::stoul(get("k")));
  p.epsilon = std::stod(get("epsilon"));
  p.n_r = static_cast<unsigned>(std::stoul(get("n_r")));
  p.candidates.d_m = parse_seconds(get("d_m"));
  p.candidates.thr_cs = parse_seconds(get("thr_cs"));
  p.candidates.nc_m = static_cast<unsigned>(std::stoul(get("nc_m")));
  p.candidates.alpha_milli = std::stoll(get("alpha_milli"));
  p.candidates.beta_milli = std::stoll(get("beta_milli"));

  {
    auto in = open_in(d / "convenience.csv");
    a.conv = read_convenience(in, net, p.n_r);
  }
  {
    auto in = open_in(d / "candidates.txt");
    a.mc = read_candidates(in, net, a.conv, p.candidates);
  }

  a.dvs.defective.assign(net.size(), 0);
  a.v_co.assign(net.size(), 0);
  {
    auto in = open_in(d / "partition.csv");
    delimited_reader r{in, ','};
    std::vector<std::string_view> f;
    r.next(f);
    while (r.next(f)) {
      if (f.size() != 2) {
        throw parse_error{"expected 'vertex,level'", r.line()};
      }
      auto const v = net.id(f[0]);
      if (f[1] == "defective") {
        a.dvs.defective[v] = 1;
      } else if (f[1] == "core") {
        a.v_co[v] = 1;
      } else if (f[1] != "sub") {
        throw parse_error{"unknown level", r.line()};
      }
    }
  }
  a.ms = build_serving_sets(a.mc, a.dvs.defective);
  a.cover.cost.assign(net.size(), kInfCount);
  {
    auto in = open_in(d / "cover.csv");
    delimited_reader r{in, ','};
    std::vector<std::string_view> f;
    r.next(f);
    while (r.next(f)) {
      auto const v = net.id(f[0]);
      if (f[1] != "inf") {
        a.cover.cost[v] = std::stoul(std::string{f[1]});
      }
      if (f[2] == "1") {
        a.cover.cover.push_back(v);
      }
    }
  }

  auto& h = a.hmpo;
  h.k = p.k;
  h.base = pruned_graph{net, a.dvs.defective};
  h.levels.resize(net.size());
  for (auto v = vertex_id{0}; v != net.size(); ++v) {
    h.levels[v] = a.dvs.defective[v] ? level::defective
                  : a.v_co[v]        ? level::core
                                     : level::sub;
  }
  h.e_cc = read_edges(d / "e_cc.csv", net);
  h.e_cs = read_edges(d / "e_cs.csv", net);
  h.e_sc = read_edges(d / "e_sc.csv", net);
  h.e_ss = read_edges(d / "e_ss.csv", net);
  h.index();

  auto smd_in = open_in(d / "smd.csv");
  auto ne_in = open_in(d / "ne_index.txt");
  a.smd = read_smd(smd_in, ne_in, net);
  return a;
}

}  // namespace morp
