#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "morp/city.hpp"
#include "morp/sim.hpp"

namespace fs = std::filesystem;
using namespace morp;

namespace {

std::ofstream open_out(fs::path const& p) {
  std::ofstream out{p};
  if (!out) {
    throw std::runtime_error{"cannot write " + p.string()};
  }
  return out;
}

void load_config(std::string const& path, sim_config& c, prep_params* p) {
  if (path.empty()) {
    return;
  }
  std::ifstream in{path};
  if (!in) {
    throw config_error{"cannot open config " + path};
  }
  apply_config_text(c, p, in);
}

// Flags given on the command line are replayed as config text after the
// file so they win.
struct overrides {
  std::ostringstream text;
  void add(CLI::App& app, std::string const& flag, std::string const& key,
           std::string& slot) {
    app.add_option(flag, slot);
    keys.emplace_back(flag, key, &slot);
  }
  void collect(CLI::App const& app) {
    for (auto const& [flag, key, slot] : keys) {
      if (app.count(flag) != 0U) {
        text << key << " = " << *slot << '\n';
      }
    }
  }
  std::vector<std::tuple<std::string, std::string, std::string*>> keys;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meeting-point ridesharing dispatch toolkit"};
  app.require_subcommand(1);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "build MC, HMPO and SMD artifacts");
  std::string nodes, edges, out_dir, config;
  pre->add_option("--nodes", nodes)->required();
  pre->add_option("--edges", edges)->required();
  pre->add_option("--out", out_dir)->required();
  pre->add_option("--config", config);
  std::map<std::string, std::string> pre_vals;
  overrides pre_ov;
  for (auto const& [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--n-r", "n_r"}, {"--d-m", "d_m"}, {"--nc-m", "nc_m"},
           {"--thr-cs", "thr_cs"}, {"--epsilon", "epsilon"}, {"--k", "k"},
           {"--alpha", "alpha"}, {"--beta", "beta"}}) {
    pre_ov.add(*pre, flag, key, pre_vals[key]);
  }

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a dispatch simulation");
  std::string art_dir, req_file, sim_out, sim_config_file;
  bool no_grid = false;
  sim->add_option("--artifacts", art_dir)->required();
  sim->add_option("--requests", req_file)->required();
  sim->add_option("--out", sim_out)->required();
  sim->add_option("--config", sim_config_file);
  sim->add_flag("--no-grid", no_grid, "disable grid pruning");
  std::map<std::string, std::string> sim_vals;
  overrides sim_ov;
  for (auto const& [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--drivers", "drivers"}, {"--capacity", "capacity"},
           {"--policy", "policy"}, {"--e-r", "e_r"}, {"--alpha", "alpha"},
           {"--beta", "beta"}, {"--p-o", "p_o"}, {"--grid-density", "grid_density"},
           {"--seed", "seed"}, {"--cache", "query_cache_capacity"}}) {
    sim_ov.add(*sim, flag, key, sim_vals[key]);
  }

  // report
  auto* rep = app.add_subcommand("report", "merge run metrics into a table");
  std::vector<std::string> runs;
  std::string rep_out;
  rep->add_option("--runs", runs)->required();
  rep->add_option("--out", rep_out)->required();

  // gen-city
  auto* gen = app.add_subcommand("gen-city", "write a synthetic grid city");
  city_params cp;
  demand_params dp;
  std::string gen_out;
  double horizon_s = 3600.0;
  gen->add_option("--rows", cp.rows);
  gen->add_option("--cols", cp.cols);
  gen->add_option("--seed", cp.seed);
  gen->add_option("--requests", dp.count);
  gen->add_option("--horizon", horizon_s);
  gen->add_option("--max-demand", dp.max_demand);
  gen->add_option("--out", gen_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) {
      sim_config unused;
      prep_params p;
      load_config(config, unused, &p);
      pre_ov.collect(*pre);
      std::istringstream extra{pre_ov.text.str()};
      apply_config_text(unused, &p, extra);
      p.candidates.alpha_milli = unused.alpha_milli;
      p.candidates.beta_milli = unused.beta_milli;
      auto a = preprocess(load_network_files(nodes, edges), p);
      write_artifacts(out_dir, a, nodes, edges);
      std::cout << "vertices " << a.net.size() << ", defective "
                << a.dvs.members().size() << ", core "
                << std::count(a.v_co.begin(), a.v_co.end(), 1) << '\n';
    } else if (*sim) {
      sim_config c;
      load_config(sim_config_file, c, nullptr);
      sim_ov.collect(*sim);
      std::istringstream extra{sim_ov.text.str()};
      apply_config_text(c, nullptr, extra);
      if (no_grid) {
        c.use_grid = false;
      }
      auto const a = read_artifacts(art_dir);
      std::ifstream rin{req_file};
      if (!rin) {
        throw std::runtime_error{"cannot open " + req_file};
      }
      auto const stream = read_requests(rin, a.net);
      auto const res = run_simulation(a, stream, c);
      fs::create_directories(sim_out);
      auto log = open_out(fs::path{sim_out} / "log.csv");
      write_log(log, a.net, res.log, true);
      auto met = open_out(fs::path{sim_out} / "metrics.csv");
      write_metrics(met, c, res.m, fs::path{sim_out}.filename().string());
      std::cout << "served " << res.m.served << '/' << res.m.requests
                << ", unified cost " << format_cost(res.m.unified_cost) << '\n';
      if (res.m.unified_cost != res.m.recomputed_cost) {
        std::cerr << "ledger mismatch: recomputed "
                  << format_cost(res.m.recomputed_cost) << '\n';
        return 3;
      }
    } else if (*rep) {
      std::vector<std::string> files;
      for (auto const& r : runs) {
        files.push_back(fs::is_directory(r) ? (fs::path{r} / "metrics.csv").string() : r);
      }
      auto out = open_out(rep_out);
      report(files, out);
    } else if (*gen) {
      dp.seed = cp.seed;
      dp.horizon = static_cast<time_ms>(horizon_s * 1000.0);
      auto const net = make_city(cp);
      fs::create_directories(gen_out);
      auto n = open_out(fs::path{gen_out} / "nodes.csv");
      auto e = open_out(fs::path{gen_out} / "edges.csv");
      write_network(n, e, net);
      auto r = open_out(fs::path{gen_out} / "requests.csv");
      write_requests(r, net, make_requests(net, dp));
    }
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
