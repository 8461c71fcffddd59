// Scenario runner for the pulse-coupled-oscillator toolkit.
// Exit codes: 0 success/pass, 1 assertion-style failure, 2 usage/config error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pco/pco.hpp"

namespace {

pco::ExperimentSpec load_spec(const std::string& config_path, std::uint64_t* seed_override,
                              int* trials_override, std::string* out_override,
                              int* threads_override) {
  pco::ExperimentSpec spec;
  if (!config_path.empty()) {
    spec = pco::parse_config_file(config_path);
  } else {
    spec = pco::parse_config(nlohmann::json::object());
  }
  if (seed_override) {
    spec.master_seed = *seed_override;
    spec.sim.seed = *seed_override;
    spec.resolved["seed"] = *seed_override;
  }
  if (trials_override && *trials_override > 0) {
    spec.trials = *trials_override;
    spec.resolved["trials"] = *trials_override;
  }
  if (threads_override && *threads_override > 0) {
    spec.threads = *threads_override;
    spec.resolved["threads"] = *threads_override;
  }
  if (out_override && !out_override->empty()) spec.output_dir = *out_override;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pco: exact event-driven simulation of pulse-coupled oscillators with delays"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  bool have_seed = false;
  std::uint64_t seed = 0;
  int trials = 0, threads = 0;
  app.add_option("--config,-c", config_path, "experiment config (JSON)");
  app.add_option("--out,-o", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "master seed (overrides config)")->each([&](const std::string&) {
    have_seed = true;
  });
  app.add_option("--trials", trials, "Monte Carlo trials (overrides config)");
  app.add_option("--threads", threads, "parallel trial workers (overrides config)");

  auto* c_run = app.add_subcommand("run", "single simulation; emits firings/range CSV + summary");
  auto* c_sweep = app.add_subcommand("sweep", "convergence fraction vs minimum indegree");
  int sweep_n = 12;
  std::vector<int> sweep_k{1, 2, 3, 4};
  c_sweep->add_option("--n", sweep_n, "node count for the random k-in graphs");
  c_sweep->add_option("--k", sweep_k, "indegree values to sweep");
  auto* c_basin = app.add_subcommand("basin", "Monte Carlo basin estimate");
  auto* c_oracle = app.add_subcommand("oracle-check", "engine vs closed-form map equivalence");
  int oracle_cases = 100;
  double corrupt_tau = 0.0;
  c_oracle->add_option("--cases", oracle_cases, "random cases per suite");
  c_oracle->add_option("--corrupt-tau", corrupt_tau,
                       "skew the map's tau by this amount (negative control)");
  auto* c_fig2 = app.add_subcommand("figure2", "basin comparison on the tree-plus-triangle");
  int fig2_depth = 3;
  c_fig2->add_option("--depth", fig2_depth, "binary tree depth");
  auto* c_fig3 = app.add_subcommand("figure3", "sensor-net sync-error comparison on an RGG");
  int fig3_n = 100;
  double fig3_radius = 0.2;
  c_fig3->add_option("--n", fig3_n, "RGG node count");
  c_fig3->add_option("--radius", fig3_radius, "RGG connection radius");
  auto* c_gen = app.add_subcommand("gen-graph", "write a generated graph in edge-list format");
  std::string gen_file = "graph.txt";
  c_gen->add_option("--file", gen_file, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pco::ExperimentSpec spec = load_spec(config_path, have_seed ? &seed : nullptr, &trials,
                                         &out_dir, &threads);
    if (c_run->parsed()) {
      pco::Trace tr = pco::cmd_run(spec);
      std::cout << "events=" << tr.events_processed
                << " converged=" << (tr.converged_at ? "yes" : "no");
      if (tr.converged_at) std::cout << " at t=" << *tr.converged_at;
      std::cout << "\n";
    } else if (c_basin->parsed()) {
      pco::BasinEstimate est = pco::cmd_basin(spec);
      std::cout << "fraction=" << est.fraction << " (" << est.converged_count << "/"
                << est.trials << "), ci95=" << est.ci95_halfwidth << "\n";
    } else if (c_sweep->parsed()) {
      for (const auto& r : pco::cmd_sweep(spec, sweep_n, sweep_k))
        std::cout << "k=" << r.k << " fraction=" << r.fraction << "\n";
    } else if (c_oracle->parsed()) {
      pco::OracleReport rep = pco::cmd_oracle_check(spec, oracle_cases, corrupt_tau);
      std::cout << "sr max deviation: " << rep.sr.max_deviation << "\n"
                << "sf max deviation: " << rep.sf.max_deviation << "\n"
                << (rep.pass ? "PASS" : "FAIL") << "\n";
      return rep.pass ? 0 : 1;
    } else if (c_fig2->parsed()) {
      for (const auto& r : pco::cmd_figure2(spec, fig2_depth))
        std::cout << r.prc << ": " << r.est.fraction << " +/- " << r.est.ci95_halfwidth << "\n";
    } else if (c_fig3->parsed()) {
      for (const auto& s : pco::cmd_figure3(spec, fig3_n, fig3_radius))
        std::cout << "setting " << s.setting << " " << s.prc << ": tail median "
                  << s.tail_median << (s.converged ? " (converged)" : "") << "\n";
    } else if (c_gen->parsed()) {
      if (spec.sim.graphs.is_static()) {
        pco::write_graph_file(gen_file, spec.sim.graphs.at_window(0));
      } else {
        pco::write_sequence_dir(gen_file, spec.sim.graphs);
      }
      std::cout << "wrote " << gen_file << "\n";
    }
  } catch (const pco::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pco::PreconditionViolated& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
