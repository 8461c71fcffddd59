#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pco/analysis.hpp"
#include "pco/config.hpp"
#include "pco/engine.hpp"
#include "pco/graph_io.hpp"
#include "pco/oracles.hpp"

namespace pco {

namespace exp_detail {

inline std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + (dir / name).string());
  return os;
}

inline void write_manifest(const ExperimentSpec& spec, const std::string& command) {
  nlohmann::json m = spec.resolved;
  m["command"] = command;
  auto os = open_out(spec.output_dir, "manifest.json");
  os << m.dump(2) << "\n";
}

inline void write_series_csv(std::ofstream& os, const std::string& header,
                             const std::vector<std::pair<double, double>>& series) {
  os << header << "\n";
  for (const auto& [t, v] : series) os << format_double(t) << "," << format_double(v) << "\n";
}

inline std::vector<Phase> initial_phases(const ExperimentSpec& spec) {
  if (spec.init_phases) return *spec.init_phases;
  return sample_init_phases(spec.init, spec.sim.graphs.node_count(),
                            derive_seed(spec.master_seed, 0x696e6974));
}

inline double tail_median(const std::vector<std::pair<double, double>>& series, double from_t) {
  std::vector<double> vals;
  for (const auto& [t, v] : series)
    if (t >= from_t) vals.push_back(v);
  if (vals.empty()) return 0.0;
  std::sort(vals.begin(), vals.end());
  return vals[vals.size() / 2];
}

}  // namespace exp_detail

// run: one simulation; firings.csv, range.csv, summary.json.
inline Trace cmd_run(const ExperimentSpec& spec) {
  SimConfig cfg = spec.sim;
  cfg.init_phases = exp_detail::initial_phases(spec);
  Trace tr = simulate(cfg);

  auto fir = exp_detail::open_out(spec.output_dir, "firings.csv");
  fir << "time,node\n";
  for (const auto& [t, node] : tr.firings) fir << format_double(t) << "," << node << "\n";
  auto rng = exp_detail::open_out(spec.output_dir, "range.csv");
  exp_detail::write_series_csv(rng, "time,rho", tr.range_series);
  auto wnd = exp_detail::open_out(spec.output_dir, "window_range.csv");
  exp_detail::write_series_csv(wnd, "time,rho", tr.window_ranges);

  nlohmann::json summary;
  summary["converged"] = tr.converged_at.has_value();
  if (tr.converged_at) summary["converged_at"] = *tr.converged_at;
  summary["events_processed"] = tr.events_processed;
  summary["windows_used"] = tr.windows_used;
  summary["rho_initial"] = tr.window_ranges.empty() ? 0.0 : tr.window_ranges.front().second;
  summary["seed"] = spec.master_seed;
  // t* comparison where the PRC validates as S2 and the topology admits d
  try {
    S2Params s2 = validate_s2(cfg.prc, cfg.tau);
    auto d = coverage_depth(cfg.graphs, 0, cfg.graphs.node_count() * cfg.graphs.node_count());
    if (d) {
      ConvergenceReport rep = make_report(tr, s2, d);
      summary["basin_ok"] = rep.basin_ok;
      summary["d"] = *d;
      summary["t_star"] = *rep.t_star;
      summary["kappa"] = s2.kappa;
    }
  } catch (const NotS2&) {
    summary["s2"] = false;
  }
  auto os = exp_detail::open_out(spec.output_dir, "summary.json");
  os << summary.dump(2) << "\n";
  exp_detail::write_manifest(spec, "run");
  return tr;
}

// basin: Monte Carlo convergence fraction under the configured sampler.
inline BasinEstimate cmd_basin(const ExperimentSpec& spec) {
  BasinEstimate est = basin_monte_carlo(spec.sim, spec.init, spec.trials, spec.master_seed,
                                        spec.threads);
  auto os = exp_detail::open_out(spec.output_dir, "basin.csv");
  os << "trials,converged,errors,fraction,ci95\n";
  os << est.trials << "," << est.converged_count << "," << est.error_count << ","
     << format_double(est.fraction) << "," << format_double(est.ci95_halfwidth) << "\n";
  exp_detail::write_manifest(spec, "basin");
  return est;
}

// sweep: convergence fraction vs minimum indegree on random k-in graphs.
inline std::vector<SweepRow> cmd_sweep(const ExperimentSpec& spec, int n,
                                       const std::vector<int>& k_values) {
  std::vector<SweepRow> rows =
      indegree_convergence_sweep(n, k_values, spec.trials, spec.sim, spec.master_seed, spec.threads);
  auto os = exp_detail::open_out(spec.output_dir, "sweep.csv");
  os << "parameter,trials,converged,fraction,ci95\n";
  for (const auto& r : rows)
    os << r.k << "," << r.trials << "," << r.converged << "," << format_double(r.fraction) << ","
       << format_double(r.ci95_halfwidth) << "\n";
  exp_detail::write_manifest(spec, "sweep");
  return rows;
}

// oracle-check: engine vs closed-form maps; nonzero deviation budget 1e-9.
struct OracleReport {
  OracleResult sr;
  OracleResult sf;
  bool pass = false;
};

inline OracleReport cmd_oracle_check(const ExperimentSpec& spec, int cases = 100,
                                     double tau_skew = 0.0) {
  OracleReport rep;
  rep.sr = sr_oracle_suite(cases, derive_seed(spec.master_seed, 1), tau_skew);
  rep.sf = sf_oracle_suite(cases, derive_seed(spec.master_seed, 2), tau_skew);
  rep.pass = rep.sr.max_deviation <= 1e-9 && rep.sf.max_deviation <= 1e-9;
  nlohmann::json j;
  j["sr_cases"] = rep.sr.cases;
  j["sr_max_deviation"] = rep.sr.max_deviation;
  j["sf_cases"] = rep.sf.cases;
  j["sf_max_deviation"] = rep.sf.max_deviation;
  j["pass"] = rep.pass;
  auto os = exp_detail::open_out(spec.output_dir, "oracle_report.json");
  os << j.dump(2) << "\n";
  exp_detail::write_manifest(spec, "oracle-check");
  return rep;
}

// figure2: basin comparison of limited-reset vs SR and SF on the
// binary-tree-plus-triangle under uniform random initial conditions.
struct Figure2Row {
  std::string prc;
  BasinEstimate est;
};

inline std::vector<Figure2Row> cmd_figure2(const ExperimentSpec& spec, int depth = 3) {
  std::vector<Figure2Row> rows;
  SimConfig base = spec.sim;
  base.graphs = GraphSequence(gen_binary_tree_triangle(depth));
  InitSampler uniform{InitSampler::Mode::Uniform, 0.0};
  for (const std::string name : {"limited-reset", "sr", "sf"}) {
    SimConfig cfg = base;
    cfg.prc = prc_preset(name, cfg.tau);
    rows.push_back({name, basin_monte_carlo(cfg, uniform, spec.trials,
                                            derive_seed(spec.master_seed, std::hash<std::string>{}(name)),
                                            spec.threads)});
  }
  auto os = exp_detail::open_out(spec.output_dir, "figure2.csv");
  os << "prc,trials,converged,errors,fraction,ci95\n";
  for (const auto& r : rows)
    os << r.prc << "," << r.est.trials << "," << r.est.converged_count << "," << r.est.error_count
       << "," << format_double(r.est.fraction) << "," << format_double(r.est.ci95_halfwidth) << "\n";
  exp_detail::write_manifest(spec, "figure2");
  return rows;
}

// figure3: S2 vs Mirollo-Strogatz sync-error series on a seeded random
// geometric graph.  Setting A: uniform 5% delay, no noise.  Setting B:
// 2.5% frequency error and 2.5% delay jitter.
struct Figure3Series {
  std::string prc;
  std::string setting;
  std::vector<std::pair<double, double>> series;
  double tail_median = 0.0;
  bool converged = false;
};

inline std::vector<Figure3Series> cmd_figure3(const ExperimentSpec& spec, int n = 100,
                                              double radius = 0.2) {
  std::vector<Figure3Series> out;
  DirectedGraph rgg = gen_random_geometric(n, radius, derive_seed(spec.master_seed, 0x52474700));
  std::vector<Phase> inits = sample_init_phases(InitSampler{InitSampler::Mode::Uniform, 0.0}, n,
                                                derive_seed(spec.master_seed, 0x696e6974));
  struct Setting {
    std::string name;
    double freq_error, delay_jitter;
  };
  const Setting settings[] = {{"A", 0.0, 0.0}, {"B", 0.025, 0.025}};
  for (const auto& st : settings) {
    for (const std::string prc_name : {"s2-default", "ms"}) {
      SimConfig cfg = spec.sim;
      cfg.graphs = GraphSequence(rgg);
      cfg.tau = 0.05;  // the figure's uniform 5% delay
      cfg.prc = prc_preset(prc_name, cfg.tau);
      cfg.freq_error = st.freq_error;
      cfg.delay_jitter = st.delay_jitter;
      cfg.init_phases = inits;
      cfg.seed = derive_seed(spec.master_seed, std::hash<std::string>{}(st.name + prc_name));
      cfg.sample_interval = spec.sim.sample_interval > 0 ? spec.sim.sample_interval : 0.5;
      cfg.stop_on_convergence = false;
      Trace tr = simulate(cfg);
      Figure3Series s;
      s.prc = prc_name;
      s.setting = st.name;
      s.series = sync_error_series(tr);
      s.tail_median = exp_detail::tail_median(s.series, cfg.horizon * 0.5);
      s.converged = tr.converged_at.has_value();
      auto os = exp_detail::open_out(spec.output_dir,
                                     "figure3_" + st.name + "_" + prc_name + ".csv");
      exp_detail::write_series_csv(os, "time,sync_error", s.series);
      out.push_back(std::move(s));
    }
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : out)
    j.push_back({{"prc", s.prc},
                 {"setting", s.setting},
                 {"tail_median", s.tail_median},
                 {"converged", s.converged}});
  auto os = exp_detail::open_out(spec.output_dir, "figure3_summary.json");
  os << j.dump(2) << "\n";
  exp_detail::write_manifest(spec, "figure3");
  return out;
}

}  // namespace pco
