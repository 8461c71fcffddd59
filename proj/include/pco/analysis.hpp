#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "pco/engine.hpp"
#include "pco/errors.hpp"
#include "pco/graph.hpp"
#include "pco/phase.hpp"
#include "pco/prc.hpp"

namespace pco {

// rho0(x, y) = min(x - tau, 1 - y + tau).
inline double rho0(double x, double y, double tau) {
  return std::min(x - tau, 1.0 - y + tau);
}

// Proven convergence-time bound t* = rho * d / min(tau, kappa).
inline double t_star(double rho, int d, double tau, double kappa) {
  if (!(rho >= 0.0 && d >= 1 && tau > 0.0 && kappa > 0.0))
    throw PreconditionViolated("t_star requires rho >= 0, d >= 1, tau > 0, kappa > 0");
  return rho * d / std::min(tau, kappa);
}

struct ConvergenceReport {
  bool converged = false;
  std::optional<double> time;
  double rho_initial = 0.0;
  bool basin_ok = false;
  std::optional<double> t_star;
  std::optional<int> d;
  int windows_used = 0;
};

// First window-boundary time where the circular range drops below tol and
// every later observation within the following 1+tau stays below it.
inline std::optional<double> detect_convergence(const Trace& trace, double tol, double tau) {
  std::vector<std::pair<double, double>> series = trace.window_ranges;
  series.insert(series.end(), trace.range_series.begin(), trace.range_series.end());
  std::sort(series.begin(), series.end());
  for (const auto& [t, rho] : trace.window_ranges) {
    if (rho >= tol) continue;
    bool holds = true;
    for (const auto& [t2, rho2] : series) {
      if (t2 <= t || t2 > t + 1.0 + tau + kTieTol) continue;
      if (rho2 >= tol) {
        holds = false;
        break;
      }
    }
    if (holds) return t;
  }
  return std::nullopt;
}

inline ConvergenceReport make_report(const Trace& trace, const S2Params& s2,
                                     std::optional<int> d) {
  ConvergenceReport r;
  r.converged = trace.converged_at.has_value();
  r.time = trace.converged_at;
  r.rho_initial = trace.window_ranges.empty() ? 0.0 : trace.window_ranges.front().second;
  double bound = basin_bound(s2.b0, s2.b1, s2.tau_ref);
  r.basin_ok = r.rho_initial < bound;
  r.d = d;
  if (d) r.t_star = t_star(r.rho_initial, *d, s2.tau_ref, s2.kappa);
  r.windows_used = trace.windows_used;
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo basin estimation.
// ---------------------------------------------------------------------------

struct BasinEstimate {
  int trials = 0;
  int converged_count = 0;
  int error_count = 0;
  double fraction = 0.0;
  double ci95_halfwidth = 0.0;
};

struct InitSampler {
  enum class Mode { Uniform, Window } mode = Mode::Uniform;
  double width = 0.0;  // window width (circular), Window mode only
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over master ^ index keeps per-trial streams independent.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::vector<Phase> sample_init_phases(const InitSampler& sampler, int n,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Phase> phases(n);
  if (sampler.mode == InitSampler::Mode::Uniform) {
    for (auto& p : phases) p = unif(rng);
  } else {
    double base = unif(rng);
    for (auto& p : phases) p = mod1(base + sampler.width * unif(rng));
  }
  return phases;
}

inline double normal_ci95_halfwidth(int converged, int trials) {
  if (trials <= 0) return 0.0;
  double p = static_cast<double>(converged) / trials;
  // normal approximation with continuity correction
  return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / trials) + 0.5 / trials;
}

// Runs `trials` independent simulations with per-trial derived seeds.
// Aggregation is count-based, so the result is independent of thread count.
inline BasinEstimate basin_monte_carlo(const SimConfig& config_template,
                                       const InitSampler& sampler, int trials,
                                       std::uint64_t master_seed, int threads = 1) {
  if (trials < 1) throw PreconditionViolated("basin_monte_carlo requires trials >= 1");
  int n = config_template.graphs.node_count();
  std::vector<signed char> outcome(trials, 0);  // 1 converged, 0 not, -1 error
  auto run_trial = [&](int t) {
    SimConfig cfg = config_template;
    cfg.seed = derive_seed(master_seed, 2 * static_cast<std::uint64_t>(t));
    cfg.init_phases = sample_init_phases(sampler, n, derive_seed(master_seed, 2 * t + 1));
    try {
      Trace tr = simulate(cfg);
      outcome[t] = tr.converged_at ? 1 : 0;
    } catch (const std::exception&) {
      outcome[t] = -1;
    }
  };
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) run_trial(t);
      });
    for (auto& th : pool) th.join();
  }
  BasinEstimate est;
  est.trials = trials;
  for (auto o : outcome) {
    if (o == 1) ++est.converged_count;
    if (o == -1) ++est.error_count;
  }
  est.fraction = static_cast<double>(est.converged_count) / trials;
  est.ci95_halfwidth = normal_ci95_halfwidth(est.converged_count, trials);
  return est;
}

// The sync-error metric: the sampled circular-range series.
inline std::vector<std::pair<double, double>> sync_error_series(const Trace& trace) {
  return trace.range_series;
}

// ---------------------------------------------------------------------------
// Adaptive sleep schedule.
// ---------------------------------------------------------------------------

struct SleepStep {
  int window_index;
  double b0;
  double b1;
};

// Start at B0 = B1 = 0.5+tau; every 2d windows step B0 down and B1 up by tau,
// stopping when B0 reaches 2*tau.  B1 is capped just below 1.
inline std::vector<SleepStep> sleep_schedule(double tau, int d) {
  if (!(tau > 0.0 && tau < 0.5)) throw PreconditionViolated("sleep_schedule requires tau in (0, 0.5)");
  if (d < 1) throw PreconditionViolated("sleep_schedule requires d >= 1");
  constexpr double kB1Cap = 1.0 - 1e-6;
  std::vector<SleepStep> steps;
  double b0 = 0.5 + tau, b1 = 0.5 + tau;
  int w = 0;
  steps.push_back({w, b0, b1});
  while (b0 > 2 * tau + kPhaseTol) {
    w += 2 * d;
    b0 = std::max(b0 - tau, 2 * tau);
    b1 = std::min(b1 + tau, kB1Cap);
    steps.push_back({w, b0, b1});
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Indegree sweep.
// ---------------------------------------------------------------------------

struct SweepRow {
  int k;
  int trials;
  int converged;
  double fraction;
  double ci95_halfwidth;
};

// Empirical convergence fraction vs minimum indegree for random k-in graphs,
// uniform initial conditions.
inline std::vector<SweepRow> indegree_convergence_sweep(int n, const std::vector<int>& k_values,
                                                        int trials, const SimConfig& base,
                                                        std::uint64_t master_seed,
                                                        int threads = 1) {
  std::vector<SweepRow> rows;
  for (int k : k_values) {
    SimConfig cfg = base;
    cfg.graphs = GraphSequence(gen_random_k_in(n, k, derive_seed(master_seed, 1000 + k)));
    BasinEstimate est = basin_monte_carlo(cfg, InitSampler{InitSampler::Mode::Uniform, 0.0},
                                          trials, derive_seed(master_seed, k), threads);
    rows.push_back({k, est.trials, est.converged_count, est.fraction, est.ci95_halfwidth});
  }
  return rows;
}

}  // namespace pco
