#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pco/analysis.hpp"
#include "pco/engine.hpp"
#include "pco/graph.hpp"
#include "pco/maps.hpp"
#include "pco/prc.hpp"

namespace pco {

// Random test-graph draws used by the oracle-equivalence suites.

inline DirectedGraph random_sc_aperiodic_digraph(int n, std::uint64_t seed, double p = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    DirectedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && unif(rng) < p) g.add_edge(i, j);
    if (!strongly_connected(g)) continue;
    if (!is_aperiodic(g)) continue;
    return g;
  }
  throw Unconnectable("random_sc_aperiodic_digraph: retry budget exhausted");
}

inline DirectedGraph random_connected_undirected(int n, std::uint64_t seed, double p = 0.45) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    DirectedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < p) g.add_undirected(i, j);
    if (strongly_connected(g)) return g;
  }
  throw Unconnectable("random_connected_undirected: retry budget exhausted");
}

struct OracleResult {
  int cases = 0;
  double max_deviation = 0.0;
};

// Engine window map vs the closed-form H on random in-basin states.
// `tau_skew` deliberately corrupts the tau handed to the map (negative control).
inline OracleResult sr_oracle_suite(int cases, std::uint64_t seed, double tau_skew = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double taus[] = {0.05, 0.1, 0.2};
  OracleResult res;
  for (int c = 0; c < cases; ++c) {
    int n = 3 + static_cast<int>(unif(rng) * 6);  // [3, 8]
    double tau = taus[c % 3];
    double b0 = 2 * tau + unif(rng) * (0.8 - 2 * tau);
    DirectedGraph g = random_sc_aperiodic_digraph(n, rng());
    double rho = 0.9 * rho0(b0, b0, tau);
    std::vector<double> phases(n);
    for (auto& p : phases) p = unif(rng) * rho;
    WindowMapResult wm = run_window_map(phases, g, PrcSpec{StrongReset{b0}}, tau, rng());
    std::vector<double> h = sr_time_map(wm.shifted_input, g, tau + tau_skew, b0);
    for (int i = 0; i < n; ++i)
      res.max_deviation = std::max(res.max_deviation, std::abs(h[i] - wm.phases[i]));
    ++res.cases;
  }
  return res;
}

// Engine first-firing times vs the lambda fixed point under strong firing.
inline OracleResult sf_oracle_suite(int cases, std::uint64_t seed, double tau_skew = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double taus[] = {0.05, 0.1, 0.2};
  OracleResult res;
  for (int c = 0; c < cases; ++c) {
    int n = 3 + static_cast<int>(unif(rng) * 6);
    double tau = taus[c % 3];
    double b0 = 2 * tau + unif(rng) * (0.8 - 2 * tau);
    DirectedGraph g = random_connected_undirected(n, rng());
    double rho = 0.9 * rho0(b0, b0, tau);
    std::vector<double> offsets(n);
    double max_u = 0.0;
    for (auto& u : offsets) {
      u = unif(rng) * rho;
      max_u = std::max(max_u, u);
    }
    std::vector<double> phases(n);
    for (int i = 0; i < n; ++i) phases[i] = offsets[i] + (1.0 - max_u);

    SimConfig cfg;
    cfg.prc = PrcSpec{StrongFire{b0}};
    cfg.graphs = GraphSequence(g);
    cfg.tau = tau;
    cfg.init_phases = phases;
    cfg.seed = rng();
    cfg.horizon = 1.0;
    cfg.stop_on_convergence = false;
    Trace tr = simulate(cfg);
    std::vector<double> first_fire(n, std::numeric_limits<double>::infinity());
    for (const auto& [t, node] : tr.firings)
      first_fire[node] = std::min(first_fire[node], t);
    std::vector<double> lambda = sf_next_fire_times(phases, g, tau + tau_skew, 0.0);
    for (int i = 0; i < n; ++i)
      res.max_deviation = std::max(res.max_deviation, std::abs(lambda[i] - first_fire[i]));
    ++res.cases;
  }
  return res;
}

}  // namespace pco
