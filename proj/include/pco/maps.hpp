#pragma once

#include <queue>
#include <vector>

#include "pco/errors.hpp"
#include "pco/graph.hpp"
#include "pco/phase.hpp"
#include "pco/prc.hpp"

namespace pco {

using PhaseVector = std::vector<double>;

inline double range_of(const PhaseVector& phi) { return circular_range(phi); }

// Closed-form time-(1+tau) map for strong-resetting dynamics inside the
// basin: H(phi_i) = min(phi_i + tau, min over predecessors j of phi_j).
// Only valid in the window frame with range below rho0(B0,B0); meaningless
// outside the basin.
inline PhaseVector sr_time_map(const PhaseVector& phi, const DirectedGraph& g, double tau,
                               double b0) {
  if (static_cast<int>(phi.size()) != g.node_count())
    throw PreconditionViolated("sr_time_map: phase vector length must match node count");
  double rho0 = std::min(b0 - tau, 1.0 - b0 + tau);
  if (circular_range(phi) >= rho0)
    throw PreconditionViolated("sr_time_map: phase range outside the proven basin");
  PhaseVector out(phi.size());
  for (int i = 0; i < g.node_count(); ++i) {
    double v = phi[i] + tau;
    for (int j : g.predecessors(i)) v = std::min(v, phi[j]);
    out[i] = v;
  }
  return out;
}

// k applications of H, one graph per window.
inline std::vector<PhaseVector> iterate_sr(const PhaseVector& phi, const GraphSequence& seq,
                                           double tau, double b0, int k) {
  std::vector<PhaseVector> traj{phi};
  for (int step = 0; step < k; ++step)
    traj.push_back(sr_time_map(traj.back(), seq.at_window(step), tau, b0));
  return traj;
}

inline std::vector<PhaseVector> iterate_sr(const PhaseVector& phi, const DirectedGraph& g,
                                           double tau, double b0, int k) {
  return iterate_sr(phi, GraphSequence(g), tau, b0, k);
}

// Least fixed point of the strong-firing next-fire system
//   lambda_i = min(t0 + 1 - phi_i, min over predecessors j of lambda_j + tau),
// computed by label-correcting relaxation (shortest paths with edge length
// tau from sources offset by 1 - phi).  Requires an undirected graph.
inline std::vector<double> sf_next_fire_times(const PhaseVector& phi, const DirectedGraph& g,
                                              double tau, double t0 = 0.0) {
  if (static_cast<int>(phi.size()) != g.node_count())
    throw PreconditionViolated("sf_next_fire_times: phase vector length must match node count");
  for (const auto& e : g.edges())
    if (!g.has_edge(e.to, e.from))
      throw PreconditionViolated("sf_next_fire_times requires an undirected graph");
  int n = g.node_count();
  std::vector<double> lambda(n);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int i = 0; i < n; ++i) {
    lambda[i] = t0 + 1.0 - phi[i];
    pq.emplace(lambda[i], i);
  }
  while (!pq.empty()) {
    auto [t, u] = pq.top();
    pq.pop();
    if (t > lambda[u]) continue;
    for (int v : g.successors(u)) {
      if (lambda[u] + tau < lambda[v]) {
        lambda[v] = lambda[u] + tau;
        pq.emplace(lambda[v], v);
      }
    }
  }
  return lambda;
}

}  // namespace pco
