#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace pco {

// Boundary-membership tolerance for phase comparisons (phi <= B0 etc).
inline constexpr double kPhaseTol = 1e-12;

// Phases live in [0,1); 1 is the instantaneous fire-and-reset point.
using Phase = double;

inline double mod1(double x) {
  double r = x - std::floor(x);
  return (r >= 1.0) ? r - 1.0 : r;
}

// Circular range: 1 minus the largest gap between cyclically sorted phases.
// Equals max-min when all phases lie within half a circle of each other.
inline double circular_range(std::vector<double> phases) {
  if (phases.size() <= 1) return 0.0;
  for (double& p : phases) p = mod1(p);
  std::sort(phases.begin(), phases.end());
  double max_gap = phases.front() + 1.0 - phases.back();
  for (std::size_t i = 1; i < phases.size(); ++i)
    max_gap = std::max(max_gap, phases[i] - phases[i - 1]);
  return 1.0 - max_gap;
}

}  // namespace pco
