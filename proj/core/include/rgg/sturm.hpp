#pragma once

#include <vector>

#include "rgg/sampling.hpp"

namespace rgg {

// Uniform grid on [a,b] with a positive density q at the nodes. `extra_mass`
// is lumped into the last node's mass entry when the density is singular at
// the right endpoint (sine pushforward) and the grid stops short of it.
struct WeightedInterval {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> q;  // m >= 200 nodes
  double extra_mass = 0.0;

  int m() const { return static_cast<int>(q.size()); }
  double h() const { return (b - a) / (m() - 1); }
};

// Smallest `count` eigenvalues of -(1/q^2)(q^2 u')' with zero-flux (Neumann)
// boundaries, by symmetric second-order finite differences on the
// q^2-weighted form. The first eigenvalue is 0 (constants are in the kernel
// of the flux form exactly).
std::vector<double> solve_weighted_neumann(const WeightedInterval& w, int count);

// Pushforward density of Unif[0,1] under the model's monotone embedding,
// evaluated on a uniform grid over the image interval:
//   identity -> q == 1 on [0,1]
//   sine     -> q(y) = 2/(pi sqrt(1-y^2)) on [0,1), grid stops at 1-h with
//               the tail mass of q lumped into the boundary node
WeightedInterval signal_density(const SignalModel& model, int m);

// CSV rows (k, nu_k).
std::string reference_spectrum_csv(const std::vector<double>& nu);

}  // namespace rgg
