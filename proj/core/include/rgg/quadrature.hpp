#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rgg/metric.hpp"

namespace rgg {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1,1]; exact for polynomials of degree 2n-1.
const QuadRule& gauss_legendre(int n);

// Gauss-Hermite with weight exp(-x^2) (physicists' convention).
const QuadRule& gauss_hermite(int n);

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  int order = 0;
};

using DimFn = std::function<double(std::span<const double>)>;

// Integral of f over the unit lp ball in R^d, d <= 3. The ball indicator is
// enforced through exact nested limits; per-axis substitutions keep the
// integrand smooth for p in {1, 2, inf}. `order` is the Gauss-Legendre node
// count per axis (per smooth piece).
double ball_integrate(int d, const MetricOrder& p, const DimFn& f, int order);

// Doubles the order until two successive estimates agree to rel_tol
// (relative to max(|I|, abs_floor)). Throws QuadratureError when the
// refinement cap is hit.
QuadResult ball_integrate_adaptive(int d, const MetricOrder& p, const DimFn& f,
                                   double rel_tol, double abs_floor = 1e-300,
                                   int initial_order = 16, int max_order = 4096);

// Adaptive 1-D Gauss-Legendre over [a,b] (convenience for radial integrals).
QuadResult integrate_1d_adaptive(const std::function<double(double)>& f, double a,
                                 double b, double rel_tol, double abs_floor = 1e-300,
                                 int initial_order = 16, int max_order = 4096);

}  // namespace rgg
