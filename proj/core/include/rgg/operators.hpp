#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rgg/continuum.hpp"
#include "rgg/graph.hpp"
#include "rgg/hermite.hpp"
#include "rgg/moments.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

using ScalarField = std::function<double(std::span<const double>)>;

// Gaussian weight rho(x) = exp(-sum x_i^2 / (2 sigma_i^2)).
double rho_weight(std::span<const double> x, const SigmaDiag& sigma);

// Empirical operator built from the sigmoid-smoothed graph weights:
//   scale * [sum_j w_j (f(x)-f(x_j))] / [sum_j w_j],
//   w_j = sigmoid(alpha_n (r_n^2 - dist^2)) g*(dist/r_n),
// with sigmoid arguments clamped to [-700, 700] and the denominator kept
// above a positivity floor.
struct EmpiricalOperator {
  PointCloud cloud;
  GraphSpec spec;  // alpha_n must be set
  MomentPair moments;
  double denom_floor = 1e-300;

  EmpiricalOperator(PointCloud c, GraphSpec s, MomentPair m);
  double scale() const;
};

double apply_empirical(const EmpiricalOperator& op, const ScalarField& f,
                       std::span<const double> x);

// Deterministic ball-integral operators. d <= 3 for quadrature practicality.
struct DeterministicOperator {
  SigmaDiag sigma;
  GraphSpec spec;
  MomentPair moments;
  double rel_tol = 1e-9;
  double abs_floor = 1e-12;  // values below it count as converged zeros
  int initial_order = 24;

  DeterministicOperator(SigmaDiag s, GraphSpec g, MomentPair m);
};

// T_n f(x) = (2/(m2 r_n^2)) int_{||z||_p<=1} g(||z||_p)(f(x)-f(x+r_n z))
//            rho(x+r_n z)/rho(x) dz
double apply_Tn(const DeterministicOperator& op, const ScalarField& f,
                std::span<const double> x);

// Ratio form: scale * int g (f(x)-f(y)) rho(y) / int g rho(y), numerator and
// denominator sharing the same node schedule.
double apply_Ttilde_n(const DeterministicOperator& op, const ScalarField& f,
                      std::span<const double> x);

struct BiasSlopeResult {
  std::vector<double> radii;
  std::vector<double> errors;  // e(r) = ||(T_n - Delta_rho) phi||_F
  double slope = 0.0;          // least-squares slope of log e vs log r
  bool exact_zero = false;     // e(r) == 0 for all r (constant eigenfunction)
};

// spec_template supplies p/g; its r_n is replaced by each entry of `radii`
// (strictly decreasing, >= 4 values).
BiasSlopeResult bias_slope_check(const SigmaDiag& sigma, const GraphSpec& spec_template,
                                 const EigenFunction& phi,
                                 const std::vector<double>& radii,
                                 int hermite_order = 80);

struct ExtensionCheckResult {
  double max_residual = 0.0;
  int tested = 0;
  int skipped = 0;  // eigenvalues within 1e-6 relative of the excluded point
};

// For each eigenpair (lambda, v) of the dense smoothed Laplacian with
// lambda != scale, extends v to phi*(x) and evaluates
// |L_tilde_n phi*(x) - lambda phi*(x)| at `eval_points` random off-sample x.
ExtensionCheckResult extension_correspondence_check(const PointCloud& cloud,
                                                    const GraphSpec& smoothed_spec,
                                                    const MomentPair& moments,
                                                    int eval_points = 50,
                                                    std::uint64_t seed = 99);

}  // namespace rgg
