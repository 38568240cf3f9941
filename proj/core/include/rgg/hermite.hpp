#pragma once

#include <map>
#include <span>
#include <vector>

#include "rgg/errors.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

// Physicists' Hermite polynomial H_m(x) by the three-term recurrence
// H_{m+1} = 2x H_m - 2m H_{m-1}. Doubles overflow around m ~ 150 for
// |x| <= 10; callers needing larger degrees must work in log space.
double hermite_eval(int m, double x);

// 0-based multi-index (paper's k_i - 1 per axis).
struct HermiteIndex {
  std::vector<int> k;

  explicit HermiteIndex(std::vector<int> idx) : k(std::move(idx)) {
    for (int v : k)
      if (v < 0) throw InvalidArgument("HermiteIndex: entries must be >= 0");
  }
  int dim() const { return static_cast<int>(k.size()); }
  int total() const {
    int s = 0;
    for (int v : k) s += v;
    return s;
  }
  bool operator<(const HermiteIndex& o) const { return k < o.k; }
  bool operator==(const HermiteIndex& o) const { return k == o.k; }
};

// Orthonormal eigenfunction prod_i psi_{i,k_i}(x_i) with
// psi_{i,m}(x) = (1/(sqrt(pi) m! 2^m sigma_i))^{1/2} H_m(x/sigma_i).
// Normalization constants are kept in log space.
struct EigenFunction {
  HermiteIndex index;
  SigmaDiag sigma;

  EigenFunction(HermiteIndex idx, SigmaDiag s);

  double eigenvalue() const;  // sum_i 2 k_i / sigma_i^2
  double operator()(std::span<const double> x) const;

  // product of the per-axis normalization constants
  double normalization() const { return norm_const_; }

 private:
  double norm_const_;
};

inline double eigenfunction_eval(const EigenFunction& phi, std::span<const double> x) {
  return phi(x);
}

// Polynomial in the tensor Hermite basis { prod_i H_{k_i}(x_i/sigma_i) }.
// Closed under differentiation (H_m' = 2m H_{m-1}) and under multiplication
// by coordinates (x H_m = (H_{m+1} + 2m H_{m-1})/2), which is all the
// weighted Laplace-Beltrami operator needs.
class HermitePoly {
 public:
  HermitePoly(SigmaDiag sigma, std::map<HermiteIndex, double> coeffs)
      : sigma_(std::move(sigma)), coeffs_(std::move(coeffs)) {}

  static HermitePoly constant(const SigmaDiag& sigma, double value);
  // the coordinate function x_axis
  static HermitePoly coordinate(const SigmaDiag& sigma, int axis);
  static HermitePoly from_eigenfunction(const EigenFunction& phi);

  double operator()(std::span<const double> x) const;

  HermitePoly derivative(int axis) const;        // d/dx_axis, exact
  HermitePoly times_coordinate(int axis) const;  // multiply by x_axis, exact

  // Delta_rho f = -sum_i d^2 f/dx_i^2 + sum_i (2 x_i / sigma_i^2) df/dx_i,
  // assembled from the derivative identity; no numerical differentiation.
  HermitePoly laplace_beltrami() const;

  const SigmaDiag& sigma() const { return sigma_; }
  const std::map<HermiteIndex, double>& coeffs() const { return coeffs_; }

 private:
  SigmaDiag sigma_;
  std::map<HermiteIndex, double> coeffs_;
};

// Pointwise Delta_rho f(x) for a tensor-Hermite polynomial.
double apply_laplace_beltrami(const HermitePoly& f, std::span<const double> x);

}  // namespace rgg
