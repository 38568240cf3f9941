#pragma once

#include <string>

#include "rgg/errors.hpp"
#include "rgg/kernel.hpp"
#include "rgg/metric.hpp"

namespace rgg {

struct MomentPair {
  double m0 = 0.0;
  double m2 = 0.0;
  std::string method;  // "analytic" | "quadrature"
  double est_error = 0.0;
};

// m_l = integral over the unit lp ball of |u_1|^l g(||u||_p) du. The kernel
// depends on u only through ||u||_p, so the integral factorizes into an exact
// lp-sphere constant (Dirichlet integral, Gamma functions) and a smooth 1-D
// radial integral of g(r) r^{d+l-1}.
double moment(int d, const MetricOrder& p, const KernelSpec& g, int l,
              double* est_error = nullptr);

// m0 and m2 with the analytic path for g == 1 and p in {1,2,inf}; memoized
// per (d, p, kernel) behind an internal mutex.
MomentPair compute_moments(int d, const MetricOrder& p, const KernelSpec& g);

// 2 m0 / (m2 r_n^2), the factor turning L_rw into the scaled Laplacian.
inline double scale_factor(const MomentPair& m, double r_n) {
  if (!(r_n > 0.0)) throw InvalidArgument("scale_factor: need r_n > 0");
  return 2.0 * m.m0 / (m.m2 * r_n * r_n);
}

// lp ball moment of |u_1|^l for g == 1 (closed form).
double unit_ball_moment(int d, const MetricOrder& p, int l);

}  // namespace rgg
