#include "rgg/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rgg/quadrature.hpp"
#include "rgg/rng.hpp"

namespace rgg {

double rho_weight(std::span<const double> x, const SigmaDiag& sigma) {
  double e = 0.0;
  for (int i = 0; i < sigma.dim(); ++i) e += x[i] * x[i] / (2.0 * sigma.sigma_sq[i]);
  return std::exp(-e);
}

namespace {
double clamped_sigmoid(double t) {
  t = std::clamp(t, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(-t));
}
}  // namespace

EmpiricalOperator::EmpiricalOperator(PointCloud c, GraphSpec s, MomentPair m)
    : cloud(std::move(c)), spec(std::move(s)), moments(std::move(m)) {
  if (!spec.alpha_n) throw InvalidArgument("EmpiricalOperator: alpha_n must be set");
  if (cloud.n() < 1) throw InvalidArgument("EmpiricalOperator: need n >= 1");
}

double EmpiricalOperator::scale() const { return scale_factor(moments, spec.r_n); }

double apply_empirical(const EmpiricalOperator& op, const ScalarField& f,
                       std::span<const double> x) {
  const double alpha = *op.spec.alpha_n;
  const double r2 = op.spec.r_n * op.spec.r_n;
  const double fx = f(x);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < op.cloud.n(); ++j) {
    const auto xj = op.cloud.row(j);
    const double dist = lp_distance(x, xj, op.spec.p);
    const double w = clamped_sigmoid(alpha * (r2 - dist * dist)) *
                     op.spec.g.g_star(dist / op.spec.r_n);
    num += w * (fx - f(xj));
    den += w;
  }
  if (den < op.denom_floor)
    throw IsolatedPoint("apply_empirical: denominator under the positivity floor");
  return op.scale() * num / den;
}

DeterministicOperator::DeterministicOperator(SigmaDiag s, GraphSpec g, MomentPair m)
    : sigma(std::move(s)), spec(std::move(g)), moments(std::move(m)) {
  if (sigma.dim() > 3)
    throw InvalidArgument("DeterministicOperator: d <= 3 supported");
}

namespace {

// rho(x + r z)/rho(x) without forming either weight
double rho_ratio(std::span<const double> x, std::span<const double> z, double r,
                 const SigmaDiag& sigma) {
  double e = 0.0;
  for (int i = 0; i < sigma.dim(); ++i)
    e += (2.0 * x[i] * r * z[i] + r * r * z[i] * z[i]) / (2.0 * sigma.sigma_sq[i]);
  return std::exp(-e);
}

}  // namespace

double apply_Tn(const DeterministicOperator& op, const ScalarField& f,
                std::span<const double> x) {
  const int d = op.sigma.dim();
  const double r = op.spec.r_n;
  const double fx = f(x);
  std::vector<double> y(d);
  auto integrand = [&](std::span<const double> z) {
    for (int i = 0; i < d; ++i) y[i] = x[i] + r * z[i];
    return op.spec.g.g(lp_norm(z, op.spec.p)) *
           (fx - f(std::span<const double>(y.data(), d))) *
           rho_ratio(x, z, r, op.sigma);
  };
  const QuadResult q = ball_integrate_adaptive(d, op.spec.p, integrand, op.rel_tol,
                                               op.abs_floor, op.initial_order);
  return 2.0 / (op.moments.m2 * r * r) * q.value;
}

double apply_Ttilde_n(const DeterministicOperator& op, const ScalarField& f,
                      std::span<const double> x) {
  const int d = op.sigma.dim();
  const double r = op.spec.r_n;
  const double fx = f(x);
  std::vector<double> y(d);
  auto num_f = [&](std::span<const double> z) {
    for (int i = 0; i < d; ++i) y[i] = x[i] + r * z[i];
    return op.spec.g.g(lp_norm(z, op.spec.p)) *
           (fx - f(std::span<const double>(y.data(), d))) *
           rho_ratio(x, z, r, op.sigma);
  };
  auto den_f = [&](std::span<const double> z) {
    return op.spec.g.g(lp_norm(z, op.spec.p)) * rho_ratio(x, z, r, op.sigma);
  };
  // numerator and denominator share each order of the same refinement ladder
  double prev = 0.0;
  bool have_prev = false;
  for (int order = op.initial_order; order <= 4096; order *= 2) {
    const double num = ball_integrate(d, op.spec.p, num_f, order);
    const double den = ball_integrate(d, op.spec.p, den_f, order);
    if (!(den > 0.0))
      throw QuadratureError("apply_Ttilde_n: nonpositive denominator", 0.0);
    const double cur = num / den;
    const double err = std::abs(cur - prev);
    if (have_prev && (err <= op.rel_tol * std::abs(cur) ||
                      (std::abs(cur) <= op.abs_floor && err <= op.abs_floor)))
      return scale_factor(op.moments, r) * cur;
    prev = cur;
    have_prev = true;
  }
  throw QuadratureError("apply_Ttilde_n: tolerance not met", std::abs(prev));
}

BiasSlopeResult bias_slope_check(const SigmaDiag& sigma, const GraphSpec& spec_template,
                                 const EigenFunction& phi,
                                 const std::vector<double>& radii, int hermite_order) {
  if (radii.size() < 4)
    throw InvalidArgument("bias_slope_check: need >= 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw InvalidArgument("bias_slope_check: radii must be strictly decreasing");

  const double lambda = phi.eigenvalue();
  const int d = sigma.dim();
  // Gauss-Hermite nodes restricted to the bulk window; tail nodes contribute
  // below 1e-12 for polynomially bounded residuals
  const double window = 5.5;
  const QuadRule& gh = gauss_hermite(hermite_order);

  BiasSlopeResult out;
  out.radii = radii;
  for (double r : radii) {
    GraphSpec spec = spec_template;
    spec.r_n = r;
    DeterministicOperator op(sigma, spec, compute_moments(d, spec.p, spec.g));
    auto phi_f = [&](std::span<const double> x) { return phi(x); };

    double jac = 1.0;
    for (int i = 0; i < d; ++i) jac *= sigma.sigma(i);
    double acc = 0.0;
    std::vector<int> idx(d, 0);
    std::vector<double> x(d, 0.0);
    for (;;) {
      bool inside = true;
      double w = 1.0;
      for (int i = 0; i < d; ++i) {
        if (std::abs(gh.nodes[idx[i]]) > window) inside = false;
        x[i] = sigma.sigma(i) * gh.nodes[idx[i]];
        w *= gh.weights[idx[i]];
      }
      if (inside) {
        const auto xs = std::span<const double>(x.data(), d);
        const double resid = apply_Tn(op, phi_f, xs) - lambda * phi(xs);
        acc += w * resid * resid;
      }
      int axis = 0;
      while (axis < d) {
        if (++idx[axis] < hermite_order) break;
        idx[axis] = 0;
        ++axis;
      }
      if (axis == d) break;
    }
    out.errors.push_back(std::sqrt(std::max(jac * acc, 0.0)));
  }

  const double tiny = 1e-14;
  bool all_zero = true;
  for (double e : out.errors) all_zero = all_zero && e < tiny;
  if (all_zero) {
    out.exact_zero = true;
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  // least squares on (log r, log e)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(radii.size());
  for (int i = 0; i < m; ++i) {
    const double lx = std::log(out.radii[i]);
    const double ly = std::log(std::max(out.errors[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

ExtensionCheckResult extension_correspondence_check(const PointCloud& cloud,
                                                    const GraphSpec& smoothed_spec,
                                                    const MomentPair& moments,
                                                    int eval_points,
                                                    std::uint64_t seed) {
  if (!smoothed_spec.alpha_n)
    throw InvalidArgument("extension_correspondence_check: alpha_n must be set");
  const int n = cloud.n();
  if (n > 200)
    throw InvalidArgument("extension_correspondence_check: n <= 200 (dense solve)");
  const int d = cloud.dim();
  const double alpha = *smoothed_spec.alpha_n;
  const double r = smoothed_spec.r_n;
  const double r2 = r * r;
  const double scale = scale_factor(moments, r);

  // dense smoothed affinity, no drop threshold
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dist = lp_distance(cloud.row(i), cloud.row(j), smoothed_spec.p);
      K(i, j) = clamped_sigmoid(alpha * (r2 - dist * dist)) *
                smoothed_spec.g.g_star(dist / r);
    }
  Eigen::VectorXd deg = K.rowwise().sum();
  Eigen::VectorXd isd = deg.array().rsqrt();
  Eigen::MatrixXd S = isd.asDiagonal() * K * isd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n) - S));
  if (es.info() != Eigen::Success)
    throw SolverNotConverged("extension_correspondence_check: dense solve failed");

  // weight row for an arbitrary x
  auto weights_at = [&](std::span<const double> x, Eigen::VectorXd& w) {
    for (int j = 0; j < n; ++j) {
      const double dist = lp_distance(x, cloud.row(j), smoothed_spec.p);
      w(j) = clamped_sigmoid(alpha * (r2 - dist * dist)) *
             smoothed_spec.g.g_star(dist / r);
    }
  };

  CounterRng rng(seed, 0xec);
  ExtensionCheckResult out;
  Eigen::VectorXd w(n);
  std::vector<double> x(d);
  const std::uint64_t stride = 2 + d;
  for (int e = 0; e < n; ++e) {
    const double lambda = scale * es.eigenvalues()(e);
    if (std::abs(lambda - scale) <= 1e-6 * scale) {
      ++out.skipped;
      continue;
    }
    Eigen::VectorXd v = isd.asDiagonal() * es.eigenvectors().col(e);
    v /= v.norm();
    const double ext = 1.0 / (1.0 - lambda / scale);
    // phi* at the sample points evaluated through the extension formula, NOT
    // substituted from v; their agreement with v is the lemma's content
    Eigen::VectorXd phi_samples =
        ext * ((K * v).array() / deg.array()).matrix();
    ++out.tested;
    for (int t = 0; t < eval_points; ++t) {
      // off-sample points near the cloud keep the denominators healthy
      const std::uint64_t base =
          (static_cast<std::uint64_t>(e) * eval_points + t) * stride;
      const int anchor = static_cast<int>(rng.bits(base) % n);
      for (int i = 0; i < d; ++i)
        x[i] = cloud.points(anchor, i) + (rng.uniform(base + 1 + i) - 0.5) * r;
      weights_at(std::span<const double>(x.data(), d), w);
      const double den = w.sum();
      if (den < 1e-300) continue;
      const double phi_star = ext * w.dot(v) / den;
      const double lhs = scale * (phi_star - w.dot(phi_samples) / den);
      out.max_residual = std::max(out.max_residual,
                                  std::abs(lhs - lambda * phi_star));
    }
  }
  return out;
}

}  // namespace rgg
