#include "rgg/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

#include "rgg/errors.hpp"

namespace rgg {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights come
// from the squared first eigenvector components.
QuadRule golub_welsch(int n, double mu0, const std::function<double(int)>& offdiag) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = offdiag(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)),
                            Eigen::ComputeEigenvectors);
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

template <typename Maker>
const QuadRule& cached_rule(int n, std::map<int, QuadRule>& cache, std::mutex& mu,
                            Maker make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need n >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached_rule(n, cache, mu, [](int m) {
    return golub_welsch(m, 2.0, [](int k) {
      return k / std::sqrt(4.0 * k * k - 1.0);
    });
  });
}

const QuadRule& gauss_hermite(int n) {
  if (n < 1) throw InvalidArgument("gauss_hermite: need n >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached_rule(n, cache, mu, [](int m) {
    return golub_welsch(m, std::sqrt(M_PI), [](int k) { return std::sqrt(k / 2.0); });
  });
}

namespace {

// 1-D node/weight set on [-1,1] used for one outer axis of the ball
// integral. `budget_pow` maps t to the factor multiplying the remaining
// lp budget, i.e. 1-|t|^p.
struct AxisRule {
  std::vector<double> t;
  std::vector<double> w;
};

// Composite Gauss-Legendre on [0,1] dyadically graded toward both endpoints;
// handles the algebraic kinks of (1-|t|^p)^{1/p} for general p.
void graded_half(int order, std::vector<double>& t, std::vector<double>& w) {
  const int levels = 24;
  const QuadRule& gl = gauss_legendre(std::max(4, order / 4));
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (int k = levels; k >= 1; --k) cuts.push_back(std::ldexp(1.0, -k - 1));
  cuts.push_back(0.5);
  for (int k = 1; k <= levels; ++k) cuts.push_back(1.0 - std::ldexp(1.0, -k - 1));
  cuts.push_back(1.0);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      t.push_back(c + h * gl.nodes[i]);
      w.push_back(h * gl.weights[i]);
    }
  }
}

AxisRule make_axis_rule(const MetricOrder& p, int order, bool innermost) {
  AxisRule r;
  const QuadRule& gl = gauss_legendre(order);
  if (innermost || p.is_inf()) {
    r.t = gl.nodes;
    r.w = gl.weights;
    return r;
  }
  if (p.p() == 2.0) {
    // t = sin(theta) removes the sqrt limit kink
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double theta = 0.5 * M_PI * gl.nodes[i];
      r.t.push_back(std::sin(theta));
      r.w.push_back(0.5 * M_PI * gl.weights[i] * std::cos(theta));
    }
    return r;
  }
  if (p.p() == 1.0) {
    // limits are affine in |t|; split at 0 keeps each half smooth
    for (int half = 0; half < 2; ++half)
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double u = 0.5 * (gl.nodes[i] + 1.0);  // in (0,1)
        r.t.push_back(half == 0 ? -u : u);
        r.w.push_back(0.5 * gl.weights[i]);
      }
    return r;
  }
  std::vector<double> tt, ww;
  graded_half(order, tt, ww);
  for (int half = 0; half < 2; ++half)
    for (std::size_t i = 0; i < tt.size(); ++i) {
      r.t.push_back(half == 0 ? -tt[i] : tt[i]);
      r.w.push_back(ww[i]);
    }
  return r;
}

struct BallNester {
  int d;
  MetricOrder p;
  const DimFn* f;
  std::vector<AxisRule> rules;
  mutable std::vector<double> x;

  double nest(int axis, double budget) const {
    // half-width of the slice along this axis
    double b;
    if (p.is_inf()) {
      b = 1.0;
    } else if (p.p() == 2.0) {
      b = std::sqrt(std::max(budget, 0.0));
    } else if (p.p() == 1.0) {
      b = std::max(budget, 0.0);
    } else {
      b = std::pow(std::max(budget, 0.0), 1.0 / p.p());
    }
    if (b <= 0.0) return 0.0;
    const AxisRule& r = rules[axis];
    double acc = 0.0;
    if (axis == d - 1) {
      for (std::size_t i = 0; i < r.t.size(); ++i) {
        x[axis] = b * r.t[i];
        acc += r.w[i] * (*f)(std::span<const double>(x.data(), d));
      }
      return b * acc;
    }
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      const double t = r.t[i];
      x[axis] = b * t;
      double next_budget;
      if (p.is_inf()) {
        next_budget = 1.0;
      } else if (p.p() == 2.0) {
        next_budget = budget * (1.0 - t * t);
      } else if (p.p() == 1.0) {
        next_budget = budget * (1.0 - std::abs(t));
      } else {
        next_budget = budget * (1.0 - std::pow(std::abs(t), p.p()));
      }
      acc += r.w[i] * nest(axis + 1, next_budget);
    }
    return b * acc;
  }
};

}  // namespace

double ball_integrate(int d, const MetricOrder& p, const DimFn& f, int order) {
  if (d < 1 || d > 3) throw InvalidArgument("ball_integrate: d must be 1..3");
  BallNester bn{d, p, &f, {}, std::vector<double>(d, 0.0)};
  bn.rules.reserve(d);
  for (int axis = 0; axis < d; ++axis)
    bn.rules.push_back(make_axis_rule(p, order, axis == d - 1));
  return bn.nest(0, 1.0);
}

namespace {
// relative agreement, or both estimates indistinguishable from zero at the
// floor magnitude
bool refined_enough(double cur, double err, double rel_tol, double abs_floor) {
  return err <= rel_tol * std::abs(cur) ||
         (std::abs(cur) <= abs_floor && err <= abs_floor);
}
}  // namespace

QuadResult ball_integrate_adaptive(int d, const MetricOrder& p, const DimFn& f,
                                   double rel_tol, double abs_floor,
                                   int initial_order, int max_order) {
  double prev = ball_integrate(d, p, f, initial_order);
  for (int order = 2 * initial_order; order <= max_order; order *= 2) {
    const double cur = ball_integrate(d, p, f, order);
    const double err = std::abs(cur - prev);
    if (refined_enough(cur, err, rel_tol, abs_floor)) return {cur, err, order};
    prev = cur;
  }
  throw QuadratureError("ball_integrate_adaptive: tolerance not met", std::abs(prev));
}

QuadResult integrate_1d_adaptive(const std::function<double(double)>& f, double a,
                                 double b, double rel_tol, double abs_floor,
                                 int initial_order, int max_order) {
  auto eval = [&](int order) {
    const QuadRule& gl = gauss_legendre(order);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      acc += gl.weights[i] * f(c + h * gl.nodes[i]);
    return h * acc;
  };
  double prev = eval(initial_order);
  for (int order = 2 * initial_order; order <= max_order; order *= 2) {
    const double cur = eval(order);
    const double err = std::abs(cur - prev);
    if (refined_enough(cur, err, rel_tol, abs_floor)) return {cur, err, order};
    prev = cur;
  }
  throw QuadratureError("integrate_1d_adaptive: tolerance not met", std::abs(prev));
}

}  // namespace rgg
