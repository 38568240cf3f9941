#include "rgg/sturm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rgg/errors.hpp"

namespace rgg {

std::vector<double> solve_weighted_neumann(const WeightedInterval& w, int count) {
  const int m = w.m();
  if (m < 200) throw InvalidArgument("solve_weighted_neumann: need m >= 200");
  if (!(count >= 1 && count < m / 4))
    throw InvalidArgument("solve_weighted_neumann: need 1 <= count < m/4");
  for (double v : w.q)
    if (!(v > 0.0)) throw InvalidArgument("solve_weighted_neumann: q must be positive");

  const double h = w.h();
  // flux form: A_ii = (q2_{i-1/2} + q2_{i+1/2})/h, A_{i,i+1} = -q2_{i+1/2}/h,
  // boundary fluxes zero; mass M_ii = q_i^2 h (halved at the ends), with the
  // lumped tail mass added to the last node
  std::vector<double> q2h(m - 1);  // q^2 at half nodes
  for (int i = 0; i + 1 < m; ++i) {
    const double qm = 0.5 * (w.q[i] + w.q[i + 1]);
    q2h[i] = qm * qm;
  }
  Eigen::VectorXd mass(m);
  for (int i = 0; i < m; ++i) {
    const double q2 = w.q[i] * w.q[i];
    const double cell = (i == 0 || i == m - 1) ? 0.5 * h : h;
    mass(i) = q2 * cell;
  }
  mass(m - 1) += w.extra_mass;

  // similarity transform to a symmetric tridiagonal: At = M^-1/2 A M^-1/2
  Eigen::VectorXd diag(m), sub(m - 1);
  for (int i = 0; i < m; ++i) {
    double a = 0.0;
    if (i > 0) a += q2h[i - 1] / h;
    if (i + 1 < m) a += q2h[i] / h;
    diag(i) = a / mass(i);
  }
  for (int i = 0; i + 1 < m; ++i)
    sub(i) = -(q2h[i] / h) / std::sqrt(mass(i) * mass(i + 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SolverNotConverged("solve_weighted_neumann: tridiagonal solve failed");

  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    double v = es.eigenvalues()(i);
    if (std::abs(v) < 1e-8) v = std::max(v, 0.0);
    out[i] = v;
  }
  return out;
}

WeightedInterval signal_density(const SignalModel& model, int m) {
  if (m < 200) throw InvalidArgument("signal_density: need m >= 200");
  WeightedInterval w;
  switch (model.kind) {
    case SignalModel::Kind::Identity: {
      w.a = 0.0;
      w.b = 1.0;
      w.q.assign(m, 1.0);
      return w;
    }
    case SignalModel::Kind::Sine: {
      // q(y) = 2/(pi sqrt(1-y^2)); grid stops at 1-h, tail mass of q over
      // [1-h, 1] lumped into the boundary node
      const double h = 1.0 / m;
      w.a = 0.0;
      w.b = 1.0 - h;
      w.q.resize(m);
      for (int i = 0; i < m; ++i) {
        const double y = w.a + (w.b - w.a) * i / (m - 1);
        w.q[i] = 2.0 / (M_PI * std::sqrt(std::max(1.0 - y * y, 1e-30)));
      }
      w.extra_mass = 1.0 - 2.0 / M_PI * std::asin(1.0 - h);
      return w;
    }
    case SignalModel::Kind::Custom:
      throw InvalidArgument(
          "signal_density: custom embeddings need a caller-supplied density");
  }
  throw InvalidArgument("signal_density: unknown model");
}

std::string reference_spectrum_csv(const std::vector<double>& nu) {
  std::ostringstream os;
  os << "k,nu_k\n";
  char buf[64];
  for (std::size_t k = 0; k < nu.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", nu[k]);
    os << (k + 1) << ',' << buf << '\n';
  }
  return os.str();
}

}  // namespace rgg
