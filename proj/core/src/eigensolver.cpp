#include "rgg/eigensolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rgg/rng.hpp"

namespace rgg {

DeltaPolicy DeltaPolicy::from_sigma(const SigmaDiag& sigma) {
  return from_sigma(sigma, 0.5 * sigma.min_inv_variance());
}

DeltaPolicy DeltaPolicy::from_sigma(const SigmaDiag& sigma, double delta) {
  DeltaPolicy p;
  p.delta = delta;
  p.constraint_ok = delta > 0.0 && delta < sigma.min_inv_variance();
  return p;
}

DeltaPolicy DeltaPolicy::user(double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("DeltaPolicy: need delta > 0");
  return {delta, true};
}

namespace {

// structural zeros of L_rw computed through S carry only rounding noise
constexpr double kZeroSnap = 1e-12;

void snap_zeros(std::vector<double>& values) {
  for (double& v : values)
    if (std::abs(v) < kZeroSnap) v = 0.0;
}

EigPairs dense_path(const LaplacianOperator& op, int count) {
  const int n = op.n();
  const auto& a = op.affinity();
  const auto isd = op.inv_sqrt_degrees();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      m(i, a.col[k]) -= isd[i] * a.val[k] * isd[a.col[k]];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw SolverNotConverged("dense eigensolver failed");

  EigPairs out;
  out.solver = "dense";
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
  snap_zeros(out.values);
  out.vectors.resize(n, count);
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd v = es.eigenvectors().col(c);
    for (int i = 0; i < n; ++i) v(i) *= isd[i];
    out.vectors.col(c) = v / v.norm();
  }
  return out;
}

using ApplyFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LanczosWorkspace {
  ApplyFn apply;
  int n;
  Eigen::MatrixXd locked;            // converged eigenvectors (orthonormal)
  std::vector<double> locked_vals;   // matching operator eigenvalues
  CounterRng rng;
  std::uint64_t draw = 0;

  LanczosWorkspace(ApplyFn a, int size, std::uint64_t seed)
      : apply(std::move(a)), n(size), locked(size, 0), rng(seed, 0xa11ce) {}

  void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, int cols) const {
    if (cols > 0) {
      auto b = basis.leftCols(cols);
      w.noalias() -= b * (b.transpose() * w);
    }
    if (locked.cols() > 0) w.noalias() -= locked * (locked.transpose() * w);
  }

  Eigen::VectorXd random_start() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal(draw++ * 2);
    return v;
  }

  void lock(const Eigen::VectorXd& y, double theta) {
    Eigen::VectorXd v = y;
    // keep the locked set orthonormal against rounding drift
    if (locked.cols() > 0) v.noalias() -= locked * (locked.transpose() * v);
    const double nrm = v.norm();
    if (nrm < 1e-8) return;  // duplicate direction, nothing new
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    locked.col(locked.cols() - 1) = v / nrm;
    locked_vals.push_back(theta);
  }
};

// One deflated Lanczos sweep on S; locks Ritz pairs whose residual estimate
// beta_m |s_last| is below tol. Returns the largest unconverged Ritz value
// (or -inf when the Krylov space was exhausted).
double lanczos_sweep(LanczosWorkspace& ws, int m, double tol, int want) {
  const int n = ws.n;
  m = std::min<int>(m, n - static_cast<int>(ws.locked.cols()));
  if (m <= 0) return -std::numeric_limits<double>::infinity();

  Eigen::MatrixXd basis(n, m + 1);
  std::vector<double> alpha, beta;
  alpha.reserve(m);
  beta.reserve(m);

  Eigen::VectorXd v = ws.random_start();
  ws.orthogonalize(v, basis, 0);
  ws.orthogonalize(v, basis, 0);
  double nrm = v.norm();
  if (nrm < 1e-14) return -std::numeric_limits<double>::infinity();
  basis.col(0) = v / nrm;

  int built = 0;
  bool exhausted = false;
  Eigen::VectorXd w(n);
  for (int j = 0; j < m; ++j) {
    ws.op->apply_sym({basis.col(j).data(), static_cast<std::size_t>(n)},
                     {w.data(), static_cast<std::size_t>(n)});
    const double a = basis.col(j).dot(w);
    alpha.push_back(a);
    w.noalias() -= a * basis.col(j);
    if (j > 0) w.noalias() -= beta[j - 1] * basis.col(j - 1);
    // full reorthogonalization, two passes
    ws.orthogonalize(w, basis, j + 1);
    ws.orthogonalize(w, basis, j + 1);
    const double b = w.norm();
    built = j + 1;
    if (b < 1e-13) {
      exhausted = true;
      break;
    }
    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }

  Eigen::VectorXd diag(built), sub(std::max(built - 1, 0));
  for (int i = 0; i < built; ++i) diag(i) = alpha[i];
  for (int i = 0; i + 1 < built; ++i) sub(i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  const double beta_m = exhausted ? 0.0 : beta[built - 1];
  // descending scan: lock converged pairs until `want` satisfied; the first
  // Ritz value left behind bounds what is still unresolved above the cut
  int locked_now = 0;
  for (int i = built - 1; i >= 0; --i) {
    const double theta = es.eigenvalues()(i);
    const double rest = std::abs(beta_m * es.eigenvectors()(built - 1, i));
    if (locked_now < want && (rest <= tol || exhausted)) {
      Eigen::VectorXd y = basis.leftCols(built) * es.eigenvectors().col(i);
      ws.lock(y, theta);
      ++locked_now;
    } else {
      return theta;
    }
  }
  return -std::numeric_limits<double>::infinity();
}

EigPairs lanczos_path(const LaplacianOperator& op, int count, std::uint64_t seed) {
  const int n = op.n();
  LanczosWorkspace ws(op, seed);

  // exact eigenvalue-1 subspace: D^{1/2} 1_C per component (disjoint support
  // keeps them orthogonal)
  const std::vector<int> comp = connected_components(op.affinity());
  int ncomp = 0;
  for (int c : comp) ncomp = std::max(ncomp, c + 1);
  const int seed_cols = std::min(ncomp, count);
  {
    std::vector<double> norms(ncomp, 0.0);
    const auto& deg = op.affinity().degrees;
    for (int i = 0; i < n; ++i) norms[comp[i]] += deg[i];
    ws.locked.resize(n, seed_cols);
    ws.locked.setZero();
    for (int i = 0; i < n; ++i)
      if (comp[i] < seed_cols)
        ws.locked(i, comp[i]) = std::sqrt(deg[i] / norms[comp[i]]);
    ws.locked_vals.assign(seed_cols, 1.0);
  }

  const double tol = 1e-12;
  int sweep_dim = std::max(2 * count + 40, 120);
  const int max_sweeps = 200;
  int sweeps = 0;
  double top_rest = 0.0;
  while (sweeps < max_sweeps) {
    ++sweeps;
    const int need = count - static_cast<int>(ws.locked.cols());
    const int before = static_cast<int>(ws.locked.cols());
    top_rest = lanczos_sweep(ws, std::min(sweep_dim, 700), tol,
                             std::max(need, 1));
    if (static_cast<int>(ws.locked.cols()) >= count) {
      // nothing unresolved may exceed the smallest value we selected
      std::vector<double> sorted = ws.locked_vals;
      std::sort(sorted.begin(), sorted.end(), std::greater<double>());
      const double cutoff = sorted[count - 1];
      if (!(top_rest > cutoff + 1e-11)) break;
    }
    if (static_cast<int>(ws.locked.cols()) == before) sweep_dim = sweep_dim * 3 / 2;
    if (static_cast<int>(ws.locked.cols()) >= n) break;
  }
  if (static_cast<int>(ws.locked.cols()) < count)
    throw SolverNotConverged("lanczos: sweep cap reached with " +
                             std::to_string(ws.locked.cols()) + "/" +
                             std::to_string(count) + " pairs locked");

  // order pairs by ascending L_rw eigenvalue 1 - theta
  std::vector<int> order(ws.locked.cols());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return ws.locked_vals[a] > ws.locked_vals[b];
  });

  EigPairs out;
  out.solver = "lanczos";
  out.values.resize(count);
  out.vectors.resize(n, count);
  const auto isd = op.inv_sqrt_degrees();
  for (int c = 0; c < count; ++c) {
    const int src = order[c];
    out.values[c] = 1.0 - ws.locked_vals[src];
    Eigen::VectorXd v = ws.locked.col(src);
    for (int i = 0; i < n; ++i) v(i) *= isd[i];
    out.vectors.col(c) = v / v.norm();
  }
  snap_zeros(out.values);
  return out;
}

void fill_residuals(const LaplacianOperator& op, EigPairs& pairs) {
  const int n = op.n();
  Eigen::VectorXd y(n);
  pairs.residuals.resize(pairs.values.size());
  for (std::size_t c = 0; c < pairs.values.size(); ++c) {
    const Eigen::VectorXd v = pairs.vectors.col(c);
    op.apply_rw({v.data(), static_cast<std::size_t>(n)},
                {y.data(), static_cast<std::size_t>(n)});
    y.noalias() -= pairs.values[c] * v;
    pairs.residuals[c] = y.norm() / v.norm();
  }
}

}  // namespace

EigPairs smallest_eigs(const LaplacianOperator& op, int count, SolverChoice choice,
                       std::uint64_t lanczos_seed) {
  if (count < 1 || count > op.n())
    throw InvalidArgument("smallest_eigs: need 1 <= count <= n");
  const bool dense = choice == SolverChoice::Dense ||
                     (choice == SolverChoice::Auto && op.n() <= 2000);
  EigPairs pairs =
      dense ? dense_path(op, count) : lanczos_path(op, count, lanczos_seed);
  fill_residuals(op, pairs);
  return pairs;
}

int compute_K0(std::span<const double> scaled_ascending, const DeltaPolicy& policy) {
  if (!policy.constraint_ok)
    throw DeltaConstraintViolation("compute_K0: delta violates delta < min sigma^-2");
  if (scaled_ascending.empty() || scaled_ascending.back() <= policy.delta)
    throw InsufficientSpectrum(
        "compute_K0: eigenvalue list exhausted at or below delta; need more "
        "eigenvalues");
  int k0 = 0;
  for (double v : scaled_ascending)
    if (v <= policy.delta) ++k0;
  return k0;
}

std::vector<double> edge_eigenvalues(std::span<const double> scaled_ascending, int K0,
                                     int M) {
  if (static_cast<int>(scaled_ascending.size()) < K0 + M)
    throw InsufficientSpectrum("edge_eigenvalues: need K0+M eigenvalues");
  return {scaled_ascending.begin() + K0, scaled_ascending.begin() + K0 + M};
}

std::string SpectrumResult::to_json() const {
  nlohmann::json j;
  j["eigenvalues"] = eigenvalues;
  j["K0"] = K0;
  j["delta"] = delta;
  j["edge"] = edge;
  j["residual_max"] = residual_max;
  j["solver"] = solver;
  j["wall_time_s"] = wall_time_s;
  return j.dump(2);
}

SpectrumResult adaptive_spectrum(const LaplacianOperator& op, const DeltaPolicy& policy,
                                 int M, SolverChoice choice) {
  if (M < 1) throw InvalidArgument("adaptive_spectrum: need M >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = op.n();
  // every component contributes an exact zero below delta, so K0 is at least
  // the component count; starting there avoids pointless growth rounds
  const int ncomp = component_count(op.affinity());
  int count = std::min(std::max(M + 8, ncomp + M + 8), n);
  for (;;) {
    EigPairs pairs = smallest_eigs(op, count, choice);
    std::vector<double> scaled(pairs.values.size());
    for (std::size_t i = 0; i < pairs.values.size(); ++i) {
      double v = op.scale() * pairs.values[i];
      if (v > -1e-10 && v < 1e-10) v = std::max(v, 0.0);
      scaled[i] = v;
    }
    int k0 = -1;
    bool need_more = false;
    try {
      k0 = compute_K0(scaled, policy);
    } catch (const InsufficientSpectrum&) {
      need_more = true;
    }
    if (!need_more && k0 + M > count) need_more = true;
    if (need_more) {
      if (count >= n)
        throw GrowthCapReached("adaptive_spectrum: K0 appears to exceed n - M");
      count = std::min(n, std::max(2 * count, k0 > 0 ? k0 + M + 8 : 0));
      continue;
    }
    SpectrumResult out;
    out.eigenvalues = std::move(scaled);
    out.K0 = k0;
    out.edge = edge_eigenvalues(out.eigenvalues, k0, M);
    out.delta = policy.delta;
    out.solver = pairs.solver;
    out.residuals = std::move(pairs.residuals);
    out.residual_max = 0.0;
    for (double r : out.residuals) out.residual_max = std::max(out.residual_max, r);
    out.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }
}

}  // namespace rgg
