// Acceptance suite: runs every numbered criterion at its stated tolerance and
// prints one pass/fail line each. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rgg/continuum.hpp"
#include "rgg/eigensolver.hpp"
#include "rgg/experiments.hpp"
#include "rgg/graph.hpp"
#include "rgg/hermite.hpp"
#include "rgg/operators.hpp"
#include "rgg/parallel.hpp"
#include "rgg/quadrature.hpp"
#include "rgg/rng.hpp"
#include "rgg/sturm.hpp"

using namespace rgg;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("criterion %d: %s — %s (%s)\n", criterion, pass ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned acceptance_threads() {
  if (const char* env = std::getenv("RGG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return default_threads();
}

// ---------------------------------------------------------------- criterion 1
void criterion_theory() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string why = "exact";

  const ContinuumSpectrum e1 = enumerate_spectrum(SigmaDiag::isotropic(1, 1.0), 7);
  const std::vector<double> want1 = {0, 2, 4, 6, 8, 10, 12};
  for (int i = 0; i < 7; ++i) ok &= e1.values[i] == want1[i];
  ok &= e1.exact;

  const ContinuumSpectrum e2 = enumerate_spectrum(SigmaDiag::isotropic(2, 1.0), 10);
  const std::vector<double> want2 = {0, 2, 2, 4, 4, 4, 6, 6, 6, 6};
  for (int i = 0; i < 10; ++i) ok &= e2.values[i] == want2[i];
  for (int g = 0; g < 4; ++g) ok &= e2.groups[g].multiplicity == g + 1;

  const ContinuumSpectrum e3 =
      enumerate_spectrum(SigmaDiag(std::vector<double>{1.0, 2.0}), 9);
  const std::vector<double> want3 = {0, 1, 2, 2, 3, 3, 4, 4, 4};
  for (int i = 0; i < 9; ++i) ok &= e3.values[i] == want3[i];
  for (int s = 0; s < 4; ++s) ok &= e3.groups[s].multiplicity == s / 2 + 1;

  const double secs = seconds_since(t0);
  ok &= secs < 1.0;
  char detail[128];
  std::snprintf(detail, sizeof detail, "zero tolerance, %.3f s", secs);
  report(1, ok, "continuum spectrum reproduces the three example patterns", detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_fig1a() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = ExperimentConfig::preset("fig1");
  cfg.threads = acceptance_threads();
  const ConvergenceTable table = run_convergence(cfg);

  bool ok = table.failed == 0;
  const auto means = table.column_means();
  char buf[256];
  std::string means_str;
  for (int k = 0; k < cfg.M; ++k) {
    const double target = 2.0 * (k + 1);
    ok &= std::abs(means[k] - target) <= 0.10 * target;
    std::snprintf(buf, sizeof buf, "%s%.3f", k ? "," : "", means[k]);
    means_str += buf;
  }
  int max_k0 = 0;
  for (const auto& r : table.reps) max_k0 = std::max(max_k0, r.K0);
  const double k0_cap = std::pow(static_cast<double>(cfg.n), 0.78);
  ok &= max_k0 <= k0_cap;
  const double secs = seconds_since(t0);
  ok &= secs < 1800.0;
  std::snprintf(buf, sizeof buf,
                "means=[%s] vs 2k within 10%%, max K0=%d <= n^0.78=%.0f, "
                "failed=%d, %.0f s",
                means_str.c_str(), max_k0, k0_cap, table.failed, secs);
  report(2, ok, "figure-1a reproduction at n=5000, 100 repetitions", buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion_fig1b() {
  ExperimentConfig cfg = ExperimentConfig::preset("fig1-sweep");
  cfg.threads = acceptance_threads();
  const auto rows = run_radius_sweep(cfg);
  double err_tiny = 0, err_mid = 0, err_big = 0;
  for (const auto& row : rows) {
    if (row.r == 0.005) err_tiny = row.mean_rel_error;
    if (row.r == 0.05) err_mid = row.mean_rel_error;
    if (row.r == 0.5) err_big = row.mean_rel_error;
  }
  const bool ok = std::isfinite(err_mid) && err_mid < err_tiny && err_mid < err_big;
  char buf[192];
  std::snprintf(buf, sizeof buf, "err(0.005)=%.4f, err(0.05)=%.4f, err(0.5)=%.4f",
                err_tiny, err_mid, err_big);
  report(3, ok, "figure-1b U-shape across the radius sweep", buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion_bias_slope() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = ExperimentConfig::preset("bias");
  const BiasSlopeResult res = run_bias(cfg);
  const double secs = seconds_since(t0);
  const bool ok = !res.exact_zero && res.slope >= 1.7 && res.slope <= 2.3 &&
                  secs < 300.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "slope=%.3f in [1.7, 2.3], %.1f s", res.slope, secs);
  report(4, ok, "bias norm scales as r^2", buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_eigenfunctions() {
  bool ok = true;
  // orthonormality under Gauss-Hermite, m <= 12, within 1e-10
  const SigmaDiag s1 = SigmaDiag::isotropic(1, 1.0);
  const QuadRule& gh = gauss_hermite(64);
  double worst_orth = 0.0;
  for (int m = 0; m <= 12; ++m)
    for (int mp = m; mp <= 12; ++mp) {
      const EigenFunction a(HermiteIndex({m}), s1);
      const EigenFunction b(HermiteIndex({mp}), s1);
      double acc = 0.0;
      for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double x[1] = {gh.nodes[i]};
        acc += gh.weights[i] * a({x, 1}) * b({x, 1});
      }
      worst_orth = std::max(worst_orth, std::abs(acc - (m == mp ? 1.0 : 0.0)));
    }
  ok &= worst_orth <= 1e-10;

  // eigen-relation residual <= 1e-8 for |k| <= 10, d <= 2
  double worst_resid = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const SigmaDiag s = d == 1 ? SigmaDiag(std::vector<double>{1.0})
                               : SigmaDiag(std::vector<double>{1.0, 2.0});
    std::vector<std::vector<int>> indices;
    if (d == 1)
      for (int k = 0; k <= 10; ++k) indices.push_back({k});
    else
      for (int k1 = 0; k1 <= 10; ++k1)
        for (int k2 = 0; k1 + k2 <= 10; ++k2) indices.push_back({k1, k2});
    for (const auto& idx : indices) {
      const EigenFunction phi(HermiteIndex(idx), s);
      const HermitePoly applied =
          HermitePoly::from_eigenfunction(phi).laplace_beltrami();
      const double lambda = phi.eigenvalue();
      double max_resid = 0.0, max_psi = 0.0;
      std::vector<double> x(d);
      std::vector<int> grid(d, 0);
      const int order = 24;
      const QuadRule& nodes = gauss_hermite(order);
      for (;;) {
        for (int i = 0; i < d; ++i) x[i] = s.sigma(i) * nodes.nodes[grid[i]];
        const double psi = phi({x.data(), x.size()});
        max_psi = std::max(max_psi, std::abs(psi));
        max_resid = std::max(
            max_resid, std::abs(applied({x.data(), x.size()}) - lambda * psi));
        int axis = 0;
        while (axis < d) {
          if (++grid[axis] < order) break;
          grid[axis] = 0;
          ++axis;
        }
        if (axis == d) break;
      }
      worst_resid = std::max(worst_resid, max_resid / std::max(max_psi, 1.0));
    }
  }
  ok &= worst_resid <= 1e-8;
  char buf[128];
  std::snprintf(buf, sizeof buf, "orthonormality gap %.2e, eigen residual %.2e",
                worst_orth, worst_resid);
  report(5, ok, "eigenfunction suite (orthonormality + eigen relation)", buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_solver_oracles() {
  bool ok = true;
  double worst_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 150 + static_cast<int>(seed) * 5;  // up to 295
    const PointCloud c = sample_gaussian(n, SigmaDiag::isotropic(1, 1.0), 500 + seed);
    GraphSpec spec;
    spec.r_n = 0.3;
    const SparseAffinity a = build_hard_affinity(c, spec);
    LaplacianOperator op(SparseAffinity(a), 1.0);
    const int count = 10;
    const EigPairs dense = smallest_eigs(op, count, SolverChoice::Dense);
    const EigPairs lanczos = smallest_eigs(op, count, SolverChoice::Lanczos);
    for (int i = 0; i < count; ++i)
      worst_gap = std::max(worst_gap, std::abs(dense.values[i] - lanczos.values[i]));
  }
  ok &= worst_gap <= 1e-8;

  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PointCloud c =
        sample_gaussian(150, SigmaDiag::isotropic(1, 1.0), 900 + seed);
    GraphSpec spec;
    spec.r_n = 0.07;
    const SparseAffinity a = build_hard_affinity(c, spec);
    const int comps = component_count(a);
    LaplacianOperator op(SparseAffinity(a), 1.0);
    const EigPairs pairs = smallest_eigs(op, std::min(150, comps + 5));
    int zeros = 0;
    for (double v : pairs.values) zeros += std::abs(v) < 1e-9 ? 1 : 0;
    mismatches += zeros == comps ? 0 : 1;
  }
  ok &= mismatches == 0;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "lanczos-dense gap %.2e <= 1e-8, component mismatches %d/30",
                worst_gap, mismatches);
  report(6, ok, "solver oracle equivalence on 30+30 random instances", buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion_lemma_suites() {
  bool ok = true;

  // entrywise kernel-closeness bound on 1e4 random pairs
  CounterRng rng(4242, 0);
  const double r = 0.4, alpha = 30.0;
  const KernelSpec g = KernelSpec::exponential(0.3);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double dist = std::abs(rng.normal(2 * static_cast<std::uint64_t>(trial)));
    const double hard = dist <= r ? g.g(dist / r) : 0.0;
    const double smooth = 1.0 / (1.0 + std::exp(-alpha * (r * r - dist * dist))) *
                          g.g_star(dist / r);
    const double bound =
        g.sup_g_star() / (1.0 + std::exp(alpha * std::abs(r * r - dist * dist)));
    if (std::abs(hard - smooth) > bound + 1e-15) ++violations;
  }
  ok &= violations == 0;

  // extension correspondence on an n=40 instance
  const PointCloud c = sample_gaussian(40, SigmaDiag::isotropic(1, 1.0), 4040);
  GraphSpec spec;
  spec.r_n = 0.3;
  spec.alpha_n = GraphSpec::practical_alpha(0.3);
  const ExtensionCheckResult ext = extension_correspondence_check(
      c, spec, compute_moments(1, spec.p, spec.g));
  ok &= ext.max_residual < 1e-8;

  // Hermite addition and generating identities within 1e-9
  double worst_add = 0.0;
  CounterRng hr(11, 0);
  for (int m = 0; m <= 10; ++m)
    for (int t = 0; t < 20; ++t) {
      const double x = 2.0 * hr.normal(2 * static_cast<std::uint64_t>(m * 20 + t));
      const double z = hr.normal(2 * static_cast<std::uint64_t>(m * 20 + t) + 1);
      double series = 0.0, binom = 1.0;
      for (int j = m; j >= 0; --j) {
        series += binom * hermite_eval(j, x) * std::pow(2.0 * z, m - j);
        binom *= static_cast<double>(j) / (m - j + 1.0);
      }
      const double direct = hermite_eval(m, x + z);
      worst_add = std::max(
          worst_add, std::abs(series - direct) / std::max(1.0, std::abs(direct)));
    }
  ok &= worst_add <= 1e-9;

  double worst_gen = 0.0;
  const double sig = 1.0;
  for (int t = 0; t < 50; ++t) {
    const double x = 1.5 * hr.normal(2 * static_cast<std::uint64_t>(1000 + t));
    const double z = (hr.uniform(2 * static_cast<std::uint64_t>(1000 + t) + 1) - 0.5) *
                     0.5 * sig;
    const double direct = std::exp(-((x + z) * (x + z) - x * x) / (2 * sig * sig));
    double series = 0.0, term = 1.0;
    for (int a = 0; a < 40; ++a) {
      series += hermite_eval(a, x / sig) * term;
      term *= (-z / (2.0 * sig)) / (a + 1.0);
    }
    series *= std::exp(-z * z / (4.0 * sig * sig));
    worst_gen = std::max(worst_gen, std::abs(series - direct));
  }
  ok &= worst_gen <= 1e-9;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "closeness violations %d, extension resid %.2e, addition %.2e, "
                "generating %.2e",
                violations, ext.max_residual, worst_add, worst_gen);
  report(7, ok, "lemma-level property suites", buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_detection() {
  ExperimentConfig cfg = ExperimentConfig::preset("detect");
  cfg.detect_models = {"identity"};
  cfg.detect_sigmas = {0.0, 1.0, 3.0};
  cfg.repetitions = 5;
  cfg.threads = acceptance_threads();
  const DetectionReport rep = run_detection(cfg);

  double t0 = -1, t1 = -1, t3 = -1;
  for (const auto& cell : rep.cells) {
    if (cell.sigma == 0.0) t0 = cell.T_mean;
    if (cell.sigma == 1.0) t1 = cell.T_mean;
    if (cell.sigma == 3.0) t3 = cell.T_mean;
  }
  bool ok = t0 >= 0 && t1 > 0 && t3 > 0;
  ok &= t0 < 0.5 * t1;

  // large-sigma prediction from the d=1 gaussian limit: edge -> 2k/sigma^2
  const std::vector<double>& nu = rep.model_nu[0];
  double pred = 0.0;
  for (int k = 1; k <= cfg.M; ++k)
    pred += std::abs(2.0 * k / 9.0 - nu[k]) / cfg.M;
  ok &= std::abs(t3 - pred) <= 0.15 * pred;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "T(0)=%.2f < 0.5 T(1)=%.2f, T(3)=%.2f vs prediction %.2f "
                "(gap %.1f%%)",
                t0, 0.5 * t1, t3, pred, 100.0 * std::abs(t3 - pred) / pred);
  report(8, ok, "detection statistic trend for the identity signal", buf);
}

// ---------------------------------------------------------------- criterion 9
void criterion_caveat() {
  report(9, true,
         "asymptotic statements are out of numerical reach by construction",
         "acceptance rests on the scaled experiments and invariant suites above");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_theory();
  criterion_fig1a();
  criterion_fig1b();
  criterion_bias_slope();
  criterion_eigenfunctions();
  criterion_solver_oracles();
  criterion_lemma_suites();
  criterion_detection();
  criterion_caveat();
  std::printf("acceptance: %d failure(s), %.0f s total\n", failures,
              seconds_since(t0));
  return failures;
}
