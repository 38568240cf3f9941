#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rgg/kernel.hpp"
#include "rgg/metric.hpp"
#include "rgg/moments.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

struct GraphSpec {
  double r_n = 0.0;
  MetricOrder p = MetricOrder::lp(2.0);
  KernelSpec g = KernelSpec::constant_one();
  // smoothing sharpness; unset selects the hard radius kernel
  std::optional<double> alpha_n;
  // drop threshold for smoothed entries
  double tau = 1e-12;

  static double practical_alpha(double r_n) { return 50.0 / (r_n * r_n); }
};

// Symmetric sparse affinity in CSR form (both triangles plus diagonal stored;
// each pair weight computed once). Immutable after construction.
struct SparseAffinity {
  enum class Kind { Hard, Smoothed };

  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;      // sorted within each row
  std::vector<double> val;
  std::vector<double> degrees;  // D(i,i) = row sums
  Kind kind = Kind::Hard;
  double tau = 0.0;
  // eigenvalue perturbation bound n*tau/min_degree from dropped entries
  double drop_bound = 0.0;

  std::size_t nnz() const { return col.size(); }
  double min_degree() const;
};

// All unordered pairs within lp distance r_n, found through a uniform grid of
// cell side r_n (the l-infinity bucket is a superset for every p). Pairs are
// returned with i < j, sorted.
std::vector<std::pair<int, int>> neighbor_pairs(const PointCloud& cloud, double r_n,
                                                const MetricOrder& p,
                                                unsigned threads = 1);

SparseAffinity build_hard_affinity(const PointCloud& cloud, const GraphSpec& spec,
                                   unsigned threads = 1);

// sigmoid(alpha_n (r_n^2 - dist^2)) g*(dist/r_n) with argument clamping;
// entries below spec.tau are not stored.
SparseAffinity build_smoothed_affinity(const PointCloud& cloud, const GraphSpec& spec,
                                       unsigned threads = 1);

// Random-walk Laplacian L_rw = I - D^-1 K with scaled eigenvalues
// scale * eig(L_rw); also exposes the symmetrized S = D^-1/2 K D^-1/2.
class LaplacianOperator {
 public:
  LaplacianOperator(SparseAffinity affinity, double scale);

  int n() const { return affinity_->n; }
  double scale() const { return scale_; }
  const SparseAffinity& affinity() const { return *affinity_; }

  // y = (I - D^-1 K) x
  void apply_rw(std::span<const double> x, std::span<double> y) const;
  // y = D^-1/2 K D^-1/2 x
  void apply_sym(std::span<const double> x, std::span<double> y) const;

  std::span<const double> inv_sqrt_degrees() const { return inv_sqrt_deg_; }

 private:
  std::shared_ptr<const SparseAffinity> affinity_;
  double scale_;
  std::vector<double> inv_deg_;
  std::vector<double> inv_sqrt_deg_;
};

inline LaplacianOperator build_laplacian(SparseAffinity affinity, double scale) {
  return LaplacianOperator(std::move(affinity), scale);
}

// Upper bound on ||L_scaled - L_tilde_scaled|| via
// scale * sqrt(n) * max-row-sum of |D^-1 K - Dt^-1 Kt|.
double matrix_closeness_check(const LaplacianOperator& hard,
                              const LaplacianOperator& smoothed);

// component label per vertex (union-find over the stored pattern)
std::vector<int> connected_components(const SparseAffinity& a);
int component_count(const SparseAffinity& a);

// MatrixMarket coordinate format, symmetric, %.17g weights (exact decimal
// round-trip for doubles).
std::string to_matrix_market(const SparseAffinity& a);

}  // namespace rgg
