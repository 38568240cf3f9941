#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rgg/graph.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

// Threshold policy for the trivial-eigenvalue count K0. The paper's
// constraint delta < min_i sigma_i^-2 must hold before edge extraction.
struct DeltaPolicy {
  double delta = 0.0;
  bool constraint_ok = false;

  // default delta = 0.5 * min sigma_i^-2, strictly inside the constraint
  static DeltaPolicy from_sigma(const SigmaDiag& sigma);
  static DeltaPolicy from_sigma(const SigmaDiag& sigma, double delta);
  // detection pipeline: sigma unknown, delta supplied by the caller
  static DeltaPolicy user(double delta);
};

enum class SolverChoice { Auto, Dense, Lanczos };

// Eigenpairs of L_rw in ascending order (unscaled units).
struct EigPairs {
  std::vector<double> values;     // ascending eigenvalues of L_rw
  Eigen::MatrixXd vectors;        // columns are L_rw eigenvectors
  std::vector<double> residuals;  // ||L_rw v - lambda v|| / ||v|| per pair
  std::string solver;             // "dense" | "lanczos"
};

// The `count` algebraically smallest eigenvalues of L_rw, obtained as
// 1 - (largest eigenvalues of S) with S = D^-1/2 K D^-1/2. Dense symmetric
// solve when n <= 2000 (or forced); otherwise Lanczos with full
// reorthogonalization and deflation of converged Ritz pairs, seeded with the
// exact eigenvalue-1 invariant subspace spanned by D^1/2 1_C per connected
// component C.
EigPairs smallest_eigs(const LaplacianOperator& op, int count,
                       SolverChoice choice = SolverChoice::Auto,
                       std::uint64_t lanczos_seed = 0x5eed);

// K0 = #{ j : lambda_j <= delta } over an ascending scaled eigenvalue list.
// The list must extend beyond delta, otherwise InsufficientSpectrum.
int compute_K0(std::span<const double> scaled_ascending, const DeltaPolicy& policy);

// lambda_{K0+1..K0+M} in scaled units.
std::vector<double> edge_eigenvalues(std::span<const double> scaled_ascending, int K0,
                                     int M);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, scaled units
  int K0 = 0;
  std::vector<double> edge;  // M values
  double delta = 0.0;
  std::string solver;
  std::vector<double> residuals;
  double residual_max = 0.0;
  double wall_time_s = 0.0;

  std::string to_json() const;
};

// Repeatedly enlarges the eigenvalue count (geometric growth from M+8) until
// compute_K0 succeeds and K0+M eigenvalues exist. Throws GrowthCapReached
// when the count would exceed n with K0 still undetermined.
SpectrumResult adaptive_spectrum(const LaplacianOperator& op, const DeltaPolicy& policy,
                                 int M, SolverChoice choice = SolverChoice::Auto);

}  // namespace rgg
