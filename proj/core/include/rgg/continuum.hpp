#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rgg/hermite.hpp"
#include "rgg/sampling.hpp"

namespace rgg {

// Sorted spectrum of the weighted Laplace-Beltrami operator:
// { sum_i 2 k_i / sigma_i^2 : k in N^d } with multiplicities.
struct ContinuumSpectrum {
  struct Group {
    double value = 0.0;
    int multiplicity = 0;
    std::vector<std::vector<int>> indices;  // 0-based tuples achieving value
  };

  std::vector<double> values;  // ascending, one entry per eigenvalue
  std::vector<Group> groups;
  SigmaDiag sigma;
  bool exact = false;  // integer-rational comparison path was used

  // group id of the j-th eigenvalue (0-based j)
  std::vector<int> group_of;
};

// First `count` eigenvalues by best-first heap expansion over index tuples.
// When every 2/sigma_i^2 is a small-denominator rational the comparison is
// exact integer arithmetic; otherwise values within 1e-12*max(1,|v|) are
// grouped.
ContinuumSpectrum enumerate_spectrum(const SigmaDiag& sigma, int count);

// CSV rows (j, a_j, multiplicity_group_id, k-tuple), semicolon-joined tuple.
std::string spectrum_csv(const ContinuumSpectrum& spec);

// sqrt of the F-norm integral f^2 rho^2 dx by tensor Gauss-Hermite with the
// substitution x_i = sigma_i t_i; the order doubles automatically when two
// successive orders disagree by more than 1e-10 relatively.
double f_norm(const std::function<double(std::span<const double>)>& f,
              const SigmaDiag& sigma, int quad_order = 64);

}  // namespace rgg
