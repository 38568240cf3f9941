#pragma once

#include <stdexcept>
#include <string>

namespace rgg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// A quadrature failed to reach its tolerance after the maximum refinement.
struct QuadratureError : Error {
  QuadratureError(const std::string& what, double est_error)
      : Error(what), est_error(est_error) {}
  double est_error;
};

// The eigenvalue list ended at or below delta; more eigenvalues are needed
// before K0 is determined.
struct InsufficientSpectrum : Error {
  using Error::Error;
};

struct DeltaConstraintViolation : Error {
  using Error::Error;
};

// Lanczos did not lock the requested number of pairs within the sweep cap.
struct SolverNotConverged : Error {
  using Error::Error;
};

// A row of a smoothed affinity lost all entries to the drop threshold.
struct ZeroDegree : Error {
  using Error::Error;
};

// The smoothed-operator denominator fell below the positivity floor; the
// evaluation point is effectively isolated from the sample.
struct IsolatedPoint : Error {
  using Error::Error;
};

// adaptive_spectrum hit its growth cap with K0 still undetermined.
struct GrowthCapReached : Error {
  using Error::Error;
};

}  // namespace rgg
