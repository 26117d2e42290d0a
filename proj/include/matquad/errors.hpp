#pragma once

#include <stdexcept>
#include <string>

namespace matquad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments or data: non-finite entries, shape mismatches,
/// asymmetric matrices where symmetry is required, unparsable files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The moment matrix is positive semidefinite but singular. The singular
/// case is outside the scope of this solver.
class UnsupportedSingular : public Error {
 public:
  using Error::Error;
};

/// The prescribed multiplicity exceeds the feasibility bound.
class InfeasibleMultiplicity : public Error {
 public:
  InfeasibleMultiplicity(const std::string& msg, int max_mult)
      : Error(msg), max_multiplicity(max_mult) {}
  int max_multiplicity;
};

/// A stated precondition of the strong or generalized solver fails.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: nonreal roots, indefinite masses, residual breach,
/// rank/multiplicity mismatch, or an explicit override failing validation.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace matquad
