#pragma once

#include <Eigen/Dense>
#include <vector>

#include "matquad/measure.hpp"
#include "matquad/moments.hpp"
#include "matquad/tolerance.hpp"

namespace matquad {

/// Two-sided moment data S_{-2n1}, ..., S_{2n2} of symmetric p x p matrices.
class StrongSequence {
 public:
  StrongSequence(int n1, int n2, std::vector<Eigen::MatrixXd> moments);

  int p() const { return p_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  /// S_k for k in [-2n1, 2n2].
  const Eigen::MatrixXd& at(int k) const;
  /// The same data re-indexed as an ordinary sequence of degree 2(n1+n2).
  MomentSequence shifted() const;

 private:
  int p_;
  int n1_;
  int n2_;
  std::vector<Eigen::MatrixXd> moments_;
};

/// Minimal measure with no atom at t (multiplicity 0); unconditional for
/// positive definite M(n).
AtomicMeasure avoid_atom_measure(const MomentSequence& seq, double t,
                                 const ToleranceConfig& cfg = {});

/// Strong two-sided solver: re-indexes to an ordinary sequence, solves while
/// avoiding the atom 0, and rescales each mass by the matching power of its
/// atom so that every moment S_k, k in [-2n1, 2n2], is reproduced. Requires
/// the full two-sided moment matrix to be positive definite.
AtomicMeasure solve_strong_hamburger(const StrongSequence& strong,
                                     const ToleranceConfig& cfg = {});

/// Generalized rule with a mass at infinity. Preconditions: M(n-1) positive
/// definite, the rank equality on the order-(n-2) localizing data, and a psd
/// Schur complement of M(n-1) in M(n). The real part reproduces
/// S_0..S_{2n-1}; the infinity mass closes the top moment.
AtomicMeasure generalized_measure(const MomentSequence& seq, double t, int m,
                                  const ToleranceConfig& cfg = {});

}  // namespace matquad
