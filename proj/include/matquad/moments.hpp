#pragma once

#include <Eigen/Dense>
#include <vector>

#include "matquad/tolerance.hpp"

namespace matquad {

/// A truncated matrix moment sequence S_0, ..., S_deg of symmetric p x p
/// matrices. Odd top degrees are first-class: the solver extends sequences
/// one moment at a time. Matrices are symmetrized on ingestion; asymmetry
/// beyond 1e-9 relative emits a warning on stderr.
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<Eigen::MatrixXd> moments);

  int p() const { return p_; }
  int degree() const { return static_cast<int>(moments_.size()) - 1; }
  const Eigen::MatrixXd& at(int i) const;
  const std::vector<Eigen::MatrixXd>& moments() const { return moments_; }

  /// Copy keeping S_0..S_new_degree.
  MomentSequence truncated(int new_degree) const;
  /// Copy with one more moment appended.
  MomentSequence extended(const Eigen::MatrixXd& next) const;

 private:
  int p_;
  std::vector<Eigen::MatrixXd> moments_;
};

/// Block Hankel moment matrix M(k) with block (i, j) = S_{i+j-2}.
struct MomentMatrix {
  int p = 0;
  int order = 0;
  Eigen::MatrixXd mat;

  /// Block column i as the stacked (order+1)p x p matrix [S_i; ...; S_{i+order}].
  Eigen::MatrixXd block_column(int i) const;
};

/// Block Hankel localizing matrix with block (i, j) = S_{i+j-1} - t S_{i+j-2}.
struct LocalizingMatrix {
  int p = 0;
  int order = 0;
  double shift = 0.0;
  Eigen::MatrixXd mat;
};

/// Stacked column block [S_i; S_{i+1}; ...; S_{i+j}] (or its localized variant).
struct ColumnBlock {
  int offset = 0;
  int height = 0;
  Eigen::MatrixXd data;
};

MomentMatrix moment_matrix(const MomentSequence& seq, int k);
LocalizingMatrix localizing_matrix(const MomentSequence& seq, double t, int ell);
ColumnBlock column_block(const MomentSequence& seq, int i, int j);
ColumnBlock localized_column_block(const MomentSequence& seq, double t, int i, int j);

/// The sequence {S_{i+1} - t S_i}: localizing matrices are exactly the moment
/// matrices of this sequence.
MomentSequence localized_sequence(const MomentSequence& seq, double t);

/// L(q) = sum_i q_i S_i for a scalar polynomial q given by ascending
/// coefficients. Requires deg q <= deg of the sequence.
Eigen::MatrixXd riesz_apply(const MomentSequence& seq, const Eigen::VectorXd& q);

/// Moments of the pushforward under x -> x + s (binomial re-expansion).
MomentSequence shift_sequence(const MomentSequence& seq, double s);

/// Solvability test for an even-degree sequence: M(n) psd together with the
/// column containment of the one-step extension. Vacuous (true) for positive
/// definite M(n).
bool hamburger_solvable(const MomentSequence& seq, const ToleranceConfig& cfg = {});

}  // namespace matquad
