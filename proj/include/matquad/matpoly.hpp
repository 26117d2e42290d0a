#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "matquad/moments.hpp"
#include "matquad/tolerance.hpp"

namespace matquad {

/// Matrix polynomial P(x) = sum_i x^i P_i with p x p real coefficients,
/// stored ascending.
struct MatrixPolynomial {
  int p = 0;
  std::vector<Eigen::MatrixXd> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_monic(double tol = 1e-12) const;
};

/// A group of companion eigenvalues merged into one real root.
struct RootCluster {
  double location = 0.0;
  int multiplicity = 0;
  std::vector<std::complex<double>> raw_roots;
};

struct RootExtractionOptions {
  /// When set, eigenvalues belonging to this point are snapped to it exactly.
  std::optional<double> snap_point;
  /// Number of eigenvalues assigned to snap_point: the snap_multiplicity
  /// closest ones. Negative means radius-based snapping instead.
  int snap_multiplicity = -1;
  /// Keep clusters with a genuinely nonreal mean instead of throwing.
  bool allow_complex = false;
};

/// Horner evaluation at a scalar point.
Eigen::MatrixXd eval_scalar(const MatrixPolynomial& poly, double x);

/// Evaluation on a moment matrix: sum_i v_i^{(order)} P_i, replacing each
/// monomial by the matching block column. A zero result certifies a block
/// column relation.
Eigen::MatrixXd eval_on_moment_matrix(const MatrixPolynomial& poly, const MomentMatrix& m);

/// Standard block companion linearization of a monic polynomial of degree
/// d >= 1; its dp eigenvalues are the zeros of det P(x).
Eigen::MatrixXd block_companion(const MatrixPolynomial& poly);

/// Companion eigenvalues grouped into clusters, sorted by location.
/// Conjugate pairs whose imaginary split is within the multiple-root
/// tolerance collapse to a double real root; anything further from the real
/// axis throws NumericFailure unless allow_complex is set.
std::vector<RootCluster> root_clusters(const MatrixPolynomial& poly, const ToleranceConfig& cfg,
                                       const RootExtractionOptions& opts);

std::vector<RootCluster> real_roots_with_multiplicity(const MatrixPolynomial& poly,
                                                      const ToleranceConfig& cfg = {});

/// Coefficients of det P(x), ascending, recovered by evaluation at Chebyshev
/// points and interpolation. Leading coefficient normalized to 1 for monic
/// input. Diagnostics only.
Eigen::VectorXd det_poly(const MatrixPolynomial& poly);

}  // namespace matquad
