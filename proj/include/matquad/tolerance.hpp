#pragma once

namespace matquad {

/// Numerical thresholds shared by every solver stage. All values are
/// relative tolerances and must lie strictly inside (0, 1).
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;     ///< singular-value cutoff for numerical rank
  double psd_tol = 1e-9;           ///< eigenvalue slack for semidefiniteness
  double root_imag_tol = 1e-7;     ///< largest imaginary part accepted as a real root
  double root_cluster_tol = 1e-6;  ///< radius used when merging roots into one atom
  double residual_rel_tol = 1e-8;  ///< relative Frobenius bound for verification

  /// Throws InvalidInput if any field is outside (0, 1).
  void validate() const;
};

}  // namespace matquad
