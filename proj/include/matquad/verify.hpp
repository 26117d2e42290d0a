#pragma once

#include <cstdint>
#include <vector>

#include "matquad/measure.hpp"
#include "matquad/moments.hpp"
#include "matquad/tolerance.hpp"

namespace matquad {

struct VerifyReport {
  double max_relative_residual = 0.0;
  std::vector<double> per_moment_residuals;
  int total_rank = 0;
  bool psd_ok = false;
  bool minimal = false;

  bool green(const ToleranceConfig& cfg = {}) const;
};

/// Power moments S_i = sum_j A_j x_j^i for i = 0..degree; a mass at infinity
/// contributes to the top moment only, so degree must be the designated top
/// degree when that mass is present.
MomentSequence reconstruct_moments(const AtomicMeasure& measure, int degree);

/// Residuals of reconstruct_moments against seq, mass checks, and the
/// minimality flag total_rank == rank M(n).
VerifyReport verify_measure(const MomentSequence& seq, const AtomicMeasure& measure,
                            const ToleranceConfig& cfg = {});

/// Classical scalar Gaussian quadrature through the tridiagonal Jacobi
/// matrix: independent of the companion-matrix pipeline, used for
/// differential testing of the p = 1 path. Requires p = 1 and an odd top
/// degree 2n+1; returns the n+1 point rule matching S_0..S_{2n+1}.
AtomicMeasure scalar_oracle(const MomentSequence& seq, const ToleranceConfig& cfg = {});

/// Deterministic fixture generator: distinct well-separated atoms with random
/// psd masses of the prescribed ranks. The rank profile must consist of
/// values in [1, p] summing to (n+1)p.
AtomicMeasure sample_random_measure(int p, int n, const std::vector<int>& rank_profile,
                                    std::uint64_t seed, const ToleranceConfig& cfg = {});

}  // namespace matquad
