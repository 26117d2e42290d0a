#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "matquad/tolerance.hpp"

namespace matquad {

/// Finitely atomic matrix-valued measure: pairs of a real atom and a
/// symmetric psd p x p mass, positions strictly increasing, plus an optional
/// mass at infinity (contributing only to the top-degree moment).
struct AtomicMeasure {
  struct Atom {
    double position = 0.0;
    Eigen::MatrixXd mass;
  };

  int p = 0;
  std::vector<Atom> atoms;
  std::optional<Eigen::MatrixXd> infinity_mass;
};

/// Sum of mass ranks, including the mass at infinity when present.
int total_rank(const AtomicMeasure& measure, const ToleranceConfig& cfg = {});

/// Rank of the mass at the atom within root_cluster_tol of x, else 0.
int multiplicity_at(const AtomicMeasure& measure, double x, const ToleranceConfig& cfg = {});

}  // namespace matquad
