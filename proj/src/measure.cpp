#include "matquad/measure.hpp"

#include <cmath>

#include "matquad/linalg.hpp"

namespace matquad {

int total_rank(const AtomicMeasure& measure, const ToleranceConfig& cfg) {
  int rank = 0;
  for (const auto& atom : measure.atoms) {
    rank += numerical_rank(atom.mass, cfg);
  }
  if (measure.infinity_mass.has_value()) {
    rank += numerical_rank(*measure.infinity_mass, cfg);
  }
  return rank;
}

int multiplicity_at(const AtomicMeasure& measure, double x, const ToleranceConfig& cfg) {
  const double radius = cfg.root_cluster_tol * std::max(1.0, std::abs(x));
  for (const auto& atom : measure.atoms) {
    if (std::abs(atom.position - x) <= radius) {
      return numerical_rank(atom.mass, cfg);
    }
  }
  return 0;
}

}  // namespace matquad
