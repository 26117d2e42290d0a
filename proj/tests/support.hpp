#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "matquad/measure.hpp"
#include "matquad/moments.hpp"

namespace testsupport {

inline Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Eigen::MatrixXd mat1(double a) {
  Eigen::MatrixXd m(1, 1);
  m << a;
  return m;
}

inline matquad::MomentSequence scalar_sequence(std::initializer_list<double> values) {
  std::vector<Eigen::MatrixXd> moments;
  for (double v : values) {
    moments.push_back(mat1(v));
  }
  return matquad::MomentSequence(std::move(moments));
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Degree-2 data with a rank-deficient localizing matrix at 0; admits the two
// measures with atom sets {0, 1, +-sqrt(3)} and {-1, 0, 1, 3}.
struct FixtureA {
  Eigen::MatrixXd s0 = mat2(18, 10, 10, 7);
  Eigen::MatrixXd s1 = mat2(2, 2, 2, 2);
  Eigen::MatrixXd s2 = mat2(50, 26, 26, 14);
  Eigen::MatrixXd dependence = [] {
    Eigen::MatrixXd j(3, 1);
    j << -0.5, 1.0, 0.5;
    return j;
  }();

  matquad::MomentSequence sequence() const { return matquad::MomentSequence({s0, s1, s2}); }
};

// Degree-2 data with invertible localizing matrix at 0; the unique measure
// with a double atom at 0 has the remaining atoms 2 +- sqrt(13).
struct FixtureB {
  Eigen::MatrixXd s0 = mat2(4, 3, 3, 4);
  Eigen::MatrixXd s1 = mat2(-1, 1, 1, 0);
  Eigen::MatrixXd s2 = mat2(5, 1, 1, 2);

  matquad::MomentSequence sequence() const { return matquad::MomentSequence({s0, s1, s2}); }

  Eigen::MatrixXd mass_at_zero() const { return mat2(3.0, 10.0 / 3.0, 10.0 / 3.0, 34.0 / 9.0); }
  Eigen::MatrixXd mass_low() const {
    const double r = std::sqrt(13.0);
    return mat2((13.0 + 3.0 * r) / 26.0, (-13.0 - 5.0 * r) / 78.0, (-13.0 - 5.0 * r) / 78.0,
                (13.0 + 2.0 * r) / 117.0);
  }
  Eigen::MatrixXd mass_high() const {
    const double r = std::sqrt(13.0);
    return mat2((13.0 - 3.0 * r) / 26.0, (5.0 * r - 13.0) / 78.0, (5.0 * r - 13.0) / 78.0,
                (13.0 - 2.0 * r) / 117.0);
  }
};

inline const matquad::AtomicMeasure::Atom* find_atom(const matquad::AtomicMeasure& measure,
                                                     double x, double tol = 1e-6) {
  for (const auto& atom : measure.atoms) {
    if (std::abs(atom.position - x) <= tol) {
      return &atom;
    }
  }
  return nullptr;
}

}  // namespace testsupport
