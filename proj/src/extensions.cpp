#include "matquad/extensions.hpp"

#include <cmath>
#include <string>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"
#include "matquad/quadrature.hpp"
#include "matquad/verify.hpp"

namespace matquad {

StrongSequence::StrongSequence(int n1, int n2, std::vector<Eigen::MatrixXd> moments)
    : n1_(n1), n2_(n2) {
  if (n1 < 0 || n2 < 1) {
    throw InvalidInput("StrongSequence: requires n1 >= 0 and n2 >= 1");
  }
  if (static_cast<int>(moments.size()) != 2 * n1 + 2 * n2 + 1) {
    throw InvalidInput("StrongSequence: expected " + std::to_string(2 * n1 + 2 * n2 + 1) +
                       " moments, got " + std::to_string(moments.size()));
  }
  MomentSequence validated(std::move(moments));
  p_ = validated.p();
  moments_ = validated.moments();
}

const Eigen::MatrixXd& StrongSequence::at(int k) const {
  if (k < -2 * n1_ || k > 2 * n2_) {
    throw InvalidInput("StrongSequence: index " + std::to_string(k) + " out of range");
  }
  return moments_[static_cast<std::size_t>(k + 2 * n1_)];
}

MomentSequence StrongSequence::shifted() const { return MomentSequence(moments_); }

AtomicMeasure avoid_atom_measure(const MomentSequence& seq, double t,
                                 const ToleranceConfig& cfg) {
  QuadratureProblem problem{seq, t, 0, cfg, Z1Zero{}, std::nullopt};
  return minimal_measure(problem).measure;
}

AtomicMeasure solve_strong_hamburger(const StrongSequence& strong, const ToleranceConfig& cfg) {
  cfg.validate();
  const MomentSequence shifted = strong.shifted();
  const int total_order = strong.n1() + strong.n2();
  const MomentMatrix full = moment_matrix(shifted, total_order);
  if (!is_positive_definite(full.mat, cfg)) {
    throw PreconditionViolation(
        "two-sided moment matrix is not positive definite; the singular strong case is "
        "unsupported");
  }

  QuadratureProblem problem{shifted, 0.0, 0, cfg, Z1Zero{}, std::nullopt};
  AtomicMeasure measure = minimal_measure(problem).measure;

  for (auto& atom : measure.atoms) {
    if (std::abs(atom.position) <= cfg.root_cluster_tol) {
      throw NumericFailure("strong solver produced an atom at zero");
    }
    atom.mass *= std::pow(atom.position, 2 * strong.n1());
  }

  for (int k = -2 * strong.n1(); k <= 2 * strong.n2(); ++k) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(strong.p(), strong.p());
    for (const auto& atom : measure.atoms) {
      acc += std::pow(atom.position, k) * atom.mass;
    }
    const double residual = (acc - strong.at(k)).norm() / std::max(1.0, strong.at(k).norm());
    if (residual > cfg.residual_rel_tol) {
      throw NumericFailure("strong solver residual " + std::to_string(residual) +
                           " at moment index " + std::to_string(k));
    }
  }
  return measure;
}

AtomicMeasure generalized_measure(const MomentSequence& seq, double t, int m,
                                  const ToleranceConfig& cfg) {
  cfg.validate();
  if (seq.degree() < 2 || seq.degree() % 2 != 0) {
    throw InvalidInput("generalized_measure: sequence degree must be even and at least 2");
  }
  const int n = seq.degree() / 2;
  const int p = seq.p();
  if (m < 0 || m > p) {
    throw InvalidInput("generalized_measure: multiplicity must lie in [0, p]");
  }
  const MomentMatrix lower = moment_matrix(seq, n - 1);
  if (!is_psd(lower.mat, cfg) || !is_positive_definite(lower.mat, cfg)) {
    throw PreconditionViolation("generalized_measure: M(n-1) must be positive definite");
  }

  int rank_loc = 0;
  int rank_aug = 0;
  if (n >= 2) {
    const Eigen::MatrixXd loc = localizing_matrix(seq, t, n - 2).mat;
    const Eigen::MatrixXd ext = localized_column_block(seq, t, n - 1, n - 2).data;
    Eigen::MatrixXd aug(loc.rows(), loc.cols() + ext.cols());
    aug << loc, ext;
    rank_loc = numerical_rank(loc, cfg);
    rank_aug = numerical_rank(aug, cfg);
  }
  if (m != rank_aug - rank_loc) {
    throw PreconditionViolation("generalized_measure: rank condition (5.1) fails; augmented rank " +
                                std::to_string(rank_aug) + ", localizing rank " +
                                std::to_string(rank_loc) + ", prescribed multiplicity " +
                                std::to_string(m));
  }

  const MomentSequence odd = seq.truncated(2 * n - 1);
  const Eigen::MatrixXd flat = flat_extension(odd, cfg);
  const Eigen::MatrixXd schur = symmetrize(seq.at(2 * n) - flat);
  if (!is_psd(schur, cfg)) {
    throw PreconditionViolation(
        "generalized_measure: Schur complement condition (5.2) fails; the top moment sits below "
        "its rank-preserving completion");
  }

  // Rank-preserving route: the given odd data already determines an np-rank
  // measure; the Schur complement escapes to infinity untouched.
  try {
    const MatrixPolynomial relation = column_relation(odd, cfg);
    RootExtractionOptions opts;
    opts.snap_point = t;
    opts.snap_multiplicity = m;
    const std::vector<RootCluster> clusters = root_clusters(relation, cfg, opts);
    AtomicMeasure measure = masses_from_atoms(odd.extended(flat), relation, clusters, cfg);
    if (total_rank(measure, cfg) != n * p ||
        multiplicity_at(measure, t, cfg) != m) {
      throw NumericFailure("rank-preserving route missed the prescribed multiplicity");
    }
    const VerifyReport report = verify_measure(odd, measure, cfg);
    if (report.max_relative_residual > cfg.residual_rel_tol) {
      throw NumericFailure("rank-preserving route fails moment reconstruction");
    }
    if (numerical_rank(schur, cfg) > 0) {
      measure.infinity_mass = schur;
    }
    return measure;
  } catch (const NumericFailure&) {
    // The flat completion pins the wrong multiplicity at t; retry with the
    // identity-shifted completion below.
  }

  const Eigen::MatrixXd completed = symmetrize(flat + Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd infinity = symmetrize(seq.at(2 * n) - completed);
  if (!is_psd(infinity, cfg)) {
    throw PreconditionViolation(
        "generalized_measure: Schur complement condition (5.2) fails for the completed sequence; "
        "the infinity mass would not be positive semidefinite");
  }
  QuadratureProblem problem{odd.extended(completed), t, m, cfg, Z1Zero{}, std::nullopt};
  AtomicMeasure measure = minimal_measure(problem).measure;
  if (numerical_rank(infinity, cfg) > 0) {
    measure.infinity_mass = infinity;
  }
  return measure;
}

}  // namespace matquad
