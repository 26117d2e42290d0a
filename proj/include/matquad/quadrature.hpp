#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "matquad/matpoly.hpp"
#include "matquad/measure.hpp"
#include "matquad/moments.hpp"
#include "matquad/tolerance.hpp"
#include "matquad/verify.hpp"

namespace matquad {

/// Strategies for the free symmetric completion block. Zero and
/// ScaledIdentity escalate along a deterministic ladder when the rank
/// condition rejects them; RandomSymmetric draws from a seeded generator;
/// Explicit is validated and used as-is.
struct Z1Zero {};
struct Z1ScaledIdentity {
  double scale = 1.0;
};
struct Z1RandomSymmetric {
  std::uint64_t seed = 0;
};
struct Z1Explicit {
  Eigen::MatrixXd value;
};
using Z1Strategy = std::variant<Z1Zero, Z1ScaledIdentity, Z1RandomSymmetric, Z1Explicit>;

/// A minimal-measure problem: sequence of even degree 2n with positive
/// definite M(n), the prescribed atom and its multiplicity, and the free
/// choices of the construction. dependence_override replaces the default
/// minimal-norm coefficient matrix with any member of the solution set.
struct QuadratureProblem {
  MomentSequence seq;
  double atom = 0.0;
  int multiplicity = 0;
  ToleranceConfig tol{};
  Z1Strategy z1{Z1Zero{}};
  std::optional<Eigen::MatrixXd> dependence_override;
};

/// Every intermediate object of the construction, for diagnostics and
/// golden-testing.
struct ConstructionTrace {
  std::vector<int> permutation;    ///< column order: permuted j = original permutation[j]
  Eigen::MatrixXd dependence;      ///< ((n+1)p - m) x m coefficients expressing the trailing columns
  Eigen::MatrixXd completion;      ///< free (p-m) x (p-m) symmetric block
  Eigen::MatrixXd coupling;        ///< (p-m) x m block derived from the completion
  Eigen::MatrixXd tail;            ///< m x m closing block
  Eigen::MatrixXd next_moment;     ///< constructed S_{2n+1}
  Eigen::MatrixXd flat_moment;     ///< rank-preserving S_{2n+2}
  MatrixPolynomial relation;       ///< monic degree-(n+1) block column relation
  std::vector<RootCluster> clusters;
  VerifyReport report;
};

struct SolveResult {
  AtomicMeasure measure;
  ConstructionTrace trace;
};

/// Largest admissible multiplicity at t: rank of the order-(n-1) localizing
/// matrix minus (n-1)p. Always in [0, p] for positive definite M(n).
int max_multiplicity(const MomentSequence& seq, double t, const ToleranceConfig& cfg = {});

/// Column order putting p-m columns of the localized extension block first
/// so that they realize the full rank increment. Greedy first-fit in natural
/// column order; the identity whenever that already works.
std::vector<int> select_column_split(const MomentSequence& seq, double t, int m,
                                     const ToleranceConfig& cfg = {});

/// Minimal-norm coefficients expressing the trailing m permuted columns
/// through the localizing matrix and the leading p-m columns.
Eigen::MatrixXd solve_dependence(const MomentSequence& seq, double t, int m,
                                 const std::vector<int>& perm, const ToleranceConfig& cfg = {});

/// The free symmetric block, chosen so that the bordered localizing matrix
/// keeps full rank np + (p - m).
Eigen::MatrixXd choose_completion(const MomentSequence& seq, double t, int m,
                                  const std::vector<int>& perm, const Z1Strategy& strategy,
                                  const ToleranceConfig& cfg = {});

/// Assembles the bordered blocks, un-permutes, and returns S_{2n+1}.
Eigen::MatrixXd assemble_next_moment(const MomentSequence& seq, double t, int m,
                                     const std::vector<int>& perm,
                                     const Eigen::MatrixXd& dependence,
                                     const Eigen::MatrixXd& completion,
                                     const ToleranceConfig& cfg = {});

/// Unique rank-preserving completion of a sequence of odd degree 2q+1:
/// S_{2q+2} = v^T M(q)^{-1} v with v the stacked tail column.
Eigen::MatrixXd flat_extension(const MomentSequence& seq, const ToleranceConfig& cfg = {});

/// Monic block column relation of the flat extension, degree q+1, from
/// M(q)^{-1} applied to the stacked tail column.
MatrixPolynomial column_relation(const MomentSequence& seq, const ToleranceConfig& cfg = {});

/// Masses for the given atoms via the square block Vandermonde system.
/// Moments beyond the stored degree are generated by the relation's
/// recursion. Rank-0 masses are dropped; each surviving mass must be psd
/// with rank equal to its cluster multiplicity.
AtomicMeasure masses_from_atoms(const MomentSequence& seq, const MatrixPolynomial& relation,
                                const std::vector<RootCluster>& clusters,
                                const ToleranceConfig& cfg = {});

/// Full construction: feasibility, column split, dependence, completion,
/// S_{2n+1}, flat S_{2n+2}, block column relation, roots, masses. The result
/// carries total rank (n+1)p, multiplicity exactly m at the prescribed atom,
/// and reconstructs every input moment within residual_rel_tol.
SolveResult minimal_measure(const QuadratureProblem& problem);

}  // namespace matquad
