#pragma once

#include <Eigen/Dense>

#include "matquad/tolerance.hpp"

namespace matquad {

/// (A + A^T)/2. Used on every symmetry-sensitive output to kill round-off.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a);

/// ||A - A^T||_F / max(1, ||A||_F).
double relative_asymmetry(const Eigen::MatrixXd& a);

/// Count of singular values above rank_rel_tol * sigma_max * max(rows, cols).
/// The zero matrix has rank 0. Throws InvalidInput on non-finite entries.
int numerical_rank(const Eigen::MatrixXd& a, const ToleranceConfig& cfg = {});

/// True iff the minimum eigenvalue is >= -psd_tol * max(1, spectral norm).
/// Throws InvalidInput when the input is asymmetric beyond tolerance.
bool is_psd(const Eigen::MatrixXd& a, const ToleranceConfig& cfg = {});

/// Strict positive definiteness under the rank tolerance: symmetric, and the
/// minimum eigenvalue clears the same threshold numerical_rank would use.
bool is_positive_definite(const Eigen::MatrixXd& a, const ToleranceConfig& cfg = {});

/// Minimal Frobenius-norm solution X of A X = B. Requires the column space
/// of B to lie in the column space of A (checked via rank [A|B] = rank A);
/// throws NumericFailure otherwise or when the residual exceeds
/// residual_rel_tol * max(1, ||B||_F).
Eigen::MatrixXd min_norm_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const ToleranceConfig& cfg = {});

/// Schur complement of the leading top_dim block: with M = [[A, C], [C^T, D]]
/// and A of size top_dim, returns D - C^T A^{-1} C, symmetrized. Throws
/// NumericFailure when the leading block is numerically singular.
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, int top_dim,
                                 const ToleranceConfig& cfg = {});

}  // namespace matquad
