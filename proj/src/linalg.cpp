#include "matquad/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "matquad/errors.hpp"

namespace matquad {

namespace {

// Shared symmetry tolerance: matches the ingestion warning threshold.
constexpr double kSymRelTol = 1e-9;

void require_finite(const Eigen::MatrixXd& a, const char* what) {
  if (!a.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

void ToleranceConfig::validate() const {
  const double fields[] = {rank_rel_tol, psd_tol, root_imag_tol, root_cluster_tol,
                           residual_rel_tol};
  for (double v : fields) {
    if (!(v > 0.0 && v < 1.0)) {
      throw InvalidInput("ToleranceConfig: every tolerance must lie in (0, 1)");
    }
  }
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

double relative_asymmetry(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("relative_asymmetry: matrix must be square");
  }
  const double denom = std::max(1.0, a.norm());
  return (a - a.transpose()).norm() / denom;
}

int numerical_rank(const Eigen::MatrixXd& a, const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite(a, "numerical_rank");
  if (a.rows() == 0 || a.cols() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax == 0.0) {
    return 0;
  }
  const double cutoff = cfg.rank_rel_tol * smax * static_cast<double>(std::max(a.rows(), a.cols()));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      ++rank;
    }
  }
  return rank;
}

bool is_psd(const Eigen::MatrixXd& a, const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite(a, "is_psd");
  if (a.rows() != a.cols()) {
    throw InvalidInput("is_psd: matrix must be square");
  }
  if (a.rows() == 0) {
    return true;
  }
  if (relative_asymmetry(a) > kSymRelTol) {
    throw InvalidInput("is_psd: matrix asymmetric beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  const auto& ev = es.eigenvalues();
  const double spectral = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -cfg.psd_tol * std::max(1.0, spectral);
}

bool is_positive_definite(const Eigen::MatrixXd& a, const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite(a, "is_positive_definite");
  if (a.rows() != a.cols()) {
    throw InvalidInput("is_positive_definite: matrix must be square");
  }
  if (a.rows() == 0) {
    return true;
  }
  if (relative_asymmetry(a) > kSymRelTol) {
    throw InvalidInput("is_positive_definite: matrix asymmetric beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  const auto& ev = es.eigenvalues();
  const double spectral = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double cutoff = cfg.rank_rel_tol * std::max(1.0, spectral) * static_cast<double>(a.rows());
  return ev(0) > cutoff;
}

Eigen::MatrixXd min_norm_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite(a, "min_norm_solve");
  require_finite(b, "min_norm_solve");
  if (a.rows() != b.rows()) {
    throw InvalidInput("min_norm_solve: row counts of A and B differ");
  }
  if (b.cols() == 0) {
    return Eigen::MatrixXd(a.cols(), 0);
  }
  Eigen::MatrixXd augmented(a.rows(), a.cols() + b.cols());
  augmented << a, b;
  if (numerical_rank(augmented, cfg) != numerical_rank(a, cfg)) {
    throw NumericFailure("min_norm_solve: right-hand side outside the column space of A");
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  cod.setThreshold(cfg.rank_rel_tol * static_cast<double>(std::max(a.rows(), a.cols())));
  Eigen::MatrixXd x = cod.solve(b);
  const double residual = (a * x - b).norm();
  if (residual > cfg.residual_rel_tol * std::max(1.0, b.norm())) {
    throw NumericFailure("min_norm_solve: residual exceeds tolerance");
  }
  return x;
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, int top_dim,
                                 const ToleranceConfig& cfg) {
  cfg.validate();
  require_finite(m, "schur_complement");
  if (m.rows() != m.cols()) {
    throw InvalidInput("schur_complement: matrix must be square");
  }
  if (top_dim < 0 || top_dim > m.rows()) {
    throw InvalidInput("schur_complement: top_dim out of range");
  }
  const Eigen::Index tail = m.rows() - top_dim;
  if (top_dim == 0) {
    return symmetrize(m);
  }
  const Eigen::MatrixXd lead = m.topLeftCorner(top_dim, top_dim);
  if (numerical_rank(lead, cfg) != top_dim) {
    throw NumericFailure("schur_complement: leading block is numerically singular");
  }
  if (tail == 0) {
    return Eigen::MatrixXd(0, 0);
  }
  const Eigen::MatrixXd c = m.topRightCorner(top_dim, tail);
  const Eigen::MatrixXd d = m.bottomRightCorner(tail, tail);
  const Eigen::MatrixXd x = lead.colPivHouseholderQr().solve(c);
  return symmetrize(d - c.transpose() * x);
}

}  // namespace matquad
