#include "matquad/moments.hpp"

#include <cmath>
#include <iostream>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"

namespace matquad {

namespace {

constexpr double kIngestAsymWarn = 1e-9;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

MomentSequence::MomentSequence(std::vector<Eigen::MatrixXd> moments) {
  if (moments.empty()) {
    throw InvalidInput("MomentSequence: at least S_0 is required");
  }
  p_ = static_cast<int>(moments.front().rows());
  if (p_ < 1) {
    throw InvalidInput("MomentSequence: matrix size must be positive");
  }
  for (std::size_t i = 0; i < moments.size(); ++i) {
    Eigen::MatrixXd& s = moments[i];
    if (s.rows() != p_ || s.cols() != p_) {
      throw InvalidInput("MomentSequence: moment " + std::to_string(i) + " is not " +
                         std::to_string(p_) + "x" + std::to_string(p_));
    }
    if (!s.allFinite()) {
      throw InvalidInput("MomentSequence: moment " + std::to_string(i) + " has non-finite entries");
    }
    if (relative_asymmetry(s) > kIngestAsymWarn) {
      std::cerr << "matquad: warning: moment " << i << " asymmetric beyond " << kIngestAsymWarn
                << " relative; symmetrizing\n";
    }
    s = symmetrize(s);
  }
  moments_ = std::move(moments);
}

const Eigen::MatrixXd& MomentSequence::at(int i) const {
  if (i < 0 || i > degree()) {
    throw InvalidInput("MomentSequence: moment index " + std::to_string(i) + " out of range");
  }
  return moments_[static_cast<std::size_t>(i)];
}

MomentSequence MomentSequence::truncated(int new_degree) const {
  if (new_degree < 0 || new_degree > degree()) {
    throw InvalidInput("MomentSequence::truncated: degree out of range");
  }
  std::vector<Eigen::MatrixXd> kept(moments_.begin(), moments_.begin() + new_degree + 1);
  return MomentSequence(std::move(kept));
}

MomentSequence MomentSequence::extended(const Eigen::MatrixXd& next) const {
  std::vector<Eigen::MatrixXd> all = moments_;
  all.push_back(next);
  return MomentSequence(std::move(all));
}

Eigen::MatrixXd MomentMatrix::block_column(int i) const {
  if (i < 0 || i > order) {
    throw InvalidInput("MomentMatrix::block_column: index out of range");
  }
  return mat.middleCols(static_cast<Eigen::Index>(i) * p, p);
}

MomentMatrix moment_matrix(const MomentSequence& seq, int k) {
  if (k < 0) {
    throw InvalidInput("moment_matrix: order must be nonnegative");
  }
  if (2 * k > seq.degree()) {
    throw InvalidInput("moment_matrix: order " + std::to_string(k) + " needs degree " +
                       std::to_string(2 * k) + " but sequence has degree " +
                       std::to_string(seq.degree()));
  }
  const int p = seq.p();
  MomentMatrix m{p, k, Eigen::MatrixXd((k + 1) * p, (k + 1) * p)};
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j <= k; ++j) {
      m.mat.block(i * p, j * p, p, p) = seq.at(i + j);
    }
  }
  return m;
}

LocalizingMatrix localizing_matrix(const MomentSequence& seq, double t, int ell) {
  if (ell < 0) {
    throw InvalidInput("localizing_matrix: order must be nonnegative");
  }
  if (2 * ell + 1 > seq.degree()) {
    throw InvalidInput("localizing_matrix: order " + std::to_string(ell) + " needs degree " +
                       std::to_string(2 * ell + 1) + " but sequence has degree " +
                       std::to_string(seq.degree()));
  }
  const int p = seq.p();
  LocalizingMatrix m{p, ell, t, Eigen::MatrixXd((ell + 1) * p, (ell + 1) * p)};
  for (int i = 0; i <= ell; ++i) {
    for (int j = 0; j <= ell; ++j) {
      m.mat.block(i * p, j * p, p, p) = seq.at(i + j + 1) - t * seq.at(i + j);
    }
  }
  return m;
}

ColumnBlock column_block(const MomentSequence& seq, int i, int j) {
  if (i < 0 || j < 0 || i + j > seq.degree()) {
    throw InvalidInput("column_block: indices exceed sequence degree");
  }
  const int p = seq.p();
  ColumnBlock block{i, j, Eigen::MatrixXd((j + 1) * p, p)};
  for (int r = 0; r <= j; ++r) {
    block.data.middleRows(r * p, p) = seq.at(i + r);
  }
  return block;
}

ColumnBlock localized_column_block(const MomentSequence& seq, double t, int i, int j) {
  if (i < 0 || j < 0 || i + j + 1 > seq.degree()) {
    throw InvalidInput("localized_column_block: indices exceed sequence degree");
  }
  const int p = seq.p();
  ColumnBlock block{i, j, Eigen::MatrixXd((j + 1) * p, p)};
  for (int r = 0; r <= j; ++r) {
    block.data.middleRows(r * p, p) = seq.at(i + r + 1) - t * seq.at(i + r);
  }
  return block;
}

MomentSequence localized_sequence(const MomentSequence& seq, double t) {
  if (seq.degree() < 1) {
    throw InvalidInput("localized_sequence: sequence degree must be at least 1");
  }
  std::vector<Eigen::MatrixXd> shifted;
  shifted.reserve(static_cast<std::size_t>(seq.degree()));
  for (int i = 0; i + 1 <= seq.degree(); ++i) {
    shifted.push_back(seq.at(i + 1) - t * seq.at(i));
  }
  return MomentSequence(std::move(shifted));
}

Eigen::MatrixXd riesz_apply(const MomentSequence& seq, const Eigen::VectorXd& q) {
  if (q.size() == 0) {
    throw InvalidInput("riesz_apply: empty polynomial");
  }
  if (q.size() - 1 > seq.degree()) {
    throw InvalidInput("riesz_apply: polynomial degree exceeds sequence degree");
  }
  const int p = seq.p();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    out += q(i) * seq.at(static_cast<int>(i));
  }
  return out;
}

MomentSequence shift_sequence(const MomentSequence& seq, double s) {
  std::vector<Eigen::MatrixXd> shifted;
  shifted.reserve(static_cast<std::size_t>(seq.degree()) + 1);
  for (int i = 0; i <= seq.degree(); ++i) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(seq.p(), seq.p());
    for (int k = 0; k <= i; ++k) {
      acc += binomial(i, k) * std::pow(s, i - k) * seq.at(k);
    }
    shifted.push_back(std::move(acc));
  }
  return MomentSequence(std::move(shifted));
}

bool hamburger_solvable(const MomentSequence& seq, const ToleranceConfig& cfg) {
  cfg.validate();
  if (seq.degree() % 2 != 0) {
    throw InvalidInput("hamburger_solvable: sequence degree must be even");
  }
  const int n = seq.degree() / 2;
  const MomentMatrix m = moment_matrix(seq, n);
  if (!is_psd(m.mat, cfg)) {
    return false;
  }
  if (numerical_rank(m.mat, cfg) == (n + 1) * seq.p()) {
    return true;
  }
  if (n == 0) {
    return true;
  }
  // Containment of the one-step extension column, tested on the rows the
  // truncated data provides: the top np rows of M(n).
  const Eigen::MatrixXd top = m.mat.topRows(n * seq.p());
  const Eigen::MatrixXd v = column_block(seq, n + 1, n - 1).data;
  Eigen::MatrixXd augmented(top.rows(), top.cols() + v.cols());
  augmented << top, v;
  return numerical_rank(augmented, cfg) == numerical_rank(top, cfg);
}

}  // namespace matquad
