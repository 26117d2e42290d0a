#include "matquad/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"

namespace matquad {

bool VerifyReport::green(const ToleranceConfig& cfg) const {
  return psd_ok && minimal && max_relative_residual <= cfg.residual_rel_tol;
}

MomentSequence reconstruct_moments(const AtomicMeasure& measure, int degree) {
  if (degree < 0) {
    throw InvalidInput("reconstruct_moments: degree must be nonnegative");
  }
  if (measure.p < 1) {
    throw InvalidInput("reconstruct_moments: measure has no matrix size");
  }
  const int p = measure.p;
  std::vector<Eigen::MatrixXd> moments(static_cast<std::size_t>(degree) + 1,
                                       Eigen::MatrixXd::Zero(p, p));
  for (const auto& atom : measure.atoms) {
    double power = 1.0;
    for (int i = 0; i <= degree; ++i) {
      moments[static_cast<std::size_t>(i)] += power * atom.mass;
      power *= atom.position;
    }
  }
  if (measure.infinity_mass.has_value()) {
    moments[static_cast<std::size_t>(degree)] += *measure.infinity_mass;
  }
  return MomentSequence(std::move(moments));
}

VerifyReport verify_measure(const MomentSequence& seq, const AtomicMeasure& measure,
                            const ToleranceConfig& cfg) {
  cfg.validate();
  VerifyReport report;
  const MomentSequence rebuilt = reconstruct_moments(measure, seq.degree());
  report.per_moment_residuals.reserve(static_cast<std::size_t>(seq.degree()) + 1);
  for (int i = 0; i <= seq.degree(); ++i) {
    const double res = (rebuilt.at(i) - seq.at(i)).norm() / std::max(1.0, seq.at(i).norm());
    report.per_moment_residuals.push_back(res);
    report.max_relative_residual = std::max(report.max_relative_residual, res);
  }
  report.total_rank = total_rank(measure, cfg);
  report.psd_ok = true;
  for (const auto& atom : measure.atoms) {
    report.psd_ok = report.psd_ok && is_psd(atom.mass, cfg);
  }
  if (measure.infinity_mass.has_value()) {
    report.psd_ok = report.psd_ok && is_psd(*measure.infinity_mass, cfg);
  }
  const int n = seq.degree() / 2;
  report.minimal = report.total_rank == numerical_rank(moment_matrix(seq, n).mat, cfg);
  return report;
}

AtomicMeasure scalar_oracle(const MomentSequence& seq, const ToleranceConfig& cfg) {
  cfg.validate();
  if (seq.p() != 1) {
    throw InvalidInput("scalar_oracle: requires a scalar (p = 1) sequence");
  }
  if (seq.degree() < 1 || seq.degree() % 2 != 1) {
    throw InvalidInput("scalar_oracle: requires an odd top moment S_{2n+1}");
  }
  const int n = (seq.degree() - 1) / 2;
  const auto apply = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    // L applied to the product of two coefficient polynomials.
    double out = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      for (Eigen::Index j = 0; j < b.size(); ++j) {
        out += a(i) * b(j) * seq.at(static_cast<int>(i + j))(0, 0);
      }
    }
    return out;
  };

  // Three-term recurrence for the monic orthogonal polynomials, driven by
  // the moment functional.
  std::vector<Eigen::VectorXd> pi;
  pi.push_back(Eigen::VectorXd::Ones(1));
  Eigen::VectorXd alphas(n + 1);
  Eigen::VectorXd betas(n + 1);
  std::vector<double> norms;
  for (int k = 0; k <= n; ++k) {
    const Eigen::VectorXd& cur = pi.back();
    const double h = apply(cur, cur);
    if (!(h > 0.0)) {
      throw NumericFailure("scalar_oracle: recurrence breakdown (moment matrix not pd)");
    }
    norms.push_back(h);
    Eigen::VectorXd xcur(cur.size() + 1);
    xcur(0) = 0.0;
    xcur.tail(cur.size()) = cur;
    alphas(k) = apply(xcur, cur) / h;
    betas(k) = k == 0 ? 0.0 : h / norms[static_cast<std::size_t>(k) - 1];
    if (k < n) {
      Eigen::VectorXd next = xcur;
      next.head(cur.size()) -= alphas(k) * cur;
      if (k > 0) {
        next.head(pi[static_cast<std::size_t>(k) - 1].size()) +=
            -betas(k) * pi[static_cast<std::size_t>(k) - 1];
      }
      pi.push_back(next);
    }
  }

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    jacobi(k, k) = alphas(k);
    if (k > 0) {
      const double off = std::sqrt(betas(k));
      jacobi(k, k - 1) = off;
      jacobi(k - 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) {
    throw NumericFailure("scalar_oracle: Jacobi eigen-decomposition failed");
  }

  AtomicMeasure measure;
  measure.p = 1;
  const double s0 = seq.at(0)(0, 0);
  std::vector<int> order(static_cast<std::size_t>(n) + 1);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return es.eigenvalues()(a) < es.eigenvalues()(b); });
  for (int idx : order) {
    Eigen::MatrixXd mass(1, 1);
    mass(0, 0) = s0 * es.eigenvectors()(0, idx) * es.eigenvectors()(0, idx);
    measure.atoms.push_back({es.eigenvalues()(idx), std::move(mass)});
  }
  return measure;
}

AtomicMeasure sample_random_measure(int p, int n, const std::vector<int>& rank_profile,
                                    std::uint64_t seed, const ToleranceConfig& cfg) {
  cfg.validate();
  if (p < 1 || n < 0) {
    throw InvalidInput("sample_random_measure: p must be positive and n nonnegative");
  }
  int total = 0;
  for (int r : rank_profile) {
    if (r < 1 || r > p) {
      throw InvalidInput("sample_random_measure: rank profile entries must lie in [1, p]");
    }
    total += r;
  }
  if (total != (n + 1) * p) {
    throw InvalidInput("sample_random_measure: rank profile must sum to (n+1)p");
  }
  const int count = static_cast<int>(rank_profile.size());
  const double separation = std::max(10.0 * cfg.root_cluster_tol, 0.12);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> atom_dist(-1.45, 1.45);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> eig_dist(0.4, 1.6);

  std::vector<double> atoms;
  int guard = 0;
  while (static_cast<int>(atoms.size()) < count) {
    if (++guard > 100000) {
      throw NumericFailure("sample_random_measure: could not separate atoms");
    }
    const double candidate = atom_dist(rng);
    bool ok = true;
    for (double existing : atoms) {
      ok = ok && std::abs(existing - candidate) >= separation;
    }
    if (ok) {
      atoms.push_back(candidate);
    }
  }
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return atoms[a] < atoms[b]; });

  AtomicMeasure measure;
  measure.p = p;
  for (int idx : order) {
    const int rank = rank_profile[static_cast<std::size_t>(idx)];
    Eigen::MatrixXd raw(p, p);
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < p; ++c) {
        raw(r, c) = gauss(rng);
      }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd eigs = Eigen::VectorXd::Zero(p);
    for (int r = 0; r < rank; ++r) {
      eigs(r) = eig_dist(rng);
    }
    Eigen::MatrixXd mass = symmetrize(q * eigs.asDiagonal() * q.transpose());
    measure.atoms.push_back({atoms[static_cast<std::size_t>(idx)], std::move(mass)});
  }
  return measure;
}

}  // namespace matquad
