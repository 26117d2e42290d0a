#include "matquad/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"

namespace matquad {

namespace {

struct LocalizedData {
  int n = 0;
  int p = 0;
  Eigen::MatrixXd loc;   // order-(n-1) localizing matrix, np x np
  Eigen::MatrixXd ext;   // localized extension block, np x p
};

LocalizedData localized_data(const MomentSequence& seq, double t) {
  if (seq.degree() < 2 || seq.degree() % 2 != 0) {
    throw InvalidInput("minimal-measure pipeline: sequence degree must be even and at least 2");
  }
  LocalizedData d;
  d.n = seq.degree() / 2;
  d.p = seq.p();
  d.loc = localizing_matrix(seq, t, d.n - 1).mat;
  d.ext = localized_column_block(seq, t, d.n, d.n - 1).data;
  return d;
}

Eigen::MatrixXd columns_of(const Eigen::MatrixXd& k, const std::vector<int>& idx, int from,
                           int count) {
  Eigen::MatrixXd out(k.rows(), count);
  for (int j = 0; j < count; ++j) {
    out.col(j) = k.col(idx[static_cast<std::size_t>(from + j)]);
  }
  return out;
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) {
    out.leftCols(a.cols()) = a;
  }
  if (b.cols() > 0) {
    out.rightCols(b.cols()) = b;
  }
  return out;
}

Eigen::MatrixXd bordered(const Eigen::MatrixXd& loc, const Eigen::MatrixXd& lead,
                         const Eigen::MatrixXd& corner) {
  Eigen::MatrixXd out(loc.rows() + corner.rows(), loc.cols() + corner.cols());
  out.topLeftCorner(loc.rows(), loc.cols()) = loc;
  out.topRightCorner(lead.rows(), lead.cols()) = lead;
  out.bottomLeftCorner(lead.cols(), lead.rows()) = lead.transpose();
  out.bottomRightCorner(corner.rows(), corner.cols()) = corner;
  return out;
}

void check_multiplicity_range(int m, int p) {
  if (m < 0 || m > p) {
    throw InvalidInput("prescribed multiplicity must lie in [0, p]");
  }
}

void require_pd_moment_matrix(const MomentSequence& seq, int n, const ToleranceConfig& cfg) {
  const MomentMatrix mm = moment_matrix(seq, n);
  if (!is_psd(mm.mat, cfg)) {
    throw UnsupportedSingular("moment matrix is not positive semidefinite");
  }
  if (!is_positive_definite(mm.mat, cfg)) {
    throw UnsupportedSingular("moment matrix is singular; the singular case is unsupported");
  }
}

Eigen::MatrixXd permutation_matrix(const std::vector<int>& perm) {
  const int p = static_cast<int>(perm.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    mat(perm[static_cast<std::size_t>(j)], j) = 1.0;
  }
  return mat;
}

}  // namespace

int max_multiplicity(const MomentSequence& seq, double t, const ToleranceConfig& cfg) {
  cfg.validate();
  const LocalizedData d = localized_data(seq, t);
  require_pd_moment_matrix(seq, d.n, cfg);
  const int bound = numerical_rank(d.loc, cfg) - (d.n - 1) * d.p;
  return std::clamp(bound, 0, d.p);
}

std::vector<int> select_column_split(const MomentSequence& seq, double t, int m,
                                     const ToleranceConfig& cfg) {
  cfg.validate();
  const LocalizedData d = localized_data(seq, t);
  check_multiplicity_range(m, d.p);
  const int target = d.n * d.p;

  // Greedy first-fit: keep the columns that grow the rank of [loc | picked],
  // then pad with the earliest remaining columns until p - m are chosen.
  std::vector<int> selected;
  std::vector<bool> in_lead(static_cast<std::size_t>(d.p), false);
  Eigen::MatrixXd current = d.loc;
  int rank = numerical_rank(current, cfg);
  for (int j = 0; j < d.p && rank < target; ++j) {
    Eigen::MatrixXd trial = hcat(current, d.ext.col(j));
    const int trial_rank = numerical_rank(trial, cfg);
    if (trial_rank > rank) {
      selected.push_back(j);
      in_lead[static_cast<std::size_t>(j)] = true;
      current = std::move(trial);
      rank = trial_rank;
    }
  }
  if (static_cast<int>(selected.size()) > d.p - m) {
    throw InfeasibleMultiplicity(
        "prescribed multiplicity exceeds the feasible bound at this atom",
        max_multiplicity(seq, t, cfg));
  }
  for (int j = 0; j < d.p && static_cast<int>(selected.size()) < d.p - m; ++j) {
    if (!in_lead[static_cast<std::size_t>(j)]) {
      selected.push_back(j);
      in_lead[static_cast<std::size_t>(j)] = true;
    }
  }
  std::sort(selected.begin(), selected.end());

  std::vector<int> perm = selected;
  for (int j = 0; j < d.p; ++j) {
    if (!in_lead[static_cast<std::size_t>(j)]) {
      perm.push_back(j);
    }
  }
  if (rank != target) {
    throw NumericFailure("column split failed to reach full localized rank");
  }
  return perm;
}

Eigen::MatrixXd solve_dependence(const MomentSequence& seq, double t, int m,
                                 const std::vector<int>& perm, const ToleranceConfig& cfg) {
  cfg.validate();
  const LocalizedData d = localized_data(seq, t);
  check_multiplicity_range(m, d.p);
  const Eigen::MatrixXd lead = columns_of(d.ext, perm, 0, d.p - m);
  const Eigen::MatrixXd trail = columns_of(d.ext, perm, d.p - m, m);
  return min_norm_solve(hcat(d.loc, lead), trail, cfg);
}

Eigen::MatrixXd choose_completion(const MomentSequence& seq, double t, int m,
                                  const std::vector<int>& perm, const Z1Strategy& strategy,
                                  const ToleranceConfig& cfg) {
  cfg.validate();
  const LocalizedData d = localized_data(seq, t);
  check_multiplicity_range(m, d.p);
  const int free_dim = d.p - m;
  if (free_dim == 0) {
    return Eigen::MatrixXd(0, 0);
  }
  const Eigen::MatrixXd lead = columns_of(d.ext, perm, 0, free_dim);
  const int full = d.n * d.p + free_dim;
  const auto admissible = [&](const Eigen::MatrixXd& z1) {
    return numerical_rank(bordered(d.loc, lead, z1), cfg) == full;
  };

  if (const auto* explicit_choice = std::get_if<Z1Explicit>(&strategy)) {
    const Eigen::MatrixXd& z1 = explicit_choice->value;
    if (z1.rows() != free_dim || z1.cols() != free_dim) {
      throw InvalidInput("explicit completion block has the wrong size");
    }
    if (relative_asymmetry(z1) > 1e-9) {
      throw InvalidInput("explicit completion block must be symmetric");
    }
    if (!admissible(z1)) {
      throw NumericFailure("explicit completion block fails the rank condition");
    }
    return symmetrize(z1);
  }

  const double entry_scale = std::max(1.0, lead.size() > 0 ? lead.cwiseAbs().maxCoeff() : 1.0);
  std::uint64_t seed = 0;
  double first_identity_scale = 1.0;
  bool try_zero = false;
  if (std::holds_alternative<Z1Zero>(strategy)) {
    try_zero = true;
  } else if (const auto* scaled = std::get_if<Z1ScaledIdentity>(&strategy)) {
    first_identity_scale = scaled->scale;
  } else if (const auto* random = std::get_if<Z1RandomSymmetric>(&strategy)) {
    seed = random->seed;
    first_identity_scale = 0.0;
  }

  if (try_zero) {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(free_dim, free_dim);
    if (admissible(zero)) {
      return zero;
    }
  }
  if (first_identity_scale != 0.0) {
    double c = first_identity_scale;
    for (int step = 0; step < 4; ++step, c *= 10.0) {
      const Eigen::MatrixXd z1 = c * Eigen::MatrixXd::Identity(free_dim, free_dim);
      if (admissible(z1)) {
        return z1;
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-entry_scale, entry_scale);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd z1(free_dim, free_dim);
    for (int r = 0; r < free_dim; ++r) {
      for (int c = 0; c < free_dim; ++c) {
        z1(r, c) = dist(rng);
      }
    }
    z1 = symmetrize(z1);
    if (admissible(z1)) {
      return z1;
    }
  }
  throw NumericFailure("no admissible completion block found");
}

Eigen::MatrixXd assemble_next_moment(const MomentSequence& seq, double t, int m,
                                     const std::vector<int>& perm,
                                     const Eigen::MatrixXd& dependence,
                                     const Eigen::MatrixXd& completion,
                                     const ToleranceConfig& cfg) {
  cfg.validate();
  const LocalizedData d = localized_data(seq, t);
  check_multiplicity_range(m, d.p);
  const int free_dim = d.p - m;
  const Eigen::MatrixXd lead = columns_of(d.ext, perm, 0, free_dim);
  const Eigen::MatrixXd trail = columns_of(d.ext, perm, free_dim, m);

  const Eigen::MatrixXd coupling = hcat(lead.transpose(), completion) * dependence;
  Eigen::MatrixXd tail = hcat(trail.transpose(), coupling.transpose()) * dependence;
  if (m > 0 && relative_asymmetry(tail) > 1e-10) {
    throw NumericFailure("internal: closing block lost symmetry beyond 1e-10");
  }
  tail = symmetrize(tail);

  Eigen::MatrixXd permuted(d.p, d.p);
  permuted.topLeftCorner(free_dim, free_dim) = completion;
  permuted.topRightCorner(free_dim, m) = coupling;
  permuted.bottomLeftCorner(m, free_dim) = coupling.transpose();
  permuted.bottomRightCorner(m, m) = tail;

  const Eigen::MatrixXd pm = permutation_matrix(perm);
  const Eigen::MatrixXd z = pm * permuted * pm.transpose();
  return symmetrize(z + t * seq.at(2 * d.n));
}

Eigen::MatrixXd flat_extension(const MomentSequence& seq, const ToleranceConfig& cfg) {
  cfg.validate();
  if (seq.degree() < 1 || seq.degree() % 2 != 1) {
    throw InvalidInput("flat_extension: sequence must have odd top degree");
  }
  const int q = (seq.degree() - 1) / 2;
  const MomentMatrix mm = moment_matrix(seq, q);
  const Eigen::MatrixXd tail = column_block(seq, q + 1, q).data;
  const Eigen::MatrixXd x = mm.mat.ldlt().solve(tail);
  return symmetrize(tail.transpose() * x);
}

MatrixPolynomial column_relation(const MomentSequence& seq, const ToleranceConfig& cfg) {
  cfg.validate();
  if (seq.degree() < 1) {
    throw InvalidInput("column_relation: sequence degree must be at least 1");
  }
  const int q = (seq.degree() - 1) / 2;
  const int p = seq.p();
  const MomentMatrix mm = moment_matrix(seq, q);
  const Eigen::MatrixXd tail = column_block(seq, q + 1, q).data;
  const Eigen::MatrixXd stacked = mm.mat.ldlt().solve(tail);

  MatrixPolynomial relation;
  relation.p = p;
  relation.coeffs.reserve(static_cast<std::size_t>(q) + 2);
  for (int i = 0; i <= q; ++i) {
    relation.coeffs.push_back(-stacked.middleRows(static_cast<Eigen::Index>(i) * p, p));
  }
  relation.coeffs.push_back(Eigen::MatrixXd::Identity(p, p));
  return relation;
}

AtomicMeasure masses_from_atoms(const MomentSequence& seq, const MatrixPolynomial& relation,
                                const std::vector<RootCluster>& clusters,
                                const ToleranceConfig& cfg) {
  cfg.validate();
  const int p = seq.p();
  const int count = static_cast<int>(clusters.size());
  if (count == 0) {
    throw InvalidInput("masses_from_atoms: no atoms supplied");
  }
  const int d = relation.degree();

  // Moments S_0..S_{count-1}; anything past the stored degree follows the
  // relation's recursion.
  std::vector<Eigen::MatrixXd> power_moments;
  power_moments.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (i <= seq.degree()) {
      power_moments.push_back(seq.at(i));
    } else {
      Eigen::MatrixXd next = Eigen::MatrixXd::Zero(p, p);
      for (int r = 0; r < d; ++r) {
        next -= power_moments[static_cast<std::size_t>(i - d + r)] *
                relation.coeffs[static_cast<std::size_t>(r)];
      }
      power_moments.push_back(std::move(next));
    }
  }

  Eigen::MatrixXd vand(count, count);
  for (int j = 0; j < count; ++j) {
    double power = 1.0;
    for (int i = 0; i < count; ++i) {
      vand(i, j) = power;
      power *= clusters[static_cast<std::size_t>(j)].location;
    }
  }
  Eigen::MatrixXd rhs(count, p * p);
  for (int i = 0; i < count; ++i) {
    rhs.row(i) =
        Eigen::Map<const Eigen::RowVectorXd>(power_moments[static_cast<std::size_t>(i)].data(),
                                             p * p);
  }
  const auto solver = vand.colPivHouseholderQr();
  Eigen::MatrixXd stacked = solver.solve(rhs);
  stacked += solver.solve(rhs - vand * stacked);  // one refinement pass

  AtomicMeasure measure;
  measure.p = p;
  for (int j = 0; j < count; ++j) {
    const Eigen::VectorXd flat = stacked.row(j).transpose();
    Eigen::MatrixXd mass = symmetrize(Eigen::Map<const Eigen::MatrixXd>(flat.data(), p, p));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double spectral = std::max(std::abs(ev(0)), std::abs(ev(p - 1)));
    const double clip = 10.0 * cfg.psd_tol * std::max(1.0, spectral);
    if (ev(0) < -clip) {
      throw NumericFailure("mass at atom " +
                           std::to_string(clusters[static_cast<std::size_t>(j)].location) +
                           " is not positive semidefinite");
    }
    Eigen::VectorXd cleaned = ev;
    int rank = 0;
    for (int i = 0; i < p; ++i) {
      if (cleaned(i) <= clip) {
        cleaned(i) = 0.0;
      } else {
        ++rank;
      }
    }
    if (rank == 0) {
      continue;  // numerically massless root
    }
    if (rank != clusters[static_cast<std::size_t>(j)].multiplicity) {
      throw NumericFailure("mass rank " + std::to_string(rank) + " at atom " +
                           std::to_string(clusters[static_cast<std::size_t>(j)].location) +
                           " differs from root multiplicity " +
                           std::to_string(clusters[static_cast<std::size_t>(j)].multiplicity));
    }
    mass = symmetrize(es.eigenvectors() * cleaned.asDiagonal() * es.eigenvectors().transpose());
    measure.atoms.push_back({clusters[static_cast<std::size_t>(j)].location, std::move(mass)});
  }
  return measure;
}

SolveResult minimal_measure(const QuadratureProblem& problem) {
  const ToleranceConfig& cfg = problem.tol;
  cfg.validate();
  const MomentSequence& seq = problem.seq;
  const LocalizedData d = localized_data(seq, problem.atom);
  const int n = d.n;
  const int p = d.p;
  check_multiplicity_range(problem.multiplicity, p);
  require_pd_moment_matrix(seq, n, cfg);

  const int bound = max_multiplicity(seq, problem.atom, cfg);
  if (problem.multiplicity > bound) {
    throw InfeasibleMultiplicity(
        "multiplicity " + std::to_string(problem.multiplicity) +
            " is infeasible at atom " + std::to_string(problem.atom) +
            "; the bound gives m_max = " + std::to_string(bound),
        bound);
  }

  ConstructionTrace trace;
  trace.permutation = select_column_split(seq, problem.atom, problem.multiplicity, cfg);

  if (problem.dependence_override.has_value()) {
    const Eigen::MatrixXd& j = *problem.dependence_override;
    const int m = problem.multiplicity;
    if (j.rows() != (n + 1) * p - m || j.cols() != m) {
      throw InvalidInput("dependence override has the wrong shape");
    }
    const Eigen::MatrixXd lead = columns_of(d.ext, trace.permutation, 0, p - m);
    const Eigen::MatrixXd trail = columns_of(d.ext, trace.permutation, p - m, m);
    const double residual = (hcat(d.loc, lead) * j - trail).norm();
    if (residual > cfg.residual_rel_tol * std::max(1.0, trail.norm())) {
      throw NumericFailure("dependence override is not in the solution set");
    }
    trace.dependence = j;
  } else {
    trace.dependence = solve_dependence(seq, problem.atom, problem.multiplicity,
                                        trace.permutation, cfg);
  }

  trace.completion = choose_completion(seq, problem.atom, problem.multiplicity, trace.permutation,
                                       problem.z1, cfg);
  trace.next_moment = assemble_next_moment(seq, problem.atom, problem.multiplicity,
                                           trace.permutation, trace.dependence, trace.completion,
                                           cfg);
  {
    const int free_dim = p - problem.multiplicity;
    const Eigen::MatrixXd lead = columns_of(d.ext, trace.permutation, 0, free_dim);
    trace.coupling = hcat(lead.transpose(), trace.completion) * trace.dependence;
    const Eigen::MatrixXd trail = columns_of(d.ext, trace.permutation, free_dim,
                                             problem.multiplicity);
    trace.tail = symmetrize(hcat(trail.transpose(), trace.coupling.transpose()) *
                            trace.dependence);
  }

  const MomentSequence with_next = seq.extended(trace.next_moment);
  trace.flat_moment = flat_extension(with_next, cfg);
  const MomentSequence flat_seq = with_next.extended(trace.flat_moment);
  trace.relation = column_relation(flat_seq, cfg);

  RootExtractionOptions opts;
  opts.snap_point = problem.atom;
  opts.snap_multiplicity = problem.multiplicity;
  trace.clusters = root_clusters(trace.relation, cfg, opts);

  SolveResult result;
  result.measure = masses_from_atoms(flat_seq, trace.relation, trace.clusters, cfg);

  if (total_rank(result.measure, cfg) != (n + 1) * p) {
    throw NumericFailure("constructed measure misses the minimal rank " +
                         std::to_string((n + 1) * p));
  }
  if (multiplicity_at(result.measure, problem.atom, cfg) != problem.multiplicity) {
    throw NumericFailure("constructed measure has the wrong multiplicity at the prescribed atom");
  }
  trace.report = verify_measure(seq, result.measure, cfg);
  if (trace.report.max_relative_residual > cfg.residual_rel_tol) {
    throw NumericFailure("constructed measure fails moment reconstruction at relative residual " +
                         std::to_string(trace.report.max_relative_residual));
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace matquad
