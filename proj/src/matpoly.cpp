#include "matquad/matpoly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"

namespace matquad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace

bool MatrixPolynomial::is_monic(double tol) const {
  if (coeffs.empty()) {
    return false;
  }
  return (coeffs.back() - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXd eval_scalar(const MatrixPolynomial& poly, double x) {
  if (poly.coeffs.empty()) {
    throw InvalidInput("eval_scalar: empty polynomial");
  }
  Eigen::MatrixXd acc = poly.coeffs.back();
  for (int i = poly.degree() - 1; i >= 0; --i) {
    acc = x * acc + poly.coeffs[static_cast<std::size_t>(i)];
  }
  return acc;
}

Eigen::MatrixXd eval_on_moment_matrix(const MatrixPolynomial& poly, const MomentMatrix& m) {
  if (poly.p != m.p) {
    throw InvalidInput("eval_on_moment_matrix: matrix sizes differ");
  }
  if (poly.degree() > m.order) {
    throw InvalidInput("eval_on_moment_matrix: polynomial degree exceeds moment-matrix order");
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m.mat.rows(), poly.p);
  for (int i = 0; i <= poly.degree(); ++i) {
    acc += m.block_column(i) * poly.coeffs[static_cast<std::size_t>(i)];
  }
  return acc;
}

Eigen::MatrixXd block_companion(const MatrixPolynomial& poly) {
  const int d = poly.degree();
  if (d < 1) {
    throw InvalidInput("block_companion: degree must be at least 1");
  }
  if (!poly.is_monic()) {
    throw InvalidInput("block_companion: polynomial must be monic");
  }
  const int p = poly.p;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d * p, d * p);
  for (int i = 0; i + 1 < d; ++i) {
    c.block(i * p, (i + 1) * p, p, p).setIdentity();
  }
  for (int i = 0; i < d; ++i) {
    c.block((d - 1) * p, i * p, p, p) = -poly.coeffs[static_cast<std::size_t>(i)];
  }
  return c;
}

std::vector<RootCluster> root_clusters(const MatrixPolynomial& poly, const ToleranceConfig& cfg,
                                       const RootExtractionOptions& opts) {
  cfg.validate();
  const Eigen::MatrixXd companion = block_companion(poly);
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericFailure("root_clusters: eigenvalue iteration failed");
  }
  std::vector<std::complex<double>> eigs(es.eigenvalues().data(),
                                         es.eigenvalues().data() + es.eigenvalues().size());

  double scale = 1.0;
  for (const auto& z : eigs) {
    scale = std::max(scale, std::abs(z));
  }
  const int mult_hint = std::min(poly.p, 3);
  // A k-fold root perturbs like eps^(1/k); the split tolerance must absorb
  // the conjugate-pair spread of the worst admissible multiplicity.
  const double split_tol =
      std::max(cfg.root_imag_tol, std::pow(kEps, 1.0 / (mult_hint + 1))) * scale;
  const double imag_tol = cfg.root_imag_tol * scale;
  const double link_radius = std::max(cfg.root_cluster_tol, 10.0 * std::sqrt(kEps)) * scale;

  std::vector<RootCluster> clusters;

  // Snapping for a prescribed atom. Count mode takes the requested number of
  // closest eigenvalues; radius mode takes everything inside the link radius.
  if (opts.snap_point.has_value()) {
    const double t = *opts.snap_point;
    std::vector<std::size_t> order(eigs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(eigs[a] - t) < std::abs(eigs[b] - t);
    });
    std::vector<std::complex<double>> snapped;
    std::vector<bool> taken(eigs.size(), false);
    if (opts.snap_multiplicity >= 0) {
      if (static_cast<std::size_t>(opts.snap_multiplicity) > eigs.size()) {
        throw InvalidInput("root_clusters: snap multiplicity exceeds root count");
      }
      const double sanity = 1e-2 * std::max({1.0, std::abs(t), scale});
      for (int k = 0; k < opts.snap_multiplicity; ++k) {
        const std::size_t idx = order[static_cast<std::size_t>(k)];
        if (std::abs(eigs[idx] - t) > sanity) {
          throw NumericFailure("root_clusters: no root cluster of the requested multiplicity at " +
                               std::to_string(t));
        }
        snapped.push_back(eigs[idx]);
        taken[idx] = true;
      }
    } else {
      for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (std::abs(eigs[i] - t) <= link_radius) {
          snapped.push_back(eigs[i]);
          taken[i] = true;
        }
      }
    }
    if (!snapped.empty()) {
      clusters.push_back({t, static_cast<int>(snapped.size()), std::move(snapped)});
    }
    std::vector<std::complex<double>> rest;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      if (!taken[i]) {
        rest.push_back(eigs[i]);
      }
    }
    eigs = std::move(rest);
  }

  // Collapse conjugate pairs that are numerically a split multiple root.
  std::vector<std::complex<double>> points;
  points.reserve(eigs.size());
  std::vector<std::complex<double>> raw;
  raw.reserve(eigs.size());
  for (const auto& z : eigs) {
    raw.push_back(z);
    if (std::abs(z.imag()) <= imag_tol || std::abs(z.imag()) <= split_tol) {
      points.emplace_back(z.real(), 0.0);
    } else if (opts.allow_complex) {
      points.push_back(z);
    } else {
      throw NumericFailure("root_clusters: nonreal root " + std::to_string(z.real()) + " + " +
                           std::to_string(z.imag()) + "i exceeds root_imag_tol");
    }
  }

  // Single linkage over the surviving points.
  const int count = static_cast<int>(points.size());
  UnionFind uf(count);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (std::abs(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]) <=
          link_radius) {
        uf.unite(i, j);
      }
    }
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    groups[static_cast<std::size_t>(uf.find(i))].push_back(i);
  }
  for (const auto& group : groups) {
    if (group.empty()) {
      continue;
    }
    std::complex<double> mean{0.0, 0.0};
    std::vector<std::complex<double>> members;
    for (int idx : group) {
      mean += points[static_cast<std::size_t>(idx)];
      members.push_back(raw[static_cast<std::size_t>(idx)]);
    }
    mean /= static_cast<double>(group.size());
    if (!opts.allow_complex && std::abs(mean.imag()) > imag_tol) {
      throw NumericFailure("root_clusters: cluster mean has nonreal part beyond root_imag_tol");
    }
    clusters.push_back({mean.real(), static_cast<int>(group.size()), std::move(members)});
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const RootCluster& a, const RootCluster& b) { return a.location < b.location; });
  return clusters;
}

std::vector<RootCluster> real_roots_with_multiplicity(const MatrixPolynomial& poly,
                                                      const ToleranceConfig& cfg) {
  return root_clusters(poly, cfg, RootExtractionOptions{});
}

Eigen::VectorXd det_poly(const MatrixPolynomial& poly) {
  if (poly.coeffs.empty()) {
    throw InvalidInput("det_poly: empty polynomial");
  }
  const int dp = poly.degree() * poly.p;
  const int count = dp + 1;
  // Companion-style root bound fixes the interpolation interval.
  double bound = 1.0;
  for (int i = 0; i < poly.degree(); ++i) {
    bound = std::max(bound, poly.coeffs[static_cast<std::size_t>(i)].norm());
  }
  const double radius = 1.0 + bound;

  Eigen::VectorXd nodes(count);
  Eigen::VectorXd values(count);
  for (int k = 0; k < count; ++k) {
    const double x = count == 1 ? 0.0 : radius * std::cos(M_PI * (k + 0.5) / count);
    nodes(k) = x;
    values(k) = eval_scalar(poly, x).determinant();
  }
  Eigen::MatrixXd vand(count, count);
  for (int r = 0; r < count; ++r) {
    double power = 1.0;
    for (int c = 0; c < count; ++c) {
      vand(r, c) = power;
      power *= nodes(r);
    }
  }
  Eigen::VectorXd coeffs = vand.colPivHouseholderQr().solve(values);
  if (poly.is_monic() && coeffs.size() > 0 && coeffs(coeffs.size() - 1) != 0.0) {
    coeffs /= coeffs(coeffs.size() - 1);
  }
  return coeffs;
}

}  // namespace matquad
