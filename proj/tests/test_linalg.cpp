#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "matquad/errors.hpp"
#include "matquad/linalg.hpp"
#include "support.hpp"

using namespace matquad;
using testsupport::mat2;

TEST_CASE("numerical_rank basics") {
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);
  CHECK(numerical_rank(mat2(2, 2, 2, 2)) == 1);  // localizing block of fixture A
  CHECK(numerical_rank(Eigen::MatrixXd(0, 3)) == 0);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)numerical_rank(bad), InvalidInput);
}

TEST_CASE("numerical_rank is invariant under orthogonal factors and transpose") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 24; ++trial) {
    const int rows = 3 + static_cast<int>(rng() % 4);
    const int cols = 3 + static_cast<int>(rng() % 4);
    const int rank = 1 + static_cast<int>(rng() % std::min(rows, cols));
    Eigen::MatrixXd left(rows, rank);
    Eigen::MatrixXd right(rank, cols);
    for (int i = 0; i < rows * rank; ++i) {
      left(i % rows, i / rows) = gauss(rng);
    }
    for (int i = 0; i < rank * cols; ++i) {
      right(i % rank, i / rank) = gauss(rng);
    }
    const Eigen::MatrixXd a = left * right;

    Eigen::MatrixXd ql(rows, rows);
    Eigen::MatrixXd qr(cols, cols);
    for (int i = 0; i < rows * rows; ++i) {
      ql(i % rows, i / rows) = gauss(rng);
    }
    for (int i = 0; i < cols * cols; ++i) {
      qr(i % cols, i / cols) = gauss(rng);
    }
    const Eigen::MatrixXd qleft = Eigen::HouseholderQR<Eigen::MatrixXd>(ql).householderQ();
    const Eigen::MatrixXd qright = Eigen::HouseholderQR<Eigen::MatrixXd>(qr).householderQ();

    CHECK(numerical_rank(a) == rank);
    CHECK(numerical_rank(qleft * a * qright) == rank);
    CHECK(numerical_rank(a.transpose()) == rank);
  }
}

TEST_CASE("is_psd") {
  CHECK(is_psd(mat2(0, 0, 0, 1)));
  CHECK_FALSE(is_psd(mat2(1, 2, 2, 1)));  // eigenvalues 3 and -1
  testsupport::FixtureB fx;
  CHECK(is_psd(fx.mass_at_zero()));
  CHECK_THROWS_AS((void)is_psd(mat2(1, 5, 0, 1)), InvalidInput);
}

TEST_CASE("min_norm_solve") {
  SUBCASE("identity") {
    Eigen::MatrixXd b(2, 1);
    b << 5, 7;
    CHECK(testsupport::max_abs_diff(min_norm_solve(Eigen::MatrixXd::Identity(2, 2), b), b) < 1e-14);
  }
  SUBCASE("rank deficient picks the minimal-norm representative") {
    Eigen::MatrixXd b(2, 1);
    b << 2, 2;
    Eigen::MatrixXd expect(2, 1);
    expect << 1, 1;
    CHECK(testsupport::max_abs_diff(min_norm_solve(mat2(1, 1, 1, 1), b), expect) < 1e-12);
  }
  SUBCASE("localizing columns of fixture A") {
    // Columns [loc e1 | extension col 1]; the hand dependence (-1/2, 1, 1/2)
    // collapses to (1/2, 1/2) on these two columns.
    const Eigen::MatrixXd a = mat2(2, 50, 2, 26);
    Eigen::MatrixXd b(2, 1);
    b << 26, 14;
    const Eigen::MatrixXd x = min_norm_solve(a, b);
    CHECK(x(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(x(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("containment failure") {
    Eigen::MatrixXd a(2, 1);
    a << 1, 0;
    Eigen::MatrixXd b(2, 1);
    b << 0, 1;
    CHECK_THROWS_AS((void)min_norm_solve(a, b), NumericFailure);
  }
  SUBCASE("residual property on random consistent systems") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ToleranceConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd a(4, 3);
      Eigen::MatrixXd w(3, 2);
      for (int i = 0; i < 12; ++i) {
        a(i % 4, i / 4) = gauss(rng);
      }
      for (int i = 0; i < 6; ++i) {
        w(i % 3, i / 3) = gauss(rng);
      }
      const Eigen::MatrixXd b = a * w;
      const Eigen::MatrixXd x = min_norm_solve(a, b, cfg);
      CHECK((a * x - b).norm() <= cfg.residual_rel_tol * std::max(1.0, b.norm()));
    }
  }
}

TEST_CASE("schur_complement") {
  CHECK(testsupport::max_abs_diff(schur_complement(Eigen::MatrixXd::Identity(4, 4), 2),
                                  Eigen::MatrixXd::Identity(2, 2)) < 1e-14);
  const Eigen::MatrixXd flat = schur_complement(mat2(1, 1, 1, 1), 1);
  CHECK(flat.rows() == 1);
  CHECK(std::abs(flat(0, 0)) < 1e-14);
  CHECK_THROWS_AS((void)schur_complement(mat2(0, 0, 0, 1), 1), NumericFailure);

  SUBCASE("psd is preserved on random Gram matrices with pd leading block") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 24; ++trial) {
      Eigen::MatrixXd g(6, 6);
      for (int i = 0; i < 36; ++i) {
        g(i % 6, i / 6) = gauss(rng);
      }
      const Eigen::MatrixXd gram =
          symmetrize(g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(6, 6));
      const Eigen::MatrixXd sc = schur_complement(gram, 3);
      CHECK(is_psd(sc));
    }
  }
}

TEST_CASE("tolerance validation") {
  ToleranceConfig cfg;
  cfg.psd_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.psd_tol = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
