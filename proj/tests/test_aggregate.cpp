#include <doctest.h>

#include <cmath>
#include <random>

#include "atrisk/aggregate.hpp"
#include "atrisk/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace atrisk;

namespace {

std::vector<Month> dates_for(int rows) {
  std::vector<Month> dates;
  Month m(1960, 1);
  for (int t = 0; t < rows; ++t) dates.push_back(m + t);
  return dates;
}

std::vector<std::string> ids_for(int cols) {
  std::vector<std::string> ids;
  for (int i = 0; i < cols; ++i) ids.push_back("S" + std::to_string(i));
  return ids;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int t = 0; t < rows; ++t) {
    for (int i = 0; i < cols; ++i) m(t, i) = testutil::randn(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("lag_stack") {
  SUBCASE("contemporaneous lag alone is the identity") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd m = random_matrix(rng, 10, 4);
    const FeatureBlock block =
        lag_stack(m, dates_for(10), ids_for(4), LagSpec{{0}}, Aggregation::Disaggregated);
    CHECK(block.first_row == 0);
    CHECK((block.values - m).cwiseAbs().maxCoeff() == 0.0);
    CHECK(block.labels[2].base == "S2");
    CHECK(block.labels[2].lag == 0);
  }

  SUBCASE("the default lag set over 122 series gives 488 columns") {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Zero(30, 122);
    const FeatureBlock block = lag_stack(m, dates_for(30), ids_for(122), LagSpec{{0, 3, 6, 12}},
                                         Aggregation::Disaggregated);
    CHECK(block.values.cols() == 488);
    CHECK(block.values.rows() == 18);
  }

  SUBCASE("boundary: 15 rows with lags {0,12} leaves 3 usable origins") {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Ones(15, 2);
    const FeatureBlock block =
        lag_stack(m, dates_for(15), ids_for(2), LagSpec{{0, 12}}, Aggregation::Disaggregated);
    CHECK(block.values.rows() == 3);
    CHECK(block.first_row == 12);
    CHECK(block.dates.front() == dates_for(15)[12]);
  }

  SUBCASE("lagged columns reproduce shifted rows") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd m = random_matrix(rng, 20, 3);
    const FeatureBlock block =
        lag_stack(m, dates_for(20), ids_for(3), LagSpec{{0, 2, 5}}, Aggregation::Disaggregated);
    // Column block for lag 2 at origin t equals m at t-2.
    for (int t = 0; t < block.values.rows(); ++t) {
      for (int i = 0; i < 3; ++i) {
        CHECK(block.values(t, 3 + i) == m(t + 5 - 2, i));
        CHECK(block.values(t, 6 + i) == m(t, i));
      }
    }
    // Selecting the lag-0 columns recovers the input on surviving origins.
    CHECK((block.values.leftCols(3) - m.bottomRows(15)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("invalid lag sets are argument errors") {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Ones(5, 1);
    CHECK_THROWS_AS(
        lag_stack(m, dates_for(5), ids_for(1), LagSpec{{0, 5}}, Aggregation::Disaggregated),
        ArgumentError);
    CHECK_THROWS_AS(
        lag_stack(m, dates_for(5), ids_for(1), LagSpec{{1, 2}}, Aggregation::Disaggregated),
        ArgumentError);
    CHECK_THROWS_AS(
        lag_stack(m, dates_for(5), ids_for(1), LagSpec{{}}, Aggregation::Disaggregated),
        ArgumentError);
  }
}

TEST_CASE("simple_average") {
  SUBCASE("bounds and the half case") {
    Eigen::MatrixXd z(3, 122);
    z.row(0).setZero();
    z.row(1).setOnes();
    z.row(2).setZero();
    for (int i = 0; i < 61; ++i) z(2, i) = 1.0;
    const Eigen::VectorXd w = simple_average(z);
    CHECK(w(0) == 0.0);
    CHECK(w(1) == 1.0);
    CHECK(w(2) == 0.5);
  }
  SUBCASE("random binary panel equals the explicit row mean") {
    std::mt19937_64 rng(7);
    Eigen::MatrixXd z(40, 9);
    for (int t = 0; t < 40; ++t) {
      for (int i = 0; i < 9; ++i) z(t, i) = rng() % 2 ? 1.0 : 0.0;
    }
    const Eigen::VectorXd w = simple_average(z);
    for (int t = 0; t < 40; ++t) {
      double sum = 0.0;
      for (int i = 0; i < 9; ++i) sum += z(t, i);
      CHECK(w(t) == doctest::Approx(sum / 9.0).epsilon(1e-15));
    }
  }
  SUBCASE("invariant to column permutations") {
    std::mt19937_64 rng(11);
    Eigen::MatrixXd z(12, 5);
    for (int t = 0; t < 12; ++t) {
      for (int i = 0; i < 5; ++i) z(t, i) = rng() % 2 ? 1.0 : 0.0;
    }
    Eigen::MatrixXd shuffled(12, 5);
    const int perm[5] = {3, 0, 4, 1, 2};
    for (int i = 0; i < 5; ++i) shuffled.col(i) = z.col(perm[i]);
    CHECK((simple_average(z) - simple_average(shuffled)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("pca_fit") {
  SUBCASE("rank-1 data: one component explains everything") {
    Eigen::MatrixXd m(6, 2);
    for (int t = 0; t < 6; ++t) {
      m(t, 0) = 0.5 * t;
      m(t, 1) = -1.5 * t;  // exactly on a line
    }
    const PcaModel model = pca_fit(m, 1, false);
    CHECK(model.eigenvalues(0) > 0.0);
    CHECK(std::abs(model.eigenvalues(1)) < 1e-12);
    CHECK(model.eigenvalues(0) ==
          doctest::Approx(model.eigenvalues.sum()).epsilon(1e-12));
  }

  SUBCASE("sign convention is deterministic") {
    std::mt19937_64 rng(13);
    const Eigen::MatrixXd m = random_matrix(rng, 30, 4);
    const PcaModel a = pca_fit(m, 4, false);
    const PcaModel b = pca_fit(m, 4, false);
    CHECK((a.loadings - b.loadings).cwiseAbs().maxCoeff() == 0.0);
    for (int j = 0; j < 4; ++j) {
      Eigen::Index argmax = 0;
      a.loadings.col(j).cwiseAbs().maxCoeff(&argmax);
      CHECK(a.loadings(argmax, j) > 0.0);
    }
  }

  SUBCASE("agrees with the cyclic Jacobi oracle on random matrices") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
      const Eigen::MatrixXd m = random_matrix(rng, 8, 5);
      const PcaModel model = pca_fit(m, 5, false);

      const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
      const Eigen::MatrixXd cov = centered.transpose() * centered / (m.rows() - 1.0);
      const auto want = oracle::jacobi_eigen(cov);
      for (int j = 0; j < 5; ++j) {
        CHECK(model.eigenvalues(j) == doctest::Approx(want.eigenvalues(j)).epsilon(1e-9));
        for (int i = 0; i < 5; ++i) {
          CHECK(std::abs(model.loadings(i, j) - want.eigenvectors(i, j)) < 1e-9);
        }
      }
    }
  }

  SUBCASE("eigenvalues are non-increasing and sum to total variance") {
    std::mt19937_64 rng(19);
    const Eigen::MatrixXd m = random_matrix(rng, 50, 6);
    const PcaModel model = pca_fit(m, 6, true);
    double total = 0.0;
    for (int j = 0; j < 6; ++j) {
      if (j > 0) CHECK(model.eigenvalues(j) <= model.eigenvalues(j - 1) + 1e-12);
      total += model.eigenvalues(j);
    }
    // Standardized columns have unit variance, so the total is the count.
    CHECK(total == doctest::Approx(6.0).epsilon(1e-9));
  }

  SUBCASE("zero-variance column under scaling names the column") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(10, 3);
    m.col(1).setConstant(2.5);
    CHECK_THROWS_WITH_AS(pca_fit(m, 2, true), doctest::Contains("column 1"), DomainError);
    CHECK_NOTHROW(pca_fit(m, 2, false));
  }

  SUBCASE("factor count bounds") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(6, 3);
    CHECK_THROWS_AS(pca_fit(m, 0, false), ArgumentError);
    CHECK_THROWS_AS(pca_fit(m, 4, false), ArgumentError);
  }
}

TEST_CASE("pca_project") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd m = random_matrix(rng, 40, 5);

  SUBCASE("training factors are uncorrelated with variances equal to the eigenvalues") {
    const PcaModel model = pca_fit(m, 5, false);
    const Eigen::MatrixXd factors = pca_project(m, model);
    const Eigen::MatrixXd centered = factors.rowwise() - factors.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / (m.rows() - 1.0);
    for (int a = 0; a < 5; ++a) {
      CHECK(cov(a, a) == doctest::Approx(model.eigenvalues(a)).epsilon(1e-10));
      for (int b = 0; b < 5; ++b) {
        if (a == b) continue;
        CHECK(std::abs(cov(a, b)) < 1e-8 * model.eigenvalues(0));
      }
    }
  }

  SUBCASE("the mean row projects to zero") {
    const PcaModel model = pca_fit(m, 3, false);
    Eigen::MatrixXd mean_row = model.means.transpose();
    const Eigen::MatrixXd projected = pca_project(mean_row, model);
    CHECK(projected.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("full basis reconstructs the data") {
    const PcaModel model = pca_fit(m, 5, false);
    const Eigen::MatrixXd factors = pca_project(m, model);
    const Eigen::MatrixXd rebuilt =
        (factors * model.loadings.transpose()).rowwise() + model.means.transpose();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("column mismatch is an error") {
    const PcaModel model = pca_fit(m, 2, false);
    CHECK_THROWS_AS(pca_project(Eigen::MatrixXd::Zero(3, 4), model), ArgumentError);
  }
}
