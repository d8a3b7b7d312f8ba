#include <doctest.h>

#include <cmath>
#include <random>

#include "atrisk/errors.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/model_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace atrisk;

namespace {

// Independent penalized log-likelihood used by the oracle checks: plain
// loops, no shared code with the implementation.
double loglik_scan(const Eigen::MatrixXd& x, const std::vector<int>& y, double lambda,
                   double beta0, const Eigen::VectorXd& beta) {
  double value = 0.0;
  for (int t = 0; t < x.rows(); ++t) {
    double eta = beta0;
    for (int j = 0; j < x.cols(); ++j) eta += x(t, j) * beta(j);
    value += y[static_cast<std::size_t>(t)] * eta - std::log(1.0 + std::exp(eta));
  }
  double penalty = 0.0;
  for (int j = 0; j < x.cols(); ++j) penalty += beta(j) * beta(j);
  return value - lambda * penalty;
}

struct Problem {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Problem make_problem(std::mt19937_64& rng, int rows, int cols) {
  Problem p;
  p.x.resize(rows, cols);
  p.y.resize(static_cast<std::size_t>(rows));
  for (int t = 0; t < rows; ++t) {
    double eta = -0.3;
    for (int j = 0; j < cols; ++j) {
      p.x(t, j) = testutil::randn(rng);
      eta += (j % 2 == 0 ? 0.8 : -0.5) * p.x(t, j);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    p.y[static_cast<std::size_t>(t)] = unit(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
  }
  bool has0 = false, has1 = false;
  for (int v : p.y) (v == 1 ? has1 : has0) = true;
  if (!has0) p.y[0] = 0;
  if (!has1) p.y[1] = 1;
  return p;
}

}  // namespace

TEST_CASE("intercept-only limit: a huge penalty recovers logit(prevalence)") {
  std::mt19937_64 rng(3);
  Problem p = make_problem(rng, 60, 3);
  // Break any real dependence so the limit is exact.
  for (std::size_t t = 0; t < p.y.size(); ++t) p.y[t] = t % 3 == 0 ? 1 : 0;

  LogisticFitOptions options;
  options.c = 1e-10;  // lambda = 1e10
  const LogisticModel model = fit_logistic(p.x, p.y, options);
  CHECK(model.coef.cwiseAbs().maxCoeff() < 1e-6);
  const double prevalence = 1.0 / 3.0;
  CHECK(model.intercept ==
        doctest::Approx(std::log(prevalence / (1.0 - prevalence))).epsilon(1e-6));
}

TEST_CASE("perfect separation stays finite under a finite penalty") {
  Eigen::MatrixXd x(8, 1);
  std::vector<int> y;
  for (int t = 0; t < 8; ++t) {
    x(t, 0) = t < 4 ? -1.0 - 0.1 * t : 1.0 + 0.1 * t;
    y.push_back(t < 4 ? 0 : 1);
  }
  LogisticFitOptions options;
  options.c = 10.0;
  const LogisticModel model = fit_logistic(x, y, options);
  CHECK(std::isfinite(model.coef(0)));
  CHECK(model.coef(0) > 0.0);  // sign matches the separation direction
}

TEST_CASE("optimum is grid-best for a 20x3 problem") {
  std::mt19937_64 rng(7);
  Problem p = make_problem(rng, 20, 3);
  LogisticFitOptions options;
  options.c = 2.0;
  const double lambda = 1.0 / options.c;
  const LogisticModel model = fit_logistic(p.x, p.y, options);
  const double best = loglik_scan(p.x, p.y, lambda, model.intercept, model.coef);

  // Gradient at the reported optimum vanishes.
  const Eigen::VectorXd grad =
      logistic_gradient(p.x, p.y, lambda, model.intercept, model.coef);
  CHECK(grad.lpNorm<Eigen::Infinity>() < 1e-7);

  // Dense grid over the slope coefficients, +-0.5 in steps of 0.01 around
  // the solution (intercept held at its optimum), plus the same sweep for
  // the intercept: no grid point may beat the reported optimum.
  Eigen::VectorXd beta = model.coef;
  double worst_excess = 0.0;
  for (int a = -50; a <= 50; ++a) {
    for (int b = -50; b <= 50; ++b) {
      for (int c = -50; c <= 50; ++c) {
        Eigen::VectorXd trial = model.coef;
        trial(0) += 0.01 * a;
        trial(1) += 0.01 * b;
        trial(2) += 0.01 * c;
        const double value = loglik_scan(p.x, p.y, lambda, model.intercept, trial);
        worst_excess = std::max(worst_excess, value - best);
      }
    }
  }
  for (int a = -50; a <= 50; ++a) {
    const double value = loglik_scan(p.x, p.y, lambda, model.intercept + 0.01 * a, model.coef);
    worst_excess = std::max(worst_excess, value - best);
  }
  CHECK(worst_excess <= 1e-10);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(11);
  Problem p = make_problem(rng, 30, 4);
  const double lambda = 0.7;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double beta0 = unit(rng);
    Eigen::VectorXd beta(4);
    for (int j = 0; j < 4; ++j) beta(j) = unit(rng);

    const Eigen::VectorXd grad = logistic_gradient(p.x, p.y, lambda, beta0, beta);
    const double fd0 = oracle::central_difference(
        [&](double b) { return logistic_objective(p.x, p.y, lambda, b, beta); }, beta0);
    CHECK(std::abs(grad(0) - fd0) / std::max(1.0, std::abs(fd0)) < 1e-6);
    for (int j = 0; j < 4; ++j) {
      const double fd = oracle::central_difference(
          [&](double b) {
            Eigen::VectorXd shifted = beta;
            shifted(j) = b;
            return logistic_objective(p.x, p.y, lambda, beta0, shifted);
          },
          beta(j));
      CHECK(std::abs(grad(j + 1) - fd) / std::max(1.0, std::abs(fd)) < 1e-6);
    }
  }
}

TEST_CASE("objective trace is non-decreasing") {
  std::mt19937_64 rng(13);
  Problem p = make_problem(rng, 50, 6);
  LogisticFitOptions options;
  options.c = 5.0;
  const LogisticModel model = fit_logistic(p.x, p.y, options);
  REQUIRE(model.objective_trace.size() > 1);
  for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
    CHECK(model.objective_trace[i] >= model.objective_trace[i - 1]);
  }
}

TEST_CASE("coefficient norm shrinks along the lambda path") {
  std::mt19937_64 rng(17);
  Problem p = make_problem(rng, 80, 5);
  double previous_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10; ++i) {
    LogisticFitOptions options;
    options.c = std::pow(10.0, 1.0 - 0.4 * i);  // lambda increasing
    const LogisticModel model = fit_logistic(p.x, p.y, options);
    const double norm = model.coef.norm();
    CHECK(norm <= previous_norm + 1e-8);
    previous_norm = norm;
  }
}

TEST_CASE("predict_logistic") {
  SUBCASE("zero model predicts one half") {
    LogisticModel model;
    model.coef = Eigen::VectorXd::Zero(2);
    model.feature_means = Eigen::VectorXd::Zero(2);
    model.feature_sds = Eigen::VectorXd::Ones(2);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
    const Eigen::VectorXd p = predict_logistic(model, x);
    for (int t = 0; t < 5; ++t) CHECK(p(t) == 0.5);
  }
  SUBCASE("log-odds round-trip is the identity") {
    for (double p : {1e-9, 0.01, 0.3, 0.5, 0.77, 1.0 - 1e-9}) {
      const double eta = std::log(p / (1.0 - p));
      CHECK(sigmoid(eta) == doctest::Approx(p).epsilon(1e-12));
    }
  }
  SUBCASE("raising a positively weighted feature raises the probability") {
    std::mt19937_64 rng(19);
    Problem p = make_problem(rng, 60, 2);
    LogisticFitOptions options;
    options.c = 1.0;
    const LogisticModel model = fit_logistic(p.x, p.y, options);
    Eigen::MatrixXd probe(2, 2);
    probe << 0.0, 0.0, 1.0, 0.0;
    const Eigen::VectorXd out = predict_logistic(model, probe);
    if (model.coef(0) > 0.0) CHECK(out(1) > out(0));
    else CHECK(out(1) <= out(0));
  }
  SUBCASE("column mismatch is an error") {
    LogisticModel model;
    model.coef = Eigen::VectorXd::Zero(2);
    model.feature_means = Eigen::VectorXd::Zero(2);
    model.feature_sds = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(predict_logistic(model, Eigen::MatrixXd::Zero(1, 3)), ArgumentError);
  }
}

TEST_CASE("standardization is applied identically at fit and predict time") {
  std::mt19937_64 rng(23);
  Problem p = make_problem(rng, 70, 3);
  // Put the features on wildly different scales.
  p.x.col(0) *= 1000.0;
  p.x.col(2) *= 0.001;
  LogisticFitOptions options;
  options.c = 1.0;
  options.standardize = true;
  const LogisticModel model = fit_logistic(p.x, p.y, options);
  CHECK(model.standardized);
  // In-sample predictions through the standardization path are probabilities.
  const Eigen::VectorXd probs = predict_logistic(model, p.x);
  for (int t = 0; t < probs.size(); ++t) {
    CHECK(probs(t) > 0.0);
    CHECK(probs(t) < 1.0);
  }
  // The penalty acts on the standardized scale, so the fit is invariant to
  // rescaling the raw columns.
  Eigen::MatrixXd rescaled = p.x;
  rescaled.col(0) /= 1000.0;
  const LogisticModel model2 = fit_logistic(rescaled, p.y, options);
  const Eigen::VectorXd probs2 = predict_logistic(model2, rescaled);
  CHECK((probs - probs2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fit_logistic error paths") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 2);
  SUBCASE("single-class labels") {
    CHECK_THROWS_AS(fit_logistic(x, std::vector<int>(10, 1), {}), ArgumentError);
  }
  SUBCASE("non-finite design") {
    std::vector<int> y(10, 0);
    y[0] = 1;
    x(3, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_logistic(x, y, {}), ArgumentError);
  }
  SUBCASE("non-positive C") {
    std::vector<int> y(10, 0);
    y[0] = 1;
    LogisticFitOptions options;
    options.c = 0.0;
    CHECK_THROWS_AS(fit_logistic(Eigen::MatrixXd::Random(10, 2), y, options), ArgumentError);
  }
}

TEST_CASE("row order does not change the logistic fit") {
  std::mt19937_64 rng(31);
  Problem p = make_problem(rng, 60, 3);
  LogisticFitOptions options;
  options.c = 1.0;
  const LogisticModel base = fit_logistic(p.x, p.y, options);

  std::vector<std::size_t> perm(p.y.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd shuffled_x(p.x.rows(), p.x.cols());
  std::vector<int> shuffled_y(p.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled_x.row(static_cast<Eigen::Index>(i)) = p.x.row(static_cast<Eigen::Index>(perm[i]));
    shuffled_y[i] = p.y[perm[i]];
  }
  const LogisticModel permuted = fit_logistic(shuffled_x, shuffled_y, options);
  CHECK(std::abs(base.intercept - permuted.intercept) < 1e-6);
  CHECK((base.coef - permuted.coef).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("serialized logistic model re-predicts bit-identically") {
  std::mt19937_64 rng(29);
  Problem p = make_problem(rng, 40, 3);
  LogisticFitOptions options;
  options.c = 0.3;
  options.standardize = true;
  const LogisticModel model =
      fit_logistic(p.x, p.y, options, {{"a", 0}, {"b", 0}, {"c", 3}});

  const LogisticModel reloaded = logistic_from_json(to_json(model));
  CHECK(reloaded.labels == model.labels);
  const Eigen::VectorXd before = predict_logistic(model, p.x);
  const Eigen::VectorXd after = predict_logistic(reloaded, p.x);
  CHECK((before - after).cwiseAbs().maxCoeff() == 0.0);
}
