#include "atrisk/probit.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "atrisk/errors.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/stats.hpp"

namespace atrisk {

double log_odds(double p) {
  const double q = clamp_probability(p);
  return std::log(q / (1.0 - q));
}

namespace {

double probit_loglik(const Eigen::MatrixXd& x, std::span<const int> y, const Eigen::Vector3d& beta) {
  double value = 0.0;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    const double eta = x.row(t).dot(beta);
    value += y[static_cast<std::size_t>(t)] == 1 ? log_norm_cdf(eta) : log_norm_cdf(-eta);
  }
  return value;
}

// Inverse Mills ratio phi(eta)/Phi(eta), stable for very negative eta.
double mills(double eta) { return std::exp(-0.5 * eta * eta - 0.9189385332046727 - log_norm_cdf(eta)); }

}  // namespace

ProbitModel fit_probit_encompassing(std::span<const double> p_a, std::span<const double> p_b,
                                    std::span<const int> y) {
  const std::size_t n = y.size();
  if (p_a.size() != n || p_b.size() != n || n == 0) {
    throw ArgumentError("fit_probit_encompassing: input length mismatch");
  }
  bool has0 = false, has1 = false;
  for (int v : y) (v == 1 ? has1 : has0) = true;
  if (!has0 || !has1) throw ArgumentError("fit_probit_encompassing: labels are single-class");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 3);
  std::vector<double> la(n), lb(n);
  for (std::size_t t = 0; t < n; ++t) {
    la[t] = log_odds(p_a[t]);
    lb[t] = log_odds(p_b[t]);
    x(static_cast<Eigen::Index>(t), 0) = 1.0;
    x(static_cast<Eigen::Index>(t), 1) = la[t];
    x(static_cast<Eigen::Index>(t), 2) = lb[t];
  }
  const double corr = pearson_correlation(la, lb);
  if (std::isnan(corr) || std::abs(corr) > 1.0 - 1e-10) {
    throw SingularityError("fit_probit_encompassing: log-odds regressors are collinear");
  }

  ProbitModel model;
  Eigen::Vector3d beta = Eigen::Vector3d::Zero();
  double loglik = probit_loglik(x, y, beta);

  Eigen::Vector3d grad;
  Eigen::Matrix3d info;
  constexpr int kMaxIter = 200;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    grad.setZero();
    info.setZero();
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
      const Eigen::Vector3d row = x.row(t).transpose();
      const double eta = row.dot(beta);
      double score, weight;
      if (y[static_cast<std::size_t>(t)] == 1) {
        const double m = mills(eta);          // phi/Phi
        score = m;
        weight = m * (m + eta);               // -d score/d eta
      } else {
        const double m = mills(-eta);         // phi/(1-Phi)
        score = -m;
        weight = m * (m - eta);
      }
      grad += score * row;
      info += weight * row * row.transpose();
    }
    if (grad.lpNorm<Eigen::Infinity>() < 1e-10) break;

    Eigen::Vector3d step = info.ldlt().solve(grad);
    double scale = 1.0;
    Eigen::Vector3d candidate = beta;
    double cand_ll = loglik;
    for (int halving = 0; halving < 60; ++halving) {
      candidate = beta + scale * step;
      cand_ll = probit_loglik(x, y, candidate);
      if (cand_ll >= loglik) break;
      scale *= 0.5;
    }
    if (cand_ll < loglik) break;
    const double change = cand_ll - loglik;
    beta = candidate;
    loglik = cand_ll;
    if (change <= 1e-12 * (1.0 + std::abs(loglik))) break;
  }

  model.coef = beta;
  model.iterations = iter;
  // Observed information at the optimum.
  info.setZero();
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    const Eigen::Vector3d row = x.row(t).transpose();
    const double eta = row.dot(beta);
    double weight;
    if (y[static_cast<std::size_t>(t)] == 1) {
      const double m = mills(eta);
      weight = m * (m + eta);
    } else {
      const double m = mills(-eta);
      weight = m * (m - eta);
    }
    info += weight * row * row.transpose();
  }
  Eigen::LDLT<Eigen::Matrix3d> ldlt(info);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw SingularityError("fit_probit_encompassing: observed information is singular");
  }
  model.covariance = ldlt.solve(Eigen::Matrix3d::Identity());
  for (int j = 0; j < 3; ++j) {
    model.std_errors(j) = std::sqrt(model.covariance(j, j));
    const double z = model.coef(j) / model.std_errors(j);
    model.p_values(j) = std::erfc(std::abs(z) / 1.4142135623730951);
  }
  return model;
}

}  // namespace atrisk
