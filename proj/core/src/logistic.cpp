#include "atrisk/logistic.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "atrisk/errors.hpp"

namespace atrisk {

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double clamp_probability(double p) {
  constexpr double kEps = 1e-12;
  return std::min(1.0 - kEps, std::max(kEps, p));
}

namespace {

// log(1 + e^eta) without overflow.
double softplus(double eta) {
  if (eta > 0.0) return eta + std::log1p(std::exp(-eta));
  return std::log1p(std::exp(eta));
}

void check_inputs(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ArgumentError("fit_logistic: row/label count mismatch");
  }
  if (x.rows() == 0) throw ArgumentError("fit_logistic: empty design");
  if (!x.allFinite()) throw ArgumentError("fit_logistic: non-finite design values");
  bool has0 = false, has1 = false;
  for (int v : y) {
    if (v == 0) has0 = true;
    else if (v == 1) has1 = true;
    else throw ArgumentError("fit_logistic: labels must be 0/1");
  }
  if (!has0 || !has1) {
    throw ArgumentError("fit_logistic: labels are single-class; widen the window");
  }
}

}  // namespace

double logistic_objective(const Eigen::MatrixXd& x, const std::vector<int>& y, double lambda,
                          double intercept, const Eigen::VectorXd& coef) {
  Eigen::VectorXd eta = x * coef;
  double value = 0.0;
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    const double e = eta(t) + intercept;
    value += static_cast<double>(y[static_cast<std::size_t>(t)]) * e - softplus(e);
  }
  return value - lambda * coef.squaredNorm();
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                  double lambda, double intercept, const Eigen::VectorXd& coef) {
  Eigen::VectorXd eta = x * coef;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    resid(t) = static_cast<double>(y[static_cast<std::size_t>(t)]) - sigmoid(eta(t) + intercept);
  }
  Eigen::VectorXd grad(coef.size() + 1);
  grad(0) = resid.sum();
  grad.tail(coef.size()) = x.transpose() * resid - 2.0 * lambda * coef;
  return grad;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const LogisticFitOptions& options,
                           std::vector<ColumnLabel> labels) {
  check_inputs(x, y);
  if (!(options.c > 0.0)) throw ArgumentError("fit_logistic: C must be positive");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != x.cols()) {
    throw ArgumentError("fit_logistic: label count does not match the design");
  }

  const Eigen::Index rows = x.rows();
  const Eigen::Index cols = x.cols();
  const double lambda = std::isinf(options.c) ? 0.0 : 1.0 / options.c;

  LogisticModel model;
  model.c = options.c;
  model.standardized = options.standardize;
  model.labels = std::move(labels);
  model.feature_means = Eigen::VectorXd::Zero(cols);
  model.feature_sds = Eigen::VectorXd::Ones(cols);

  Eigen::MatrixXd design = x;
  if (options.standardize) {
    model.feature_means = x.colwise().mean();
    design.rowwise() -= model.feature_means.transpose();
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double var = design.col(j).squaredNorm() / static_cast<double>(rows);
      model.feature_sds(j) = var > 0.0 ? std::sqrt(var) : 1.0;
      design.col(j) /= model.feature_sds(j);
    }
  }

  double intercept = 0.0;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(cols);
  double objective = logistic_objective(design, y, lambda, intercept, coef);
  model.objective_trace.push_back(objective);

  Eigen::MatrixXd hessian(cols + 1, cols + 1);
  Eigen::VectorXd weights(rows);
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd grad = logistic_gradient(design, y, lambda, intercept, coef);
    model.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    if (model.gradient_norm < options.gradient_tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd eta = design * coef;
    for (Eigen::Index t = 0; t < rows; ++t) {
      const double p = sigmoid(eta(t) + intercept);
      weights(t) = p * (1.0 - p);
    }
    // Negative Hessian of the objective: [1 X]' W [1 X] + 2 lambda diag(0, I).
    const Eigen::MatrixXd weighted = weights.asDiagonal() * design;
    hessian(0, 0) = weights.sum();
    const Eigen::VectorXd xw = weighted.colwise().sum();
    hessian.block(0, 1, 1, cols) = xw.transpose();
    hessian.block(1, 0, cols, 1) = xw;
    hessian.block(1, 1, cols, cols).noalias() = design.transpose() * weighted;
    for (Eigen::Index j = 1; j <= cols; ++j) hessian(j, j) += 2.0 * lambda;
    // Tiny ridge on the diagonal keeps the solve well-posed when all the
    // IRLS weights underflow (saturated fit).
    for (Eigen::Index j = 0; j <= cols; ++j) hessian(j, j) += 1e-12;

    Eigen::VectorXd step = hessian.ldlt().solve(grad);
    double scale = 1.0;
    double candidate = 0.0;
    double new_intercept = 0.0;
    Eigen::VectorXd new_coef;
    for (int halving = 0; halving < 60; ++halving) {
      new_intercept = intercept + scale * step(0);
      new_coef = coef + scale * step.tail(cols);
      candidate = logistic_objective(design, y, lambda, new_intercept, new_coef);
      if (candidate >= objective) break;
      scale *= 0.5;
    }
    if (candidate < objective) {
      // No improving step; gradient is numerically flat.
      converged = true;
      break;
    }
    const double change = candidate - objective;
    intercept = new_intercept;
    coef = new_coef;
    objective = candidate;
    model.objective_trace.push_back(objective);
    if (change <= options.objective_tol * (1.0 + std::abs(objective))) {
      converged = true;
      model.gradient_norm =
          logistic_gradient(design, y, lambda, intercept, coef).lpNorm<Eigen::Infinity>();
      break;
    }
  }
  if (!converged) {
    throw Error("fit_logistic: no convergence after " + std::to_string(options.max_iter) +
                " iterations (gradient max-norm " + std::to_string(model.gradient_norm) + ")");
  }
  model.iterations = iter;
  model.intercept = intercept;
  model.coef = coef;
  return model;
}

Eigen::VectorXd predict_logistic(const LogisticModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coef.size()) {
    throw ArgumentError("predict_logistic: column count does not match the fit");
  }
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    double eta = model.intercept;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      eta += model.coef(j) * (x(t, j) - model.feature_means(j)) / model.feature_sds(j);
    }
    out(t) = sigmoid(eta);
  }
  return out;
}

}  // namespace atrisk
