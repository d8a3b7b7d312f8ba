#pragma once

#include <Eigen/Core>
#include <vector>

#include "atrisk/aggregate.hpp"

namespace atrisk {

struct LogisticFitOptions {
  double c = 1.0;            // inverse penalty strength; lambda = 1/c, infinity = unpenalized
  bool standardize = false;  // scale columns to zero mean / unit sd at fit time
  int max_iter = 500;
  double gradient_tol = 1e-8;   // max-norm of the penalized gradient
  double objective_tol = 1e-10; // relative objective change
};

/// L2-penalized logistic regression, intercept unpenalized. Coefficients
/// live on the (possibly standardized) internal feature scale.
struct LogisticModel {
  double intercept = 0.0;
  Eigen::VectorXd coef;
  double c = 1.0;
  bool standardized = false;
  Eigen::VectorXd feature_means;  // identity transform when !standardized
  Eigen::VectorXd feature_sds;
  std::vector<ColumnLabel> labels;

  // Fit diagnostics; not part of the serialized model.
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> objective_trace;
};

/// Maximizes sum_t [y_t eta_t - log(1 + e^{eta_t})] - lambda * sum_j beta_j^2
/// by Newton iterations with step halving from a zero start; deterministic.
/// Throws ArgumentError when y is single-class or the design is non-finite.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                           const LogisticFitOptions& options,
                           std::vector<ColumnLabel> labels = {});

/// Predicted probabilities; never clamped (clamping is a serialization
/// concern so that log-odds stay computable downstream).
Eigen::VectorXd predict_logistic(const LogisticModel& model, const Eigen::MatrixXd& x);

/// The fit objective on the model's internal feature scale, exposed for
/// gradient checks. lambda = 1/c.
double logistic_objective(const Eigen::MatrixXd& x, const std::vector<int>& y, double lambda,
                          double intercept, const Eigen::VectorXd& coef);

/// Analytic gradient of the objective; element 0 is the intercept.
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                  double lambda, double intercept, const Eigen::VectorXd& coef);

/// Numerically stable logistic function.
double sigmoid(double eta);

/// Probability clamped to [1e-12, 1 - 1e-12] for serialization and log-odds.
double clamp_probability(double p);

}  // namespace atrisk
