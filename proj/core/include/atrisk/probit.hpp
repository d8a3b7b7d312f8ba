#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace atrisk {

/// Probit encompassing regression of y on the log-odds of two probability
/// forecasts: P(y=1) = Phi(b0 + bA L(pA) + bB L(pB)).
struct ProbitModel {
  Eigen::Vector3d coef;        // b0, bA, bB
  Eigen::Matrix3d covariance;  // inverse observed information
  Eigen::Vector3d std_errors;
  Eigen::Vector3d p_values;    // two-sided Wald
  int iterations = 0;
};

/// Log-odds with inputs clamped to [1e-12, 1-1e-12].
double log_odds(double p);

/// Fits the encompassing probit by maximum likelihood (Newton with step
/// halving). Throws SingularityError when |corr(L(pA), L(pB))| > 1 - 1e-10.
ProbitModel fit_probit_encompassing(std::span<const double> p_a, std::span<const double> p_b,
                                    std::span<const int> y);

}  // namespace atrisk
