#pragma once

#include <span>

namespace atrisk {

/// Area under the precision-recall curve by rectangular (step) integration;
/// predictions tied on the same value enter as one threshold block.
/// Requires at least one positive label.
double pr_auc(std::span<const double> p, std::span<const int> y);

/// ROC AUC as the exact Mann-Whitney statistic: P(p_pos > p_neg) + tie/2.
/// Requires both classes.
double roc_auc(std::span<const double> p, std::span<const int> y);

/// Brier score: mean squared error of probability forecasts.
double brier(std::span<const double> p, std::span<const int> y);

struct MseDecomposition {
  double recession = 0.0;  // mean over y=1 rows (NaN when none)
  double expansion = 0.0;  // mean over y=0 rows (NaN when none)
  double full = 0.0;
};

MseDecomposition decompose_mse(std::span<const double> p, std::span<const int> y);

}  // namespace atrisk
