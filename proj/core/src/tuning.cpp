#include "atrisk/tuning.hpp"

#include <cmath>

#include "atrisk/errors.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/metrics.hpp"

namespace atrisk {

CvPlan make_splits(int t, int k) {
  if (k < 1) throw ArgumentError("make_splits: need at least one split");
  if (t < (k + 1) * 2) {
    throw ArgumentError("make_splits: " + std::to_string(t) + " rows are too few for " +
                        std::to_string(k) + " splits");
  }
  CvPlan plan;
  plan.block = t / (k + 1);
  for (int i = 1; i <= k; ++i) {
    CvSplit split;
    split.train_end = plan.block * i;
    split.val_begin = plan.block * i;
    split.val_end = i == k ? t : plan.block * (i + 1);
    plan.splits.push_back(split);
  }
  return plan;
}

std::vector<double> penalty_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) throw ArgumentError("penalty_grid: need 0 < lo < hi");
  if (points < 1) throw ArgumentError("penalty_grid: need at least one point");
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double log_lo = std::log10(lo);
  const double log_hi = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, log_lo + (log_hi - log_lo) * i / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

CvResult select_c(const Eigen::MatrixXd& x, const std::vector<int>& y,
                  const std::vector<double>& grid, const CvPlan& plan, bool standardize,
                  Diagnostics* diag) {
  if (grid.empty()) throw ArgumentError("select_c: empty grid");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ArgumentError("select_c: row/label count mismatch");
  }

  // Identify usable folds once; the fold set must not depend on C.
  std::vector<const CvSplit*> usable;
  CvResult result;
  for (std::size_t k = 0; k < plan.splits.size(); ++k) {
    const CvSplit& split = plan.splits[k];
    if (split.val_end > static_cast<int>(y.size())) {
      throw ArgumentError("select_c: plan does not match the data length");
    }
    bool has0 = false, has1 = false;
    for (int t = 0; t < split.train_end; ++t) (y[static_cast<std::size_t>(t)] == 1 ? has1 : has0) = true;
    if (has0 && has1) {
      usable.push_back(&split);
    } else {
      result.skipped_folds.push_back(static_cast<int>(k));
      if (diag) {
        diag->warn("select_c: fold " + std::to_string(k + 1) +
                   " skipped (single-class training window)");
      }
    }
  }
  if (usable.empty()) throw Error("select_c: every fold has a single-class training window");

  result.grid = grid;
  result.mean_scores.assign(grid.size(), 0.0);

  std::size_t best = 0;
  std::vector<std::vector<std::pair<int, double>>> best_preds;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    double total = 0.0;
    std::vector<std::vector<std::pair<int, double>>> preds;
    for (const CvSplit* split : usable) {
      LogisticFitOptions options;
      options.c = grid[m];
      options.standardize = standardize;
      const Eigen::MatrixXd x_train = x.topRows(split->train_end);
      const std::vector<int> y_train(y.begin(), y.begin() + split->train_end);
      const LogisticModel model = fit_logistic(x_train, y_train, options);

      const int n_val = split->val_end - split->val_begin;
      const Eigen::MatrixXd x_val = x.middleRows(split->val_begin, n_val);
      const Eigen::VectorXd p = predict_logistic(model, x_val);
      std::vector<double> pv(static_cast<std::size_t>(n_val));
      std::vector<int> yv(static_cast<std::size_t>(n_val));
      std::vector<std::pair<int, double>> fold;
      for (int t = 0; t < n_val; ++t) {
        pv[static_cast<std::size_t>(t)] = p(t);
        yv[static_cast<std::size_t>(t)] = y[static_cast<std::size_t>(split->val_begin + t)];
        fold.emplace_back(split->val_begin + t, p(t));
      }
      total += brier(pv, yv);
      preds.push_back(std::move(fold));
    }
    result.mean_scores[m] = total / static_cast<double>(usable.size());
    // Ties break toward the larger C (the grid is increasing).
    if (m == 0 || result.mean_scores[m] <= result.mean_scores[best]) {
      best = m;
      best_preds = std::move(preds);
    }
  }
  result.c_star = grid[best];
  result.best_score = result.mean_scores[best];
  result.fold_predictions = std::move(best_preds);
  return result;
}

}  // namespace atrisk
