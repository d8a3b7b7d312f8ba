#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "atrisk/types.hpp"

namespace atrisk {

/// One expanding-window split: rows [0, train_end) train, rows
/// [val_begin, val_end) validate. Training always precedes validation.
struct CvSplit {
  int train_end = 0;
  int val_begin = 0;
  int val_end = 0;
};

struct CvPlan {
  int block = 0;  // s = floor(T / (K+1))
  std::vector<CvSplit> splits;
};

/// Partitions [0, T) into K+1 contiguous blocks of size floor(T/(K+1));
/// split k trains on the first k blocks and validates on block k+1. The
/// last validation block absorbs the remainder rows.
CvPlan make_splits(int t, int k = 5);

/// Log-spaced penalty grid, strictly increasing, endpoints included.
std::vector<double> penalty_grid(double lo = 1e-3, double hi = 10.0, int points = 30);

struct CvResult {
  double c_star = 1.0;
  double best_score = 0.0;  // mean validation Brier at c_star
  std::vector<double> grid;
  std::vector<double> mean_scores;  // one per grid value
  std::vector<int> skipped_folds;   // single-class training sub-windows
  // Validation predictions for the selected C: per surviving fold, a list
  // of (row index, predicted probability).
  std::vector<std::vector<std::pair<int, double>>> fold_predictions;
};

/// Selects the inverse penalty C minimizing the mean validation Brier score
/// over the plan's folds; ties break toward the larger C. Folds whose
/// training rows are single-class are skipped with a warning. Throws when
/// every fold is degenerate.
CvResult select_c(const Eigen::MatrixXd& x, const std::vector<int>& y,
                  const std::vector<double>& grid, const CvPlan& plan, bool standardize,
                  Diagnostics* diag = nullptr);

}  // namespace atrisk
