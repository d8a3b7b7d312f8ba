#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <vector>

#include "atrisk/panel.hpp"
#include "atrisk/types.hpp"

namespace atrisk {

enum class TauScope { Global, PerSector, PerVariable };

/// How each series' threshold sample evolves after the initial training
/// window. The selected quantile level stays frozen under both policies;
/// ExpandingHistory recomputes the quantile value on the history up to each
/// origin, FrozenAtTrainEnd keeps the training-window value.
enum class ThresholdPolicy { FrozenAtTrainEnd, ExpandingHistory };

struct AtRiskConfig {
  std::optional<double> tau;  // nullopt = select from training data
  int smoothing_window = 1;   // h_g, months
  TauScope scope = TauScope::Global;
  ThresholdPolicy threshold_policy = ThresholdPolicy::ExpandingHistory;

  void validate() const;
};

/// Binary at-risk matrix plus the thresholds that produced it. Rows start
/// h_g - 1 panel rows in (the moving average is undefined before that).
struct BinaryStateMatrix {
  std::vector<Month> dates;
  int first_row = 0;           // offset into the source panel's rows
  Eigen::MatrixXd values;      // T' x N of 0/1
  Eigen::MatrixXd thresholds;  // T' x N, quantile value used at each origin
  AtRiskConfig config;
  std::vector<double> tau_used;  // resolved per series
};

/// Trailing moving average; the first window-1 positions are NaN.
std::vector<double> moving_average(const std::vector<double>& x, int window);

/// Result of the quantile-level selection. per_series is the resolved level
/// for every column; the scope cells are kept for reporting.
struct TauSelection {
  TauScope scope = TauScope::Global;
  std::vector<double> per_series;
  double global = 0.0;                   // scope == Global
  std::map<Sector, double> per_sector;   // scope == PerSector
  std::vector<double> tau_star;          // per-series medians over recession months
};

/// Selects the binarization quantile level from the training window:
/// for each series, the empirical quantile level of each recession-month
/// observation of the signed smoothed series within the training sample,
/// reduced by medians (per recession month, then across series according to
/// scope). Medians take the lower-middle element so the result is always an
/// attained level.
TauSelection select_tau(const PanelMatrix& panel, int smoothing_window, Month train_end,
                        TauScope scope);

/// The at-risk transformation: z_it = 1{ s_i * ma(x_i)_t <= Q_i(tau_i) },
/// with Q_i the left-continuous empirical quantile of the signed smoothed
/// history per the threshold policy. tau comes from config.tau when set,
/// otherwise from tau_per_series (as produced by select_tau).
BinaryStateMatrix binarize(const PanelMatrix& panel, const AtRiskConfig& config, Month train_end,
                           const std::vector<double>* tau_per_series = nullptr);

}  // namespace atrisk
