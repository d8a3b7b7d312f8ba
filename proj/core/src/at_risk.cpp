#include "atrisk/at_risk.hpp"

#include <algorithm>
#include <cmath>

#include "atrisk/errors.hpp"
#include "atrisk/stats.hpp"

namespace atrisk {

void AtRiskConfig::validate() const {
  if (tau && !(*tau > 0.0 && *tau < 1.0)) {
    throw ArgumentError("tau must lie in (0,1)");
  }
  if (smoothing_window < 1) {
    throw ArgumentError("smoothing window must be >= 1");
  }
}

std::vector<double> moving_average(const std::vector<double>& x, int window) {
  if (window < 1) throw ArgumentError("moving_average: window must be >= 1");
  if (static_cast<std::size_t>(window) > x.size()) {
    throw ArgumentError("moving_average: window exceeds series length");
  }
  std::vector<double> out(x.size(), missing_value());
  if (window == 1) return x;
  // Each window is summed afresh: a running sum drifts over long series and
  // the windows here are short.
  for (std::size_t t = static_cast<std::size_t>(window) - 1; t < x.size(); ++t) {
    double sum = 0.0;
    for (int s = 0; s < window; ++s) sum += x[t - static_cast<std::size_t>(s)];
    out[t] = sum / static_cast<double>(window);
  }
  return out;
}

namespace {

// Signed smoothed series for one column; NaN on the first window-1 rows.
std::vector<double> signed_ma(const PanelMatrix& panel, std::size_t col, int window) {
  std::vector<double> x(static_cast<std::size_t>(panel.values.rows()));
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = panel.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(col));
  }
  auto ma = moving_average(x, window);
  const double sign = static_cast<double>(panel.meta[col].sign);
  for (auto& v : ma) v *= sign;
  return ma;
}

}  // namespace

TauSelection select_tau(const PanelMatrix& panel, int smoothing_window, Month train_end,
                        TauScope scope) {
  const int end_row = panel.row_of(train_end);
  if (end_row < 0) throw ArgumentError("train_end " + train_end.str() + " outside the panel window");
  const int first = smoothing_window - 1;
  if (first > end_row) throw ArgumentError("training window shorter than the smoothing window");

  std::vector<int> recession_rows;
  for (int t = first; t <= end_row; ++t) {
    if (panel.target[static_cast<std::size_t>(t)] == 1) recession_rows.push_back(t);
  }
  if (recession_rows.empty()) {
    throw ArgumentError("no recession months in the training window up to " + train_end.str());
  }

  const std::size_t n = panel.meta.size();
  TauSelection sel;
  sel.scope = scope;
  sel.tau_star.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto series = signed_ma(panel, i, smoothing_window);
    std::vector<double> training(series.begin() + first, series.begin() + end_row + 1);
    std::vector<double> levels;
    levels.reserve(recession_rows.size());
    for (int t : recession_rows) {
      levels.push_back(empirical_cdf(training, series[static_cast<std::size_t>(t)]));
    }
    sel.tau_star[i] = median_lower(levels);
  }

  sel.per_series.resize(n);
  switch (scope) {
    case TauScope::Global: {
      sel.global = median_lower(sel.tau_star);
      std::fill(sel.per_series.begin(), sel.per_series.end(), sel.global);
      break;
    }
    case TauScope::PerSector: {
      std::map<Sector, std::vector<double>> by_sector;
      for (std::size_t i = 0; i < n; ++i) {
        by_sector[panel.meta[i].sector].push_back(sel.tau_star[i]);
      }
      for (const auto& [sector, values] : by_sector) {
        sel.per_sector[sector] = median_lower(values);
      }
      for (std::size_t i = 0; i < n; ++i) {
        sel.per_series[i] = sel.per_sector.at(panel.meta[i].sector);
      }
      break;
    }
    case TauScope::PerVariable: {
      sel.per_series = sel.tau_star;
      break;
    }
  }
  return sel;
}

BinaryStateMatrix binarize(const PanelMatrix& panel, const AtRiskConfig& config, Month train_end,
                           const std::vector<double>* tau_per_series) {
  config.validate();
  const std::size_t n = panel.meta.size();
  std::vector<double> taus;
  if (config.tau) {
    taus.assign(n, *config.tau);
  } else {
    if (!tau_per_series) {
      throw StateError("binarize: tau is 'auto' but no selected levels were supplied");
    }
    if (tau_per_series->size() != n) {
      throw ArgumentError("binarize: tau vector length does not match the panel");
    }
    taus = *tau_per_series;
  }
  for (double tau : taus) {
    if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("binarize: resolved tau outside (0,1)");
  }

  const int rows = static_cast<int>(panel.values.rows());
  const int first = config.smoothing_window - 1;
  const int end_row = panel.row_of(train_end);
  if (end_row < 0) throw ArgumentError("train_end " + train_end.str() + " outside the panel window");
  if (end_row < first) throw ArgumentError("training window shorter than the smoothing window");
  const int out_rows = rows - first;
  if (out_rows <= 0) throw ArgumentError("binarize: smoothing window longer than the panel");

  BinaryStateMatrix out;
  out.first_row = first;
  out.dates.assign(panel.dates.begin() + first, panel.dates.end());
  out.values.resize(out_rows, static_cast<Eigen::Index>(n));
  out.thresholds.resize(out_rows, static_cast<Eigen::Index>(n));
  out.config = config;
  out.tau_used = taus;

  for (std::size_t i = 0; i < n; ++i) {
    const auto series = signed_ma(panel, i, config.smoothing_window);
    const double tau = taus[i];
    const auto col = static_cast<Eigen::Index>(i);

    if (config.threshold_policy == ThresholdPolicy::FrozenAtTrainEnd) {
      std::vector<double> training(series.begin() + first, series.begin() + end_row + 1);
      std::sort(training.begin(), training.end());
      const double q = empirical_quantile_sorted(training, tau);
      for (int t = first; t < rows; ++t) {
        out.thresholds(t - first, col) = q;
        out.values(t - first, col) = series[static_cast<std::size_t>(t)] <= q ? 1.0 : 0.0;
      }
    } else {
      // Expanding history: the threshold at origin t uses observations
      // dated <= t, kept in a sorted buffer.
      std::vector<double> history;
      history.reserve(static_cast<std::size_t>(rows - first));
      for (int t = first; t < rows; ++t) {
        const double v = series[static_cast<std::size_t>(t)];
        history.insert(std::upper_bound(history.begin(), history.end(), v), v);
        const double q = empirical_quantile_sorted(history, tau);
        out.thresholds(t - first, col) = q;
        out.values(t - first, col) = v <= q ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

}  // namespace atrisk
