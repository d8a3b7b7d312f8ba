#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atrisk/bootstrap.hpp"
#include "atrisk/features.hpp"
#include "atrisk/importance.hpp"
#include "atrisk/tuning.hpp"

namespace atrisk {

/// Everything tuned on the initial training window and frozen for the
/// recursive exercise.
struct ResolvedPipeline {
  PipelineSpec spec;
  Month train_end;
  std::vector<double> tau_per_series;  // per (restricted) panel column; empty for X inputs
  TauSelection tau_selection;          // populated when tau was selected from data
  double c_star = 1.0;                 // +inf marks an unpenalized single-column fit
  CvResult tuning;                     // populated when cross-validation ran
  bool cv_ran = false;
};

struct TuningSettings {
  int cv_splits = 5;
  double grid_min = 1e-3;
  double grid_max = 10.0;
  int grid_points = 30;
};

/// Resolves the frozen constants on data up to train_end: the binarization
/// quantile level (when tau is "auto") and, for penalized logistic fits with
/// more than one feature column, the inverse penalty C* by expanding-window
/// cross-validation.
ResolvedPipeline tune_pipeline(const PanelMatrix& panel, const PipelineSpec& spec, int horizon,
                               Month train_end, const TuningSettings& settings,
                               Diagnostics* diag = nullptr);

/// Out-of-sample forecasts aligned by target date.
struct BacktestRun {
  std::string pipeline_id;
  int horizon = 0;
  std::vector<Month> origins;
  std::vector<Month> targets;
  std::vector<double> probabilities;
  std::vector<int> labels;  // realized y at the target date
  std::vector<std::vector<ImportanceEntry>> importance_log;  // per origin when enabled
  std::vector<SeriesMeta> meta;  // the (restricted) panel the run used
};

struct BacktestOptions {
  bool refit_log = false;
  int threads = 1;
};

/// Recursive expanding-window backtest: for each target month in
/// [first_target, last_target] the full pipeline (thresholds, aggregation
/// weights, classifier) is re-estimated on data up to the origin
/// target - horizon and the recession probability for the target month is
/// recorded. A refit failure aborts the run with the origin named.
BacktestRun run_backtest(const PanelMatrix& panel, const ResolvedPipeline& resolved, int horizon,
                         Month first_target, Month last_target, const BacktestOptions& options = {});

/// pA - pB per origin; origins must match exactly.
std::vector<double> disagreement_series(const BacktestRun& a, const BacktestRun& b);

/// NBER-style peaks derived from the target: the last y=0 month before each
/// 0 -> 1 transition.
std::vector<Month> recession_peaks(const PanelMatrix& panel);

struct SectorLedger {
  struct Episode {
    Month peak;
    std::map<Sector, double> percent;  // sums to 100 per episode
  };
  std::vector<Episode> episodes;
};

/// Sector shares of total importance over the 12 origins before each peak.
/// Episodes whose window leaves the backtest range are skipped with a
/// warning. Requires a run recorded with refit_log.
SectorLedger sector_contributions(const BacktestRun& run, const std::vector<Month>& peaks,
                                  Diagnostics* diag = nullptr);

struct BootstrapSettings {
  int replications = 1000;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct MetricCi {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int discarded = 0;
  /// Share of paired replications the benchmark wins; set when a benchmark
  /// run is supplied.
  std::optional<double> benchmark_beat_share;
};

struct MetricReport {
  MetricCi pr_auc;
  MetricCi roc_auc;
  MetricCi brier;
  double mse_recession = 0.0;
  double mse_expansion = 0.0;
};

/// Point metrics plus stationary-bootstrap confidence intervals; paired
/// outperformance shares against the benchmark run when one is given.
MetricReport evaluate_run(const BacktestRun& run, const BootstrapSettings& settings,
                          const BacktestRun* benchmark = nullptr, Diagnostics* diag = nullptr);

}  // namespace atrisk
