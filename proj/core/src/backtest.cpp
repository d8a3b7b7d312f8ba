#include "atrisk/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "atrisk/errors.hpp"
#include "atrisk/gbt.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/metrics.hpp"
#include "atrisk/parallel.hpp"

namespace atrisk {

namespace {

PanelMatrix apply_subset(const PanelMatrix& panel, const PipelineSpec& spec) {
  if (spec.subset_ids.empty()) return panel;
  return restrict_columns(panel, spec.subset_ids);
}

std::optional<BinaryStateMatrix> make_binary(const PanelMatrix& panel,
                                             const ResolvedPipeline& resolved) {
  if (resolved.spec.input != InputKind::AtRisk) return std::nullopt;
  const auto& taus = resolved.tau_per_series;
  return binarize(panel, resolved.spec.at_risk, resolved.train_end,
                  taus.empty() ? nullptr : &taus);
}

/// Labeled training rows of a feature block: rows whose target month is
/// realized by the origin (panel row + horizon <= origin row).
int training_rows(const FeatureBlock& block, int horizon, int origin_row) {
  const int n = origin_row - horizon - block.first_row + 1;
  return std::max(0, std::min<int>(n, static_cast<int>(block.values.rows())));
}

}  // namespace

ResolvedPipeline tune_pipeline(const PanelMatrix& full_panel, const PipelineSpec& spec,
                               int horizon, Month train_end, const TuningSettings& settings,
                               Diagnostics* diag) {
  if (horizon < 1 || horizon > 24) {
    throw ArgumentError("tune_pipeline: horizon must lie in 1..24");
  }
  spec.at_risk.validate();
  const PanelMatrix panel = apply_subset(full_panel, spec);
  const int train_row = panel.row_of(train_end);
  if (train_row < 0) throw ArgumentError("train_end " + train_end.str() + " outside the panel");

  ResolvedPipeline resolved;
  resolved.spec = spec;
  resolved.train_end = train_end;

  if (spec.input == InputKind::AtRisk) {
    if (spec.at_risk.tau) {
      resolved.tau_per_series.assign(panel.meta.size(), *spec.at_risk.tau);
    } else {
      resolved.tau_selection =
          select_tau(panel, spec.at_risk.smoothing_window, train_end, spec.at_risk.scope);
      resolved.tau_per_series = resolved.tau_selection.per_series;
    }
  }

  if (spec.model == ModelKind::LogitL2) {
    const auto z = make_binary(panel, resolved);
    const FeatureBlock block =
        build_features(panel, z ? &*z : nullptr, resolved.spec, train_row);
    const int n_train = training_rows(block, horizon, train_row);
    if (n_train < 2) throw ArgumentError("tune_pipeline: training window too short");

    if (block.values.cols() <= 1) {
      // A single regressor needs no shrinkage; the grid applies to
      // multi-column designs only.
      resolved.c_star = std::numeric_limits<double>::infinity();
      return resolved;
    }
    const Eigen::MatrixXd x = block.values.topRows(n_train);
    std::vector<int> y(static_cast<std::size_t>(n_train));
    for (int i = 0; i < n_train; ++i) {
      y[static_cast<std::size_t>(i)] =
          panel.target[static_cast<std::size_t>(block.first_row + i + horizon)];
    }
    const auto grid = penalty_grid(settings.grid_min, settings.grid_max, settings.grid_points);
    const CvPlan plan = make_splits(n_train, settings.cv_splits);
    resolved.tuning = select_c(x, y, grid, plan, spec.effective_standardize(), diag);
    resolved.c_star = resolved.tuning.c_star;
    resolved.cv_ran = true;
  }
  return resolved;
}

BacktestRun run_backtest(const PanelMatrix& full_panel, const ResolvedPipeline& resolved,
                         int horizon, Month first_target, Month last_target,
                         const BacktestOptions& options) {
  if (horizon < 1 || horizon > 24) throw ArgumentError("run_backtest: horizon must lie in 1..24");
  if (last_target < first_target) throw ArgumentError("run_backtest: empty target range");
  const PanelMatrix panel = apply_subset(full_panel, resolved.spec);
  const auto z = make_binary(panel, resolved);

  const int n_targets = last_target - first_target + 1;
  BacktestRun run;
  run.pipeline_id = resolved.spec.id;
  run.horizon = horizon;
  run.meta = panel.meta;
  run.origins.resize(static_cast<std::size_t>(n_targets));
  run.targets.resize(static_cast<std::size_t>(n_targets));
  run.probabilities.resize(static_cast<std::size_t>(n_targets));
  run.labels.resize(static_cast<std::size_t>(n_targets));
  if (options.refit_log) run.importance_log.resize(static_cast<std::size_t>(n_targets));

  // Pre-flight: every origin and target must fall inside the panel window.
  {
    const Month first_origin = first_target - horizon;
    if (panel.row_of(first_origin) < 0) {
      throw ArgumentError("run_backtest: origin " + first_origin.str() + " precedes the panel");
    }
    if (panel.row_of(last_target) < 0) {
      throw ArgumentError("run_backtest: target " + last_target.str() + " beyond the panel");
    }
  }

  parallel_for(static_cast<std::size_t>(n_targets), options.threads, [&](std::size_t k) {
    const Month target = first_target + static_cast<int>(k);
    const Month origin = target - horizon;
    const int origin_row = panel.row_of(origin);
    const int target_row = panel.row_of(target);
    try {
      const FeatureBlock block =
          build_features(panel, z ? &*z : nullptr, resolved.spec, origin_row);
      const int n_train = training_rows(block, horizon, origin_row);
      if (n_train < 2) throw ArgumentError("fewer than two labeled training rows");

      const Eigen::MatrixXd x = block.values.topRows(n_train);
      std::vector<int> y(static_cast<std::size_t>(n_train));
      for (int i = 0; i < n_train; ++i) {
        y[static_cast<std::size_t>(i)] =
            panel.target[static_cast<std::size_t>(block.first_row + i + horizon)];
      }
      const Eigen::MatrixXd x_origin = block.values.bottomRows(1);

      double p = 0.0;
      std::vector<ImportanceEntry> scores;
      if (resolved.spec.model == ModelKind::LogitL2) {
        LogisticFitOptions fit_options;
        fit_options.c = resolved.c_star;
        fit_options.standardize = resolved.spec.effective_standardize();
        const LogisticModel model = fit_logistic(x, y, fit_options, block.labels);
        p = predict_logistic(model, x_origin)(0);
        if (options.refit_log) scores = importance(model);
      } else {
        const GbtModel model = fit_gbt(x, y, GbtParams{}, block.labels);
        p = predict_gbt(model, x_origin)(0);
        if (options.refit_log) scores = importance(model);
      }

      run.origins[k] = origin;
      run.targets[k] = target;
      run.probabilities[k] = p;
      run.labels[k] = panel.target[static_cast<std::size_t>(target_row)];
      if (options.refit_log) run.importance_log[k] = std::move(scores);
    } catch (const Error& e) {
      throw Error("refit failed at origin " + origin.str() + " (target " + target.str() +
                  "): " + e.what());
    }
  });
  return run;
}

std::vector<double> disagreement_series(const BacktestRun& a, const BacktestRun& b) {
  if (a.origins != b.origins) {
    throw ArgumentError("disagreement_series: origin sets differ");
  }
  std::vector<double> diff(a.probabilities.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = a.probabilities[i] - b.probabilities[i];
  }
  return diff;
}

std::vector<Month> recession_peaks(const PanelMatrix& panel) {
  std::vector<Month> peaks;
  for (std::size_t t = 1; t < panel.target.size(); ++t) {
    if (panel.target[t] == 1 && panel.target[t - 1] == 0) {
      peaks.push_back(panel.dates[t - 1]);
    }
  }
  return peaks;
}

SectorLedger sector_contributions(const BacktestRun& run, const std::vector<Month>& peaks,
                                  Diagnostics* diag) {
  if (run.importance_log.empty()) {
    throw StateError("sector_contributions: run was recorded without a refit log");
  }
  std::map<std::string, Sector> sector_of;
  for (const auto& m : run.meta) sector_of[m.id] = m.sector;

  SectorLedger ledger;
  for (Month peak : peaks) {
    const Month window_begin = peak - 12;
    const Month window_end = peak - 1;
    if (run.origins.empty() || window_begin < run.origins.front() ||
        window_end > run.origins.back()) {
      if (diag) {
        diag->warn("sector_contributions: pre-peak window for " + peak.str() +
                   " leaves the backtest range; episode skipped");
      }
      continue;
    }
    const int offset = window_begin - run.origins.front();

    // Mean importance per base over the 12 pre-peak origins.
    std::map<std::string, double> mean_importance;
    for (int i = 0; i < 12; ++i) {
      for (const auto& entry : run.importance_log[static_cast<std::size_t>(offset + i)]) {
        mean_importance[entry.base] += entry.score / 12.0;
      }
    }

    std::map<Sector, double> by_sector;
    double total = 0.0;
    bool unknown_base = false;
    for (const auto& [base, score] : mean_importance) {
      auto it = sector_of.find(base);
      if (it == sector_of.end()) {
        unknown_base = true;
        continue;
      }
      by_sector[it->second] += score;
      total += score;
    }
    if (unknown_base && diag) {
      diag->warn("sector_contributions: importances on aggregated factors have no sector; skipped");
    }
    if (total <= 0.0) {
      if (diag) diag->warn("sector_contributions: zero total importance before " + peak.str());
      continue;
    }
    SectorLedger::Episode episode;
    episode.peak = peak;
    for (auto& [sector, score] : by_sector) episode.percent[sector] = 100.0 * score / total;
    ledger.episodes.push_back(std::move(episode));
  }
  return ledger;
}

MetricReport evaluate_run(const BacktestRun& run, const BootstrapSettings& settings,
                          const BacktestRun* benchmark, Diagnostics* diag) {
  const auto& p = run.probabilities;
  const auto& y = run.labels;

  MetricReport report;
  report.pr_auc.point = pr_auc(p, y);
  report.roc_auc.point = roc_auc(p, y);
  report.brier.point = brier(p, y);
  const MseDecomposition mse = decompose_mse(p, y);
  report.mse_recession = mse.recession;
  report.mse_expansion = mse.expansion;

  struct MetricSpec {
    MetricCi* slot;
    MetricFn fn;
    bool higher_better;
  };
  const MetricSpec metrics[] = {
      {&report.pr_auc, [](auto pp, auto yy) { return pr_auc(pp, yy); }, true},
      {&report.roc_auc, [](auto pp, auto yy) { return roc_auc(pp, yy); }, true},
      {&report.brier, [](auto pp, auto yy) { return brier(pp, yy); }, false},
  };
  for (const auto& m : metrics) {
    const BootstrapCi ci = stationary_bootstrap(p, y, m.fn, run.horizon, settings.replications,
                                                settings.seed, settings.threads, diag);
    m.slot->lo = ci.lo;
    m.slot->hi = ci.hi;
    m.slot->discarded = ci.discarded;
    if (benchmark != nullptr && benchmark->pipeline_id != run.pipeline_id) {
      if (benchmark->targets != run.targets) {
        throw ArgumentError("evaluate_run: benchmark run covers different targets");
      }
      const PairedBootstrap paired = stationary_bootstrap_paired(
          p, benchmark->probabilities, y, m.fn, m.higher_better, run.horizon,
          settings.replications, settings.seed, settings.threads, diag);
      m.slot->benchmark_beat_share = paired.benchmark_beat_share;
    }
  }
  return report;
}

}  // namespace atrisk
