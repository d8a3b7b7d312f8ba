#include "atrisk/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "atrisk/errors.hpp"
#include "atrisk/fredmd.hpp"
#include "atrisk/logistic.hpp"
#include "atrisk/model_io.hpp"
#include "atrisk/probit.hpp"

namespace atrisk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void format_double(double v, std::ostream& out) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

/// Tracks files created by this run so a failure leaves no partial output.
class OutputTracker {
public:
  explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream create(const std::string& name) {
    fs::create_directories(dir_);
    const fs::path path = dir_ / name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write output file: " + path.string());
    created_.push_back(path);
    return out;
  }

  void remove_all() {
    for (const auto& path : created_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    created_.clear();
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& p : created_) out.push_back(p.filename().string());
    return out;
  }

private:
  fs::path dir_;
  std::vector<fs::path> created_;
};

json metric_ci_to_json(const MetricCi& m) {
  json j{{"point", m.point}, {"ci_lo", m.lo}, {"ci_hi", m.hi}, {"discarded", m.discarded}};
  if (m.benchmark_beat_share) j["benchmark_beat_share"] = *m.benchmark_beat_share;
  return j;
}

json tau_to_json(const ResolvedPipeline& resolved) {
  if (resolved.spec.input != InputKind::AtRisk) return nullptr;
  if (resolved.spec.at_risk.tau) return *resolved.spec.at_risk.tau;
  const TauSelection& sel = resolved.tau_selection;
  switch (sel.scope) {
    case TauScope::Global:
      return sel.global;
    case TauScope::PerSector: {
      json j;
      for (const auto& [sector, tau] : sel.per_sector) j[sector_name(sector)] = tau;
      return j;
    }
    case TauScope::PerVariable:
      return sel.tau_star;
  }
  return nullptr;
}

}  // namespace

PanelMatrix load_panel(const RunConfig& config, Diagnostics* diag) {
  const RawPanel raw = parse_csv(config.data_path, config.schema);

  std::map<std::string, Sector> sector_map = fredmd::default_sector_map();
  for (const auto& [id, group] : config.sector_groups) {
    sector_map[id] = sector_from_group(group);
  }
  PanelMatrix panel =
      exclude_and_align(raw, config.exclusions, config.target_id, sector_map, diag);

  // The configured sample start trims rows earlier than train_start.
  const int start_row = panel.row_of(config.train_start);
  if (start_row > 0) {
    PanelMatrix trimmed;
    trimmed.dates.assign(panel.dates.begin() + start_row, panel.dates.end());
    trimmed.values = panel.values.bottomRows(panel.values.rows() - start_row);
    trimmed.meta = panel.meta;
    trimmed.target.assign(panel.target.begin() + start_row, panel.target.end());
    panel = std::move(trimmed);
  } else if (panel.dates.front() > config.train_start && diag) {
    diag->warn("aligned panel begins " + panel.dates.front().str() +
               ", after the configured train_start " + config.train_start.str());
  }

  const auto& overrides =
      config.sign_overrides ? *config.sign_overrides : default_sign_overrides();
  classify_cyclicality(panel, config.train_end, config.cyclicality_cutoff, overrides, diag);
  return panel;
}

void run_experiment(const RunConfig& config, std::ostream& log) {
  validate_config(config);
  Diagnostics diag;

  const char* env_dir = std::getenv("ATRISK_OUTPUT_DIR");
  const fs::path out_dir = env_dir != nullptr && *env_dir != '\0' ? env_dir : config.output_dir;
  OutputTracker outputs(out_dir);

  try {
    log << "loading " << config.data_path << "\n";
    const PanelMatrix panel = load_panel(config, &diag);
    log << "panel: " << panel.meta.size() << " series, " << panel.dates.size() << " months ("
        << panel.dates.front().str() << " .. " << panel.dates.back().str() << ")\n";

    if (panel.row_of(config.train_end) < 0) {
      throw ConfigError("train_end " + config.train_end.str() + " outside the aligned panel");
    }
    if (panel.row_of(config.eval_end) < 0) {
      throw ConfigError("eval_end " + config.eval_end.str() + " outside the aligned panel");
    }

    const auto subsets = list_subsets(config, &diag);
    const int threads = config.threads;
    const BootstrapSettings bootstrap{config.bootstrap_replications, config.bootstrap_seed,
                                      threads};
    const BacktestOptions backtest_options{config.refit_log, threads};

    // Tune and backtest every pipeline x horizon cell.
    std::map<std::string, std::map<int, BacktestRun>> runs;          // id -> h -> run
    std::map<std::string, std::map<int, ResolvedPipeline>> frozen;   // id -> h -> constants
    for (const auto& raw_spec : config.pipelines) {
      PipelineSpec spec = raw_spec;
      if (spec.subset) spec.subset_ids = subsets.at(*spec.subset);
      for (int h : config.horizons) {
        log << "pipeline " << spec.id << " h=" << h << ": tune";
        log.flush();
        ResolvedPipeline resolved =
            tune_pipeline(panel, spec, h, config.train_end, config.tuning, &diag);
        log << (resolved.cv_ran
                    ? " (C*=" + std::to_string(resolved.c_star) + ")"
                    : "")
            << ", backtest";
        log.flush();
        BacktestRun run = run_backtest(panel, resolved, h, config.eval_start, config.eval_end,
                                       backtest_options);
        log << " done (" << run.targets.size() << " forecasts)\n";
        frozen[spec.id].emplace(h, std::move(resolved));
        runs[spec.id].emplace(h, std::move(run));
      }
    }

    // Metric reports (with paired shares against the configured benchmark).
    json metrics_json = json::array();
    for (const auto& spec : config.pipelines) {
      for (int h : config.horizons) {
        const BacktestRun& run = runs.at(spec.id).at(h);
        const BacktestRun* benchmark = nullptr;
        if (config.benchmark && *config.benchmark != spec.id) {
          benchmark = &runs.at(*config.benchmark).at(h);
        }
        const MetricReport report = evaluate_run(run, bootstrap, benchmark, &diag);
        json cell{{"pipeline", spec.id},
                  {"horizon", h},
                  {"pr_auc", metric_ci_to_json(report.pr_auc)},
                  {"roc_auc", metric_ci_to_json(report.roc_auc)},
                  {"brier", metric_ci_to_json(report.brier)},
                  {"mse_recession", report.mse_recession},
                  {"mse_expansion", report.mse_expansion},
                  {"n_forecasts", run.targets.size()}};
        metrics_json.push_back(std::move(cell));
      }
    }

    // Encompassing regressions per configured pair and horizon.
    json encompassing_json = json::array();
    for (const auto& [a, b] : config.encompassing) {
      for (int h : config.horizons) {
        const BacktestRun& run_a = runs.at(a).at(h);
        const BacktestRun& run_b = runs.at(b).at(h);
        const ProbitModel probit =
            fit_probit_encompassing(run_a.probabilities, run_b.probabilities, run_a.labels);
        encompassing_json.push_back(json{{"proposed", a},
                                         {"benchmark", b},
                                         {"horizon", h},
                                         {"beta_0", probit.coef(0)},
                                         {"beta_a", probit.coef(1)},
                                         {"p_a", probit.p_values(1)},
                                         {"beta_b", probit.coef(2)},
                                         {"p_b", probit.p_values(2)}});
      }
    }

    // Emit everything only after the whole grid computed.
    for (int h : config.horizons) {
      auto out = outputs.create("probabilities_h" + std::to_string(h) + ".csv");
      out << "origin,target,y";
      for (const auto& spec : config.pipelines) out << ',' << spec.id;
      out << '\n';
      const BacktestRun& first = runs.at(config.pipelines.front().id).at(h);
      for (std::size_t t = 0; t < first.targets.size(); ++t) {
        out << first.origins[t].str() << ',' << first.targets[t].str() << ',' << first.labels[t];
        for (const auto& spec : config.pipelines) {
          out << ',';
          format_double(clamp_probability(runs.at(spec.id).at(h).probabilities[t]), out);
        }
        out << '\n';
      }
    }

    {
      auto out = outputs.create("metrics.json");
      out << metrics_json.dump(2) << '\n';
    }
    if (!encompassing_json.empty()) {
      auto out = outputs.create("encompassing.json");
      out << encompassing_json.dump(2) << '\n';
    }

    if (config.benchmark) {
      for (int h : config.horizons) {
        auto out = outputs.create("disagreement_h" + std::to_string(h) + ".csv");
        out << "origin,target";
        for (const auto& spec : config.pipelines) {
          if (spec.id != *config.benchmark) out << ',' << spec.id;
        }
        out << '\n';
        const BacktestRun& bench = runs.at(*config.benchmark).at(h);
        for (std::size_t t = 0; t < bench.targets.size(); ++t) {
          out << bench.origins[t].str() << ',' << bench.targets[t].str();
          for (const auto& spec : config.pipelines) {
            if (spec.id == *config.benchmark) continue;
            out << ',';
            const auto diff = runs.at(spec.id).at(h).probabilities[t] - bench.probabilities[t];
            format_double(diff, out);
          }
          out << '\n';
        }
      }
    }

    if (config.refit_log) {
      const std::vector<Month> peaks = config.recession_peak_override
                                           ? *config.recession_peak_override
                                           : recession_peaks(panel);
      for (int h : config.horizons) {
        auto imp = outputs.create("importance_h" + std::to_string(h) + ".csv");
        imp << "pipeline,variable,importance\n";
        auto ledger_out = outputs.create("sector_ledger_h" + std::to_string(h) + ".csv");
        ledger_out << "pipeline,peak,sector,percent\n";
        for (const auto& spec : config.pipelines) {
          const BacktestRun& run = runs.at(spec.id).at(h);
          // Average importance across refits.
          std::map<std::string, double> mean;
          for (const auto& origin_scores : run.importance_log) {
            for (const auto& entry : origin_scores) {
              mean[entry.base] += entry.score / static_cast<double>(run.importance_log.size());
            }
          }
          std::vector<std::pair<std::string, double>> rows(mean.begin(), mean.end());
          std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.second > b.second || (a.second == b.second && a.first < b.first);
          });
          for (const auto& [base, score] : rows) {
            imp << spec.id << ',' << base << ',';
            format_double(score, imp);
            imp << '\n';
          }
          if (spec.aggregation == Aggregation::Disaggregated) {
            const SectorLedger ledger = sector_contributions(run, peaks, &diag);
            for (const auto& episode : ledger.episodes) {
              for (const auto& [sector, percent] : episode.percent) {
                ledger_out << spec.id << ',' << episode.peak.str() << ",\"" << sector_name(sector)
                           << "\",";
                format_double(percent, ledger_out);
                ledger_out << '\n';
              }
            }
          }
        }
      }
    }

    {
      json manifest;
      manifest["version"] = kVersion;
      manifest["config"] = config_to_json(config);
      manifest["config_hash"] = config_hash(config);
      manifest["seed"] = config.bootstrap_seed;
      json frozen_json = json::array();
      for (const auto& spec : config.pipelines) {
        for (int h : config.horizons) {
          const ResolvedPipeline& resolved = frozen.at(spec.id).at(h);
          json cell{{"pipeline", spec.id}, {"horizon", h}, {"tau", tau_to_json(resolved)}};
          if (resolved.spec.model == ModelKind::LogitL2) {
            cell["c_star"] = std::isinf(resolved.c_star) ? json("inf") : json(resolved.c_star);
          }
          frozen_json.push_back(std::move(cell));
        }
      }
      manifest["frozen"] = std::move(frozen_json);
      manifest["warnings"] = diag.warnings;
      auto out = outputs.create("manifest.json");
      out << manifest.dump(2) << '\n';
    }

    for (const auto& w : diag.warnings) log << "warning: " << w << "\n";
    log << "wrote " << outputs.names().size() << " files to " << out_dir.string() << "\n";
  } catch (...) {
    outputs.remove_all();
    throw;
  }
}

}  // namespace atrisk
