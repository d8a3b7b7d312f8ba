#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atrisk/backtest.hpp"
#include "atrisk/panel.hpp"

namespace atrisk {

/// One declarative run configuration; see README for the file schema.
/// Unknown keys anywhere in the file are errors.
struct RunConfig {
  // data
  std::string data_path;
  std::string target_id = "USRECM";
  CsvSchema schema;
  std::vector<std::string> exclusions = default_exclusions();
  std::map<std::string, int> sector_groups;                    // id -> 1..8, merged over builtin
  std::optional<std::map<std::string, int>> sign_overrides;    // absent = builtin list
  double cyclicality_cutoff = -0.10;

  // sample
  Month train_start{1960, 1};
  Month train_end{1989, 12};
  Month eval_start{1990, 1};
  Month eval_end{2024, 12};

  std::vector<int> horizons{3, 6, 12};
  std::vector<PipelineSpec> pipelines;

  TuningSettings tuning;
  int bootstrap_replications = 1000;
  std::uint64_t bootstrap_seed = 42;

  // evaluation
  std::optional<std::string> benchmark;  // pipeline id paired CIs compare against
  std::vector<std::pair<std::string, std::string>> encompassing;  // (proposed, benchmark) ids
  bool refit_log = true;
  std::optional<std::vector<Month>> recession_peak_override;

  std::map<std::string, std::vector<std::string>> user_subsets;
  std::map<std::string, std::string> user_aliases;

  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

/// Structural and cross-field checks that need no data file.
void validate_config(const RunConfig& config);

/// Built-in subsets merged with the user's; aliases resolved to ids and
/// duplicates removed with a warning.
std::map<std::string, std::vector<std::string>> list_subsets(const RunConfig& config,
                                                             Diagnostics* diag = nullptr);

/// Resolves a series name through the merged alias table (exact ids pass
/// through).
std::string resolve_series_id(const std::string& name, const RunConfig& config);

/// FNV-1a hash of the canonical serialized configuration.
std::string config_hash(const RunConfig& config);

}  // namespace atrisk
