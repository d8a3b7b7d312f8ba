#pragma once

#include <iosfwd>
#include <string>

#include "atrisk/config.hpp"

namespace atrisk {

inline constexpr const char* kVersion = "0.1.0";

/// Loads the data, tunes every pipeline on the initial training window,
/// runs the recursive backtest over each configured horizon, evaluates
/// metrics/bootstrap/encompassing, and writes the artifact files plus a
/// manifest into the output directory. Partial outputs are removed on error.
void run_experiment(const RunConfig& config, std::ostream& log);

/// Ingests the configured data file into an aligned panel (exclusions,
/// transforms, target attachment, cyclical signs).
PanelMatrix load_panel(const RunConfig& config, Diagnostics* diag = nullptr);

}  // namespace atrisk
