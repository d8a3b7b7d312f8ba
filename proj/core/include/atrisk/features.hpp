#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atrisk/aggregate.hpp"
#include "atrisk/at_risk.hpp"
#include "atrisk/panel.hpp"

namespace atrisk {

enum class InputKind { Continuous, AtRisk };  // X_t or Z_t
enum class ModelKind { LogitL2, Gbt };

/// One pipeline variant of the forecasting exercise.
struct PipelineSpec {
  std::string id;
  InputKind input = InputKind::AtRisk;
  Aggregation aggregation = Aggregation::Disaggregated;
  ModelKind model = ModelKind::LogitL2;
  AtRiskConfig at_risk;
  LagSpec lags{{0, 3, 6, 12}};
  int factors = 8;  // PCA only
  std::optional<std::string> subset;   // named subset from the run config
  std::vector<std::string> subset_ids; // resolved ids; empty = full panel
  std::optional<bool> standardize;     // model-level standardization override

  /// Continuous inputs are standardized inside the classifier; binary
  /// disaggregated inputs pass through raw.
  bool effective_standardize() const {
    if (standardize) return *standardize;
    return !(input == InputKind::AtRisk && aggregation == Aggregation::Disaggregated);
  }
};

/// Design matrix for a pipeline at a forecast origin: input rows 0..last_row
/// of the panel (and the matching rows of z for at-risk inputs), aggregation
/// fitted on those same rows, lags stacked afterwards. first_row of the
/// result is expressed in panel-row coordinates.
FeatureBlock build_features(const PanelMatrix& panel, const BinaryStateMatrix* z,
                            const PipelineSpec& spec, int last_row);

}  // namespace atrisk
