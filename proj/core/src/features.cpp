#include "atrisk/features.hpp"

#include "atrisk/errors.hpp"

namespace atrisk {

FeatureBlock build_features(const PanelMatrix& panel, const BinaryStateMatrix* z,
                            const PipelineSpec& spec, int last_row) {
  if (last_row < 0 || last_row >= panel.values.rows()) {
    throw ArgumentError("build_features: origin row outside the panel");
  }

  // Input matrix restricted to rows dated at or before the origin.
  Eigen::MatrixXd input;
  int input_first_row = 0;
  if (spec.input == InputKind::AtRisk) {
    if (z == nullptr) throw StateError("build_features: at-risk input requires a binary matrix");
    input_first_row = z->first_row;
    const int rows = last_row - z->first_row + 1;
    if (rows < 1) throw ArgumentError("build_features: origin precedes the first binarized row");
    input = z->values.topRows(rows);
  } else {
    input = panel.values.topRows(last_row + 1);
  }
  std::vector<Month> input_dates(panel.dates.begin() + input_first_row,
                                 panel.dates.begin() + last_row + 1);

  std::vector<std::string> ids;
  Eigen::MatrixXd aggregated;
  switch (spec.aggregation) {
    case Aggregation::Disaggregated: {
      aggregated = std::move(input);
      ids.reserve(panel.meta.size());
      for (const auto& m : panel.meta) ids.push_back(m.id);
      break;
    }
    case Aggregation::SimpleAverage: {
      aggregated = simple_average(input);
      ids = {"diffusion"};
      break;
    }
    case Aggregation::Pca: {
      // Loadings are re-estimated on the data available at this origin;
      // continuous inputs are standardized, binary inputs centered only.
      const bool scale = spec.input == InputKind::Continuous;
      const PcaModel model = pca_fit(input, spec.factors, scale);
      aggregated = pca_project(input, model);
      for (int k = 1; k <= spec.factors; ++k) ids.push_back("PC" + std::to_string(k));
      break;
    }
  }

  FeatureBlock block = lag_stack(aggregated, input_dates, ids, spec.lags, spec.aggregation);
  block.first_row += input_first_row;
  return block;
}

}  // namespace atrisk
