#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "atrisk/month.hpp"

namespace atrisk {

struct LagSpec {
  std::vector<int> lags{0};  // months; 0 = contemporaneous

  void validate(int rows) const;
};

enum class Aggregation { Disaggregated, SimpleAverage, Pca };

/// A design-matrix column: base variable (series or factor id) plus lag.
struct ColumnLabel {
  std::string base;
  int lag = 0;

  bool operator==(const ColumnLabel&) const = default;
};

/// Model-ready design matrix. Origins with any unavailable lag are dropped,
/// so rows start max(lags) input rows in.
struct FeatureBlock {
  std::vector<Month> dates;  // one per surviving origin
  int first_row = 0;         // offset into the input matrix rows
  Eigen::MatrixXd values;    // T' x M
  std::vector<ColumnLabel> labels;
  Aggregation provenance = Aggregation::Disaggregated;
};

/// Stacks m's rows with the requested lags; column order is (lag-major)
/// all columns at lag[0], then lag[1], ...
FeatureBlock lag_stack(const Eigen::MatrixXd& m, const std::vector<Month>& dates,
                       const std::vector<std::string>& column_ids, const LagSpec& spec,
                       Aggregation provenance);

/// Cross-sectional mean per row (the diffusion index for a binary matrix).
Eigen::VectorXd simple_average(const Eigen::MatrixXd& m);

struct PcaModel {
  Eigen::MatrixXd loadings;    // N x K, orthonormal columns
  Eigen::VectorXd means;       // N
  Eigen::VectorXd scales;      // N; all ones when standardize=false
  Eigen::VectorXd eigenvalues; // all N, descending
};

/// Principal components of the sample covariance of the given rows.
/// Columns are centered; with standardize they are also scaled to unit
/// sample standard deviation (zero variance is an error then). Eigenvector
/// signs are fixed so the largest-magnitude loading entry is positive.
PcaModel pca_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows, int k, bool standardize);

/// (m - means) / scales * loadings, applicable to any date range with the
/// fitted model frozen.
Eigen::MatrixXd pca_project(const Eigen::Ref<const Eigen::MatrixXd>& m, const PcaModel& model);

}  // namespace atrisk
