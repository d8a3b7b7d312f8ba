#include "atrisk/aggregate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "atrisk/errors.hpp"

namespace atrisk {

void LagSpec::validate(int rows) const {
  if (lags.empty()) throw ArgumentError("lag set must not be empty");
  if (std::find(lags.begin(), lags.end(), 0) == lags.end()) {
    throw ArgumentError("lag set must contain the contemporaneous lag 0");
  }
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (lags[i] < 0) throw ArgumentError("lags must be non-negative");
    if (i > 0 && lags[i] <= lags[i - 1]) {
      throw ArgumentError("lags must be strictly increasing");
    }
    if (lags[i] >= rows) {
      throw ArgumentError("lag " + std::to_string(lags[i]) + " >= available rows " +
                          std::to_string(rows));
    }
  }
}

FeatureBlock lag_stack(const Eigen::MatrixXd& m, const std::vector<Month>& dates,
                       const std::vector<std::string>& column_ids, const LagSpec& spec,
                       Aggregation provenance) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (static_cast<int>(column_ids.size()) != cols) {
    throw ArgumentError("lag_stack: column id count does not match the matrix");
  }
  if (static_cast<int>(dates.size()) != rows) {
    throw ArgumentError("lag_stack: date count does not match the matrix");
  }
  spec.validate(rows);

  const int max_lag = *std::max_element(spec.lags.begin(), spec.lags.end());
  const int out_rows = rows - max_lag;

  FeatureBlock block;
  block.provenance = provenance;
  block.first_row = max_lag;
  block.dates.assign(dates.begin() + max_lag, dates.end());
  block.values.resize(out_rows, static_cast<Eigen::Index>(spec.lags.size()) * cols);
  block.labels.reserve(spec.lags.size() * static_cast<std::size_t>(cols));
  for (std::size_t l = 0; l < spec.lags.size(); ++l) {
    const int lag = spec.lags[l];
    block.values.middleCols(static_cast<Eigen::Index>(l) * cols, cols) =
        m.middleRows(max_lag - lag, out_rows);
    for (int c = 0; c < cols; ++c) {
      block.labels.push_back({column_ids[static_cast<std::size_t>(c)], lag});
    }
  }
  return block;
}

Eigen::VectorXd simple_average(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) throw ArgumentError("simple_average: empty matrix");
  return m.rowwise().mean();
}

PcaModel pca_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows, int k, bool standardize) {
  const Eigen::Index t = rows.rows();
  const Eigen::Index n = rows.cols();
  if (t < 2) throw ArgumentError("pca_fit: need at least two rows");
  if (k < 1 || k > std::min(t, n)) {
    throw ArgumentError("pca_fit: factor count " + std::to_string(k) + " outside [1, min(T,N)]");
  }

  PcaModel model;
  model.means = rows.colwise().mean();
  model.scales = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd centered = rows.rowwise() - model.means.transpose();
  if (standardize) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double var = centered.col(j).squaredNorm() / static_cast<double>(t - 1);
      if (var <= 0.0) {
        throw DomainError("pca_fit: zero-variance column " + std::to_string(j) +
                          " cannot be standardized");
      }
      model.scales(j) = std::sqrt(var);
      centered.col(j) /= model.scales(j);
    }
  }

  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(t - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw SingularityError("pca_fit: eigendecomposition failed");
  }

  // Eigen returns ascending order; flip to descending.
  model.eigenvalues = solver.eigenvalues().reverse();
  model.loadings.resize(n, k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - j);
    // Deterministic sign: first entry of largest magnitude must be positive.
    Eigen::Index argmax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > best) {
        best = std::abs(v(i));
        argmax = i;
      }
    }
    if (v(argmax) < 0.0) v = -v;
    model.loadings.col(j) = v;
  }
  return model;
}

Eigen::MatrixXd pca_project(const Eigen::Ref<const Eigen::MatrixXd>& m, const PcaModel& model) {
  if (m.cols() != model.loadings.rows()) {
    throw ArgumentError("pca_project: column count does not match the fitted loadings");
  }
  Eigen::MatrixXd scaled = m.rowwise() - model.means.transpose();
  scaled.array().rowwise() /= model.scales.transpose().array();
  return scaled * model.loadings;
}

}  // namespace atrisk
