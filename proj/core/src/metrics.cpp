#include "atrisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "atrisk/errors.hpp"
#include "atrisk/types.hpp"

namespace atrisk {

namespace {

void check_lengths(std::span<const double> p, std::span<const int> y) {
  if (p.size() != y.size()) throw ArgumentError("metric: probability/label length mismatch");
  if (p.empty()) throw ArgumentError("metric: empty input");
}

}  // namespace

double pr_auc(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  const double positives = static_cast<double>(std::accumulate(y.begin(), y.end(), 0));
  if (positives == 0.0) throw DomainError("pr_auc: undefined without positive labels");

  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });

  double area = 0.0;
  double tp = 0.0, fp = 0.0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    const double threshold = p[idx[i]];
    // Consume the whole tie block before evaluating the operating point.
    while (i < idx.size() && p[idx[i]] == threshold) {
      if (y[idx[i]] == 1) tp += 1.0;
      else fp += 1.0;
      ++i;
    }
    const double recall = tp / positives;
    const double precision = tp / (tp + fp);
    area += precision * (recall - prev_recall);
    prev_recall = recall;
  }
  return area;
}

double roc_auc(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  double n_pos = 0.0, n_neg = 0.0;
  for (int v : y) (v == 1 ? n_pos : n_neg) += 1.0;
  if (n_pos == 0.0 || n_neg == 0.0) throw DomainError("roc_auc: requires both classes");

  // Midrank formulation of the Mann-Whitney statistic; exact under ties.
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && p[idx[j]] == p[idx[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (y[idx[k]] == 1) rank_sum_pos += midrank;
    }
    i = j;
  }
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double brier(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  double sum = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double d = p[t] - static_cast<double>(y[t]);
    sum += d * d;
  }
  return sum / static_cast<double>(p.size());
}

MseDecomposition decompose_mse(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  double sum1 = 0.0, sum0 = 0.0;
  double n1 = 0.0, n0 = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double d = p[t] - static_cast<double>(y[t]);
    if (y[t] == 1) {
      sum1 += d * d;
      n1 += 1.0;
    } else {
      sum0 += d * d;
      n0 += 1.0;
    }
  }
  MseDecomposition out;
  out.recession = n1 > 0.0 ? sum1 / n1 : missing_value();
  out.expansion = n0 > 0.0 ? sum0 / n0 : missing_value();
  out.full = (sum1 + sum0) / static_cast<double>(p.size());
  return out;
}

}  // namespace atrisk
