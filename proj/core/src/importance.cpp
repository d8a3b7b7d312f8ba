#include "atrisk/importance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "atrisk/errors.hpp"

namespace atrisk {

namespace {

std::vector<ImportanceEntry> sorted_entries(const std::map<std::string, double>& scores) {
  std::vector<ImportanceEntry> out;
  out.reserve(scores.size());
  for (const auto& [base, score] : scores) out.push_back({base, score});
  std::sort(out.begin(), out.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
    return a.score > b.score || (a.score == b.score && a.base < b.base);
  });
  return out;
}

}  // namespace

std::vector<ImportanceEntry> importance(const LogisticModel& model) {
  if (model.labels.empty()) throw StateError("importance: model has no column labels");
  std::map<std::string, double> sum;
  std::map<std::string, int> count;
  for (std::size_t j = 0; j < model.labels.size(); ++j) {
    sum[model.labels[j].base] += std::abs(model.coef(static_cast<Eigen::Index>(j)));
    count[model.labels[j].base] += 1;
  }
  std::map<std::string, double> mean;
  for (const auto& [base, total] : sum) mean[base] = total / count[base];
  return sorted_entries(mean);
}

std::vector<ImportanceEntry> importance(const GbtModel& model) {
  if (model.labels.empty()) throw StateError("importance: model has no column labels");
  std::map<std::string, double> gain;
  std::map<std::string, int> splits;
  for (const auto& label : model.labels) gain[label.base] = 0.0;
  for (const auto& tree : model.trees) {
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      const auto& base = model.labels[static_cast<std::size_t>(node.feature)].base;
      gain[base] += node.gain;
      splits[base] += 1;
    }
  }
  std::map<std::string, double> mean;
  for (const auto& [base, total] : gain) {
    const auto it = splits.find(base);
    mean[base] = it == splits.end() ? 0.0 : total / it->second;
  }
  return sorted_entries(mean);
}

}  // namespace atrisk
