#pragma once

#include <string>
#include <vector>

#include "atrisk/gbt.hpp"
#include "atrisk/logistic.hpp"

namespace atrisk {

struct ImportanceEntry {
  std::string base;
  double score = 0.0;
};

/// Per-base-variable importance, grouping a variable's lag columns under one
/// key. Logistic: mean absolute coefficient (on the model's internal scale).
/// GBT: mean split gain across every split that uses the variable; bases
/// never split score zero. Sorted by descending score, ties by name.
std::vector<ImportanceEntry> importance(const LogisticModel& model);
std::vector<ImportanceEntry> importance(const GbtModel& model);

}  // namespace atrisk
