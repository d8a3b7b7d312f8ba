#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "atrisk/month.hpp"

namespace atrisk {

/// The eight FRED-MD variable groups.
enum class Sector {
  OutputIncome,
  LaborMarket,
  Housing,
  ConsumptionOrders,
  MoneyCredit,
  InterestRatesSpreads,
  Prices,
  StockMarket,
};

inline constexpr int kSectorCount = 8;

const char* sector_name(Sector s);
Sector sector_from_group(int group_1_to_8);

/// Per-series metadata carried through the pipeline.
struct SeriesMeta {
  std::string id;
  Sector sector = Sector::OutputIncome;
  int sign = +1;  // +1 pro-cyclical, -1 counter-cyclical
  bool excluded = false;
};

/// Missing observations are represented as quiet NaN.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/// Collects non-fatal warnings raised while processing (unknown exclusion
/// ids, zero-variance series, skipped CV folds, ...).
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace atrisk
