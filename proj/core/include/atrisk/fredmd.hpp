#pragma once

#include <map>
#include <string>
#include <vector>

#include "atrisk/types.hpp"

namespace atrisk::fredmd {

/// Built-in mnemonic -> variable-group mapping for the standard FRED-MD
/// vintages. Config-level overrides are merged on top of this.
const std::map<std::string, Sector>& default_sector_map();

/// Display-name aliases ("10 yr-FF spread" -> T10YFFM) accepted wherever a
/// series id is expected. User aliases are merged on top.
const std::map<std::string, std::string>& default_aliases();

/// Built-in variable subsets:
///   univariate_spread - the 10-year Treasury minus Fed Funds spread
///   parsimonious10    - ten core indicators from the forecasting literature
///   spreads8          - five term spreads, two credit spreads, CP-FF
///   real8             - labor, output, housing and retail activity series
const std::map<std::string, std::vector<std::string>>& builtin_subsets();

}  // namespace atrisk::fredmd
