#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atrisk/types.hpp"

namespace atrisk {

/// Column layout of the input CSV. Defaults match the FRED-MD convention:
/// row 1 = header with series ids, row 2 = integer transform codes,
/// remaining rows = date plus values, empty cell = missing.
struct CsvSchema {
  enum class DateFormat { Auto, MonthDayYear, YearMonth };
  int tcode_row = 1;  // 1-based position among data rows
  DateFormat date_format = DateFormat::Auto;
};

/// Panel exactly as read from disk: untransformed values, one column per
/// series, missing cells stored as NaN.
struct RawPanel {
  std::vector<Month> dates;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> series;  // ids.size() columns, dates.size() rows
  std::vector<int> tcodes;                  // one per column, each in {1..7}

  std::optional<std::size_t> find(const std::string& id) const;
};

/// Aligned, stationarized panel with the recession target attached.
struct PanelMatrix {
  std::vector<Month> dates;
  Eigen::MatrixXd values;        // T x N, no missing entries
  std::vector<SeriesMeta> meta;  // N entries
  std::vector<int> target;       // y_t in {0,1}, length T

  int row_of(Month m) const;  // -1 when m is outside the window
  std::optional<std::size_t> column_of(const std::string& id) const;
};

RawPanel parse_csv(const std::string& path, const CsvSchema& schema = {});
RawPanel parse_csv(std::istream& in, const CsvSchema& schema, const std::string& origin);

/// Writes the raw panel back in the same layout. Finite values round-trip
/// bit-for-bit through parse_csv.
void write_csv(const RawPanel& panel, std::ostream& out);

/// Writes the aligned panel (dates, target, series) for inspection.
void write_csv(const PanelMatrix& panel, std::ostream& out);

/// FRED-MD stationarizing transforms:
///   1: x      2: dx       3: d2x     4: log x
///   5: dlog x 6: d2log x  7: d(x_t / x_{t-1} - 1)
/// Leading positions consumed by differencing become NaN. Codes 4-6 throw
/// DomainError on non-positive values; code 7 on a zero denominator.
std::vector<double> apply_tcode(const std::vector<double>& x, int code);
std::vector<double> apply_tcode(const std::vector<double>& x, int code,
                                const std::string& series_id, const std::vector<Month>* dates);

inline const std::vector<std::string>& default_exclusions() {
  static const std::vector<std::string> ids = {"ACOGNO", "TWEXAFEGSMTHx", "UMCSENTx", "OILPRICEx"};
  return ids;
}

/// Drops excluded series, applies transform codes, trims to the largest
/// contiguous window with no missing values in any retained series, and
/// attaches the 0/1 target column named by target_id (its values are used
/// as-is, ignoring any transform code). Sector assignment comes from
/// sector_map; unknown ids fall back to OutputIncome with a warning.
PanelMatrix exclude_and_align(const RawPanel& raw,
                              const std::vector<std::string>& exclusions,
                              const std::string& target_id,
                              const std::map<std::string, Sector>& sector_map,
                              Diagnostics* diag = nullptr);

/// Sets meta[i].sign to -1 when corr(x_i, y) < cutoff over rows up to
/// train_end, +1 otherwise. Entries of sign_overrides win over the data
/// rule. Zero-variance series default to +1 with a warning.
void classify_cyclicality(PanelMatrix& panel, Month train_end, double cutoff,
                          const std::map<std::string, int>& sign_overrides,
                          Diagnostics* diag = nullptr);

/// The ten series the training data classifies as counter-cyclical; shipped
/// as the default sign override list.
const std::map<std::string, int>& default_sign_overrides();

/// Pairs each origin index t (0-based) with the label y_{t+h}; the final h
/// origins have no label and are omitted. h <= 0 throws ArgumentError.
std::vector<std::pair<int, int>> shift_target(const std::vector<int>& y, int h);

/// Restriction of the panel to the given series ids (order preserved from
/// the id list). Unknown ids throw ConfigError listing the known ones.
PanelMatrix restrict_columns(const PanelMatrix& panel, const std::vector<std::string>& ids);

}  // namespace atrisk
