#include "atrisk/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "atrisk/errors.hpp"
#include "atrisk/stats.hpp"

namespace atrisk {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i < line.size() && line[i] == '"') quoted = !quoted;
    if (i == line.size() || (line[i] == ',' && !quoted)) {
      cells.push_back(trim(std::string_view(line).substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size();
}

void format_double(double v, std::ostream& out) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

bool blank_row(const std::vector<std::string>& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const std::string& c) { return c.empty(); });
}

}  // namespace

std::optional<std::size_t> RawPanel::find(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  return std::nullopt;
}

int PanelMatrix::row_of(Month m) const {
  if (dates.empty() || m < dates.front() || m > dates.back()) return -1;
  return m - dates.front();
}

std::optional<std::size_t> PanelMatrix::column_of(const std::string& id) const {
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (meta[i].id == id) return i;
  }
  return std::nullopt;
}

RawPanel parse_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_csv(in, schema, path);
}

RawPanel parse_csv(std::istream& in, const CsvSchema& schema, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(origin + ": empty file");
  auto header = split_line(line);
  if (header.size() < 2) throw SchemaError(origin + ": header must name a date column and at least one series");

  RawPanel panel;
  panel.ids.assign(header.begin() + 1, header.end());
  const std::size_t n = panel.ids.size();
  panel.series.assign(n, {});
  panel.tcodes.assign(n, 0);

  if (schema.tcode_row < 1) throw SchemaError(origin + ": tcode_row must be >= 1");

  int data_row = 0;   // 1-based, counts non-blank rows after the header
  int file_row = 1;   // 1-based physical line number
  bool have_tcodes = false;
  while (std::getline(in, line)) {
    ++file_row;
    auto cells = split_line(line);
    if (blank_row(cells)) continue;
    ++data_row;
    if (cells.size() != n + 1) {
      throw ParseError(origin + ": row " + std::to_string(file_row) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(n + 1));
    }
    if (data_row == schema.tcode_row) {
      for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        if (!parse_double(cells[i + 1], v) || v != std::floor(v) || v < 1 || v > 7) {
          throw SchemaError(origin + ": invalid transform code '" + cells[i + 1] +
                            "' for series " + panel.ids[i]);
        }
        panel.tcodes[i] = static_cast<int>(v);
      }
      have_tcodes = true;
      continue;
    }
    Month date{};
    try {
      date = Month::parse(cells[0]);
    } catch (const ParseError&) {
      throw ParseError(origin + ": row " + std::to_string(file_row) + ": malformed date '" + cells[0] + "'");
    }
    if (schema.date_format == CsvSchema::DateFormat::MonthDayYear &&
        cells[0].find('/') == std::string::npos) {
      throw ParseError(origin + ": row " + std::to_string(file_row) + ": expected M/D/YYYY date");
    }
    if (schema.date_format == CsvSchema::DateFormat::YearMonth &&
        cells[0].find('-') == std::string::npos) {
      throw ParseError(origin + ": row " + std::to_string(file_row) + ": expected YYYY-MM date");
    }
    if (!panel.dates.empty() && date.index != panel.dates.back().index + 1) {
      throw ParseError(origin + ": row " + std::to_string(file_row) + ": date " + date.str() +
                       " does not follow " + panel.dates.back().str() + " by one month");
    }
    panel.dates.push_back(date);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& cell = cells[i + 1];
      if (cell.empty()) {
        panel.series[i].push_back(missing_value());
        continue;
      }
      double v = 0.0;
      if (!parse_double(cell, v)) {
        throw ParseError(origin + ": row " + std::to_string(file_row) + ", series " + panel.ids[i] +
                         ": non-numeric cell '" + cell + "'");
      }
      panel.series[i].push_back(v);
    }
  }
  if (!have_tcodes) throw SchemaError(origin + ": missing transform-code row");
  if (panel.dates.empty()) throw SchemaError(origin + ": no data rows");
  return panel;
}

void write_csv(const RawPanel& panel, std::ostream& out) {
  out << "date";
  for (const auto& id : panel.ids) out << ',' << id;
  out << '\n';
  out << "transform";
  for (int code : panel.tcodes) out << ',' << code;
  out << '\n';
  for (std::size_t t = 0; t < panel.dates.size(); ++t) {
    out << panel.dates[t].str();
    for (std::size_t i = 0; i < panel.ids.size(); ++i) {
      out << ',';
      const double v = panel.series[i][t];
      if (!is_missing(v)) format_double(v, out);
    }
    out << '\n';
  }
}

void write_csv(const PanelMatrix& panel, std::ostream& out) {
  out << "date,target";
  for (const auto& m : panel.meta) out << ',' << m.id;
  out << '\n';
  for (std::size_t t = 0; t < panel.dates.size(); ++t) {
    out << panel.dates[t].str() << ',' << panel.target[t];
    for (Eigen::Index i = 0; i < panel.values.cols(); ++i) {
      out << ',';
      format_double(panel.values(static_cast<Eigen::Index>(t), i), out);
    }
    out << '\n';
  }
}

std::vector<double> apply_tcode(const std::vector<double>& x, int code) {
  return apply_tcode(x, code, "", nullptr);
}

std::vector<double> apply_tcode(const std::vector<double>& x, int code,
                                const std::string& series_id, const std::vector<Month>* dates) {
  if (code < 1 || code > 7) {
    throw SchemaError("transform code must lie in {1..7}, got " + std::to_string(code) +
                      (series_id.empty() ? "" : " for series " + series_id));
  }
  auto where = [&](std::size_t t) {
    std::string loc = series_id.empty() ? "series" : "series " + series_id;
    loc += dates && t < dates->size() ? " at " + (*dates)[t].str() : " at row " + std::to_string(t);
    return loc;
  };
  auto check_positive = [&](std::size_t t) {
    const double v = x[t];
    if (!is_missing(v) && v <= 0.0) {
      throw DomainError("non-positive value under log transform: " + where(t));
    }
  };

  const std::size_t n = x.size();
  std::vector<double> out(n, missing_value());
  switch (code) {
    case 1:
      out = x;
      break;
    case 2:
      for (std::size_t t = 1; t < n; ++t) out[t] = x[t] - x[t - 1];
      break;
    case 3:
      for (std::size_t t = 2; t < n; ++t) out[t] = (x[t] - x[t - 1]) - (x[t - 1] - x[t - 2]);
      break;
    case 4:
      for (std::size_t t = 0; t < n; ++t) {
        check_positive(t);
        out[t] = std::log(x[t]);
      }
      break;
    case 5:
      for (std::size_t t = 0; t < n; ++t) check_positive(t);
      for (std::size_t t = 1; t < n; ++t) out[t] = std::log(x[t]) - std::log(x[t - 1]);
      break;
    case 6:
      for (std::size_t t = 0; t < n; ++t) check_positive(t);
      for (std::size_t t = 2; t < n; ++t) {
        out[t] = (std::log(x[t]) - std::log(x[t - 1])) - (std::log(x[t - 1]) - std::log(x[t - 2]));
      }
      break;
    case 7:
      for (std::size_t t = 2; t < n; ++t) {
        if (is_missing(x[t]) || is_missing(x[t - 1]) || is_missing(x[t - 2])) continue;
        if (x[t - 1] == 0.0 || x[t - 2] == 0.0) {
          throw DomainError("zero denominator under ratio transform: " + where(t));
        }
        out[t] = x[t] / x[t - 1] - x[t - 1] / x[t - 2];
      }
      break;
  }
  return out;
}

PanelMatrix exclude_and_align(const RawPanel& raw,
                              const std::vector<std::string>& exclusions,
                              const std::string& target_id,
                              const std::map<std::string, Sector>& sector_map,
                              Diagnostics* diag) {
  const auto target_col = raw.find(target_id);
  if (!target_col) {
    throw SchemaError("target series '" + target_id + "' not found in input");
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < raw.ids.size(); ++i) {
    if (i == *target_col) continue;
    if (std::find(exclusions.begin(), exclusions.end(), raw.ids[i]) != exclusions.end()) continue;
    keep.push_back(i);
  }
  for (const auto& id : exclusions) {
    if (!raw.find(id) && diag) diag->warn("exclusion list id not present, ignored: " + id);
  }
  if (keep.empty()) throw AlignmentError("no series left after exclusions");

  // Transform every retained series and locate its contiguous valid range.
  // A missing value strictly inside the range is a data irregularity we
  // refuse to impute.
  std::vector<std::vector<double>> transformed(keep.size());
  int window_begin = 0;
  int window_end = static_cast<int>(raw.dates.size());  // exclusive
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t i = keep[k];
    transformed[k] = apply_tcode(raw.series[i], raw.tcodes[i], raw.ids[i], &raw.dates);
    const auto& v = transformed[k];
    int first = 0;
    while (first < static_cast<int>(v.size()) && is_missing(v[static_cast<std::size_t>(first)])) ++first;
    int last = static_cast<int>(v.size()) - 1;
    while (last >= 0 && is_missing(v[static_cast<std::size_t>(last)])) --last;
    if (first > last) throw AlignmentError("series " + raw.ids[i] + " has no valid observations");
    for (int t = first; t <= last; ++t) {
      if (is_missing(v[static_cast<std::size_t>(t)])) {
        throw AlignmentError("series " + raw.ids[i] + " has an interior missing value at " +
                             raw.dates[static_cast<std::size_t>(t)].str());
      }
    }
    window_begin = std::max(window_begin, first);
    window_end = std::min(window_end, last + 1);
  }

  // The target participates in the window intersection too.
  {
    const auto& y = raw.series[*target_col];
    int first = 0;
    while (first < static_cast<int>(y.size()) && is_missing(y[static_cast<std::size_t>(first)])) ++first;
    int last = static_cast<int>(y.size()) - 1;
    while (last >= 0 && is_missing(y[static_cast<std::size_t>(last)])) --last;
    if (first > last) throw AlignmentError("target series " + target_id + " has no valid observations");
    for (int t = first; t <= last; ++t) {
      if (is_missing(y[static_cast<std::size_t>(t)])) {
        throw AlignmentError("target series " + target_id + " has an interior missing value at " +
                             raw.dates[static_cast<std::size_t>(t)].str());
      }
    }
    window_begin = std::max(window_begin, first);
    window_end = std::min(window_end, last + 1);
  }

  if (window_begin >= window_end) {
    throw AlignmentError("no common non-missing window across the retained series");
  }

  PanelMatrix panel;
  const int rows = window_end - window_begin;
  panel.dates.assign(raw.dates.begin() + window_begin, raw.dates.begin() + window_end);
  panel.values.resize(rows, static_cast<Eigen::Index>(keep.size()));
  panel.meta.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::string& id = raw.ids[keep[k]];
    SeriesMeta& meta = panel.meta[k];
    meta.id = id;
    auto it = sector_map.find(id);
    if (it != sector_map.end()) {
      meta.sector = it->second;
    } else {
      meta.sector = Sector::OutputIncome;
      if (diag) diag->warn("no sector mapping for series " + id + "; defaulting to Output & Income");
    }
    for (int t = 0; t < rows; ++t) {
      panel.values(t, static_cast<Eigen::Index>(k)) =
          transformed[k][static_cast<std::size_t>(window_begin + t)];
    }
  }

  panel.target.resize(static_cast<std::size_t>(rows));
  const auto& y = raw.series[*target_col];
  for (int t = 0; t < rows; ++t) {
    const double v = y[static_cast<std::size_t>(window_begin + t)];
    if (v != 0.0 && v != 1.0) {
      throw SchemaError("target series " + target_id + " must be 0/1; found " + std::to_string(v) +
                        " at " + panel.dates[static_cast<std::size_t>(t)].str());
    }
    panel.target[static_cast<std::size_t>(t)] = static_cast<int>(v);
  }
  return panel;
}

const std::map<std::string, int>& default_sign_overrides() {
  static const std::map<std::string, int> overrides = {
      {"UNRATE", -1},    {"UEMPMEAN", -1}, {"UEMPLT5", -1},  {"UEMP5TO14", -1},
      {"UEMP15OV", -1},  {"UEMP15T26", -1}, {"UEMP27OV", -1}, {"CLAIMSx", -1},
      {"ISRATIOx", -1},  {"VIXCLSx", -1},
  };
  return overrides;
}

void classify_cyclicality(PanelMatrix& panel, Month train_end, double cutoff,
                          const std::map<std::string, int>& sign_overrides,
                          Diagnostics* diag) {
  const int end_row = panel.row_of(train_end);
  if (end_row < 0) throw ArgumentError("train_end " + train_end.str() + " outside the panel window");
  const std::size_t n_rows = static_cast<std::size_t>(end_row) + 1;

  std::vector<double> y(n_rows);
  for (std::size_t t = 0; t < n_rows; ++t) y[t] = static_cast<double>(panel.target[t]);

  std::vector<double> x(n_rows);
  for (std::size_t i = 0; i < panel.meta.size(); ++i) {
    SeriesMeta& meta = panel.meta[i];
    auto it = sign_overrides.find(meta.id);
    if (it != sign_overrides.end()) {
      if (it->second != 1 && it->second != -1) {
        throw ArgumentError("sign override for " + meta.id + " must be +1 or -1");
      }
      meta.sign = it->second;
      continue;
    }
    for (std::size_t t = 0; t < n_rows; ++t) {
      x[t] = panel.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
    }
    const double corr = pearson_correlation(x, y);
    if (std::isnan(corr)) {
      meta.sign = +1;
      if (diag) diag->warn("correlation undefined for series " + meta.id + "; defaulting to pro-cyclical");
      continue;
    }
    meta.sign = corr < cutoff ? -1 : +1;
  }
}

std::vector<std::pair<int, int>> shift_target(const std::vector<int>& y, int h) {
  if (h <= 0) throw ArgumentError("horizon must be positive, got " + std::to_string(h));
  std::vector<std::pair<int, int>> pairs;
  const int t_max = static_cast<int>(y.size()) - h;
  for (int t = 0; t < t_max; ++t) {
    pairs.emplace_back(t, y[static_cast<std::size_t>(t + h)]);
  }
  return pairs;
}

PanelMatrix restrict_columns(const PanelMatrix& panel, const std::vector<std::string>& ids) {
  std::vector<std::size_t> cols;
  cols.reserve(ids.size());
  for (const auto& id : ids) {
    auto c = panel.column_of(id);
    if (!c) {
      std::string known;
      for (const auto& m : panel.meta) {
        if (!known.empty()) known += ", ";
        known += m.id;
      }
      throw ConfigError("unknown series id '" + id + "'; available: " + known);
    }
    cols.push_back(*c);
  }
  PanelMatrix out;
  out.dates = panel.dates;
  out.target = panel.target;
  out.values.resize(panel.values.rows(), static_cast<Eigen::Index>(cols.size()));
  out.meta.reserve(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.values.col(static_cast<Eigen::Index>(k)) = panel.values.col(static_cast<Eigen::Index>(cols[k]));
    out.meta.push_back(panel.meta[cols[k]]);
  }
  return out;
}

}  // namespace atrisk
