#include "atrisk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "atrisk/errors.hpp"
#include "atrisk/fredmd.hpp"

namespace atrisk {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

Month month_from(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + " must be a \"YYYY-MM\" string");
  try {
    return Month::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

InputKind input_from(const std::string& s, const std::string& where) {
  if (s == "X") return InputKind::Continuous;
  if (s == "Z") return InputKind::AtRisk;
  throw ConfigError(where + ": input must be \"X\" or \"Z\"");
}

Aggregation aggregation_from(const std::string& s, const std::string& where) {
  if (s == "disaggregated") return Aggregation::Disaggregated;
  if (s == "average") return Aggregation::SimpleAverage;
  if (s == "pca") return Aggregation::Pca;
  throw ConfigError(where + ": aggregation must be disaggregated|average|pca");
}

ModelKind model_from(const std::string& s, const std::string& where) {
  if (s == "logit_l2") return ModelKind::LogitL2;
  if (s == "gbt") return ModelKind::Gbt;
  throw ConfigError(where + ": model must be logit_l2|gbt");
}

TauScope scope_from(const std::string& s, const std::string& where) {
  if (s == "global") return TauScope::Global;
  if (s == "sector") return TauScope::PerSector;
  if (s == "variable") return TauScope::PerVariable;
  throw ConfigError(where + ": scope must be global|sector|variable");
}

ThresholdPolicy policy_from(const std::string& s, const std::string& where) {
  if (s == "frozen") return ThresholdPolicy::FrozenAtTrainEnd;
  if (s == "expanding") return ThresholdPolicy::ExpandingHistory;
  throw ConfigError(where + ": threshold_policy must be frozen|expanding");
}

AtRiskConfig at_risk_from(const json& j, const std::string& where) {
  require_keys(j, where, {"tau", "h_g", "scope", "threshold_policy"});
  AtRiskConfig cfg;
  if (j.contains("tau")) {
    const auto& tau = j.at("tau");
    if (tau.is_string()) {
      if (tau.get<std::string>() != "auto") {
        throw ConfigError(where + ": tau must be a number or \"auto\"");
      }
      cfg.tau.reset();
    } else if (tau.is_number()) {
      cfg.tau = tau.get<double>();
    } else {
      throw ConfigError(where + ": tau must be a number or \"auto\"");
    }
  } else {
    cfg.tau.reset();  // auto by default
  }
  if (j.contains("h_g")) cfg.smoothing_window = j.at("h_g").get<int>();
  if (j.contains("scope")) cfg.scope = scope_from(j.at("scope").get<std::string>(), where);
  if (j.contains("threshold_policy")) {
    cfg.threshold_policy = policy_from(j.at("threshold_policy").get<std::string>(), where);
  }
  return cfg;
}

PipelineSpec pipeline_from(const json& j, std::size_t index) {
  const std::string where = "pipelines[" + std::to_string(index) + "]";
  require_keys(j, where,
               {"id", "input", "aggregation", "model", "at_risk", "lags", "K", "subset",
                "standardize"});
  PipelineSpec spec;
  if (!j.contains("id")) throw ConfigError(where + ": missing id");
  spec.id = j.at("id").get<std::string>();
  if (j.contains("input")) spec.input = input_from(j.at("input").get<std::string>(), where);
  if (j.contains("aggregation")) {
    spec.aggregation = aggregation_from(j.at("aggregation").get<std::string>(), where);
  }
  if (j.contains("model")) spec.model = model_from(j.at("model").get<std::string>(), where);
  if (j.contains("at_risk")) spec.at_risk = at_risk_from(j.at("at_risk"), where + ".at_risk");
  if (j.contains("lags")) spec.lags.lags = j.at("lags").get<std::vector<int>>();
  if (j.contains("K")) spec.factors = j.at("K").get<int>();
  if (j.contains("subset") && !j.at("subset").is_null()) {
    spec.subset = j.at("subset").get<std::string>();
  }
  if (j.contains("standardize") && !j.at("standardize").is_null()) {
    spec.standardize = j.at("standardize").get<bool>();
  }
  return spec;
}

json pipeline_to_json(const PipelineSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["input"] = spec.input == InputKind::Continuous ? "X" : "Z";
  switch (spec.aggregation) {
    case Aggregation::Disaggregated: j["aggregation"] = "disaggregated"; break;
    case Aggregation::SimpleAverage: j["aggregation"] = "average"; break;
    case Aggregation::Pca: j["aggregation"] = "pca"; break;
  }
  j["model"] = spec.model == ModelKind::LogitL2 ? "logit_l2" : "gbt";
  json ar;
  if (spec.at_risk.tau) ar["tau"] = *spec.at_risk.tau;
  else ar["tau"] = "auto";
  ar["h_g"] = spec.at_risk.smoothing_window;
  switch (spec.at_risk.scope) {
    case TauScope::Global: ar["scope"] = "global"; break;
    case TauScope::PerSector: ar["scope"] = "sector"; break;
    case TauScope::PerVariable: ar["scope"] = "variable"; break;
  }
  ar["threshold_policy"] =
      spec.at_risk.threshold_policy == ThresholdPolicy::FrozenAtTrainEnd ? "frozen" : "expanding";
  j["at_risk"] = std::move(ar);
  j["lags"] = spec.lags.lags;
  j["K"] = spec.factors;
  if (spec.subset) j["subset"] = *spec.subset;
  if (spec.standardize) j["standardize"] = *spec.standardize;
  return j;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  require_keys(j, "config",
               {"data", "sample", "horizons", "pipelines", "tuning", "bootstrap", "evaluation",
                "subsets", "aliases", "output_dir", "threads"});
  RunConfig config;

  if (!j.contains("data")) throw ConfigError("config: missing data section");
  {
    const json& d = j.at("data");
    require_keys(d, "data",
                 {"path", "target_id", "tcode_row", "date_format", "exclusions", "sector_groups",
                  "sign_overrides", "cyclicality_cutoff"});
    if (!d.contains("path")) throw ConfigError("data: missing path");
    config.data_path = d.at("path").get<std::string>();
    if (d.contains("target_id")) config.target_id = d.at("target_id").get<std::string>();
    if (d.contains("tcode_row")) config.schema.tcode_row = d.at("tcode_row").get<int>();
    if (d.contains("date_format")) {
      const auto s = d.at("date_format").get<std::string>();
      if (s == "auto") config.schema.date_format = CsvSchema::DateFormat::Auto;
      else if (s == "mdy") config.schema.date_format = CsvSchema::DateFormat::MonthDayYear;
      else if (s == "ym") config.schema.date_format = CsvSchema::DateFormat::YearMonth;
      else throw ConfigError("data.date_format must be auto|mdy|ym");
    }
    if (d.contains("exclusions")) {
      config.exclusions = d.at("exclusions").get<std::vector<std::string>>();
    }
    if (d.contains("sector_groups")) {
      for (const auto& [id, group] : d.at("sector_groups").items()) {
        config.sector_groups[id] = group.get<int>();
      }
    }
    if (d.contains("sign_overrides")) {
      std::map<std::string, int> overrides;
      for (const auto& [id, sign] : d.at("sign_overrides").items()) {
        overrides[id] = sign.get<int>();
      }
      config.sign_overrides = std::move(overrides);
    }
    if (d.contains("cyclicality_cutoff")) {
      config.cyclicality_cutoff = d.at("cyclicality_cutoff").get<double>();
    }
  }

  if (j.contains("sample")) {
    const json& s = j.at("sample");
    require_keys(s, "sample", {"train_start", "train_end", "eval_start", "eval_end"});
    if (s.contains("train_start")) config.train_start = month_from(s.at("train_start"), "sample.train_start");
    if (s.contains("train_end")) config.train_end = month_from(s.at("train_end"), "sample.train_end");
    if (s.contains("eval_start")) config.eval_start = month_from(s.at("eval_start"), "sample.eval_start");
    if (s.contains("eval_end")) config.eval_end = month_from(s.at("eval_end"), "sample.eval_end");
  }

  if (j.contains("horizons")) config.horizons = j.at("horizons").get<std::vector<int>>();

  if (!j.contains("pipelines")) throw ConfigError("config: missing pipelines");
  if (!j.at("pipelines").is_array()) throw ConfigError("pipelines must be an array");
  for (std::size_t i = 0; i < j.at("pipelines").size(); ++i) {
    config.pipelines.push_back(pipeline_from(j.at("pipelines")[i], i));
  }

  if (j.contains("tuning")) {
    const json& t = j.at("tuning");
    require_keys(t, "tuning", {"cv_splits", "grid_min", "grid_max", "grid_points"});
    if (t.contains("cv_splits")) config.tuning.cv_splits = t.at("cv_splits").get<int>();
    if (t.contains("grid_min")) config.tuning.grid_min = t.at("grid_min").get<double>();
    if (t.contains("grid_max")) config.tuning.grid_max = t.at("grid_max").get<double>();
    if (t.contains("grid_points")) config.tuning.grid_points = t.at("grid_points").get<int>();
  }

  if (j.contains("bootstrap")) {
    const json& b = j.at("bootstrap");
    require_keys(b, "bootstrap", {"replications", "seed"});
    if (b.contains("replications")) config.bootstrap_replications = b.at("replications").get<int>();
    if (b.contains("seed")) config.bootstrap_seed = b.at("seed").get<std::uint64_t>();
  }

  if (j.contains("evaluation")) {
    const json& e = j.at("evaluation");
    require_keys(e, "evaluation", {"benchmark", "encompassing", "refit_log", "recession_peaks"});
    if (e.contains("benchmark") && !e.at("benchmark").is_null()) {
      config.benchmark = e.at("benchmark").get<std::string>();
    }
    if (e.contains("encompassing")) {
      for (const auto& pair : e.at("encompassing")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ConfigError("evaluation.encompassing entries must be [proposed, benchmark] pairs");
        }
        config.encompassing.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
      }
    }
    if (e.contains("refit_log")) config.refit_log = e.at("refit_log").get<bool>();
    if (e.contains("recession_peaks") && !e.at("recession_peaks").is_null()) {
      std::vector<Month> peaks;
      for (const auto& p : e.at("recession_peaks")) {
        peaks.push_back(month_from(p, "evaluation.recession_peaks"));
      }
      config.recession_peak_override = std::move(peaks);
    }
  }

  if (j.contains("subsets")) {
    for (const auto& [name, ids] : j.at("subsets").items()) {
      config.user_subsets[name] = ids.get<std::vector<std::string>>();
    }
  }
  if (j.contains("aliases")) {
    for (const auto& [name, id] : j.at("aliases").items()) {
      config.user_aliases[name] = id.get<std::string>();
    }
  }
  if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("threads")) config.threads = j.at("threads").get<int>();
  return config;
}

json config_to_json(const RunConfig& config) {
  json j;
  json d;
  d["path"] = config.data_path;
  d["target_id"] = config.target_id;
  d["tcode_row"] = config.schema.tcode_row;
  switch (config.schema.date_format) {
    case CsvSchema::DateFormat::Auto: d["date_format"] = "auto"; break;
    case CsvSchema::DateFormat::MonthDayYear: d["date_format"] = "mdy"; break;
    case CsvSchema::DateFormat::YearMonth: d["date_format"] = "ym"; break;
  }
  d["exclusions"] = config.exclusions;
  if (!config.sector_groups.empty()) {
    json groups;
    for (const auto& [id, group] : config.sector_groups) groups[id] = group;
    d["sector_groups"] = std::move(groups);
  }
  if (config.sign_overrides) {
    json overrides;
    for (const auto& [id, sign] : *config.sign_overrides) overrides[id] = sign;
    d["sign_overrides"] = std::move(overrides);
  }
  d["cyclicality_cutoff"] = config.cyclicality_cutoff;
  j["data"] = std::move(d);

  j["sample"] = {{"train_start", config.train_start.str()},
                 {"train_end", config.train_end.str()},
                 {"eval_start", config.eval_start.str()},
                 {"eval_end", config.eval_end.str()}};
  j["horizons"] = config.horizons;
  json pipelines = json::array();
  for (const auto& spec : config.pipelines) pipelines.push_back(pipeline_to_json(spec));
  j["pipelines"] = std::move(pipelines);
  j["tuning"] = {{"cv_splits", config.tuning.cv_splits},
                 {"grid_min", config.tuning.grid_min},
                 {"grid_max", config.tuning.grid_max},
                 {"grid_points", config.tuning.grid_points}};
  j["bootstrap"] = {{"replications", config.bootstrap_replications},
                    {"seed", config.bootstrap_seed}};
  json e;
  if (config.benchmark) e["benchmark"] = *config.benchmark;
  if (!config.encompassing.empty()) {
    json pairs = json::array();
    for (const auto& [a, b] : config.encompassing) pairs.push_back({a, b});
    e["encompassing"] = std::move(pairs);
  }
  e["refit_log"] = config.refit_log;
  if (config.recession_peak_override) {
    json peaks = json::array();
    for (const auto& p : *config.recession_peak_override) peaks.push_back(p.str());
    e["recession_peaks"] = std::move(peaks);
  }
  j["evaluation"] = std::move(e);
  if (!config.user_subsets.empty()) {
    json subsets;
    for (const auto& [name, ids] : config.user_subsets) subsets[name] = ids;
    j["subsets"] = std::move(subsets);
  }
  if (!config.user_aliases.empty()) {
    json aliases;
    for (const auto& [name, id] : config.user_aliases) aliases[name] = id;
    j["aliases"] = std::move(aliases);
  }
  j["output_dir"] = config.output_dir;
  j["threads"] = config.threads;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("invalid config in " + path + ": " + e.what());
  }
}

void validate_config(const RunConfig& config) {
  if (config.data_path.empty()) throw ConfigError("data.path must not be empty");
  if (!(config.train_start < config.train_end)) {
    throw ConfigError("sample: train_start must precede train_end");
  }
  if (!(config.train_end < config.eval_start)) {
    throw ConfigError("sample: train_end must precede the first evaluation target");
  }
  if (config.eval_end < config.eval_start) {
    throw ConfigError("sample: eval_end must not precede eval_start");
  }
  if (config.horizons.empty()) throw ConfigError("horizons must not be empty");
  std::set<int> horizon_set;
  for (int h : config.horizons) {
    if (h < 1 || h > 24) throw ConfigError("horizons must lie in 1..24");
    if (!horizon_set.insert(h).second) {
      throw ConfigError("duplicate horizon " + std::to_string(h));
    }
  }
  if (config.pipelines.empty()) throw ConfigError("pipelines must not be empty");

  std::set<std::string> ids;
  const auto subsets = list_subsets(config, nullptr);
  for (const auto& spec : config.pipelines) {
    if (spec.id.empty()) throw ConfigError("pipeline id must not be empty");
    if (!ids.insert(spec.id).second) throw ConfigError("duplicate pipeline id: " + spec.id);
    try {
      spec.at_risk.validate();
      LagSpec lags = spec.lags;
      lags.validate(1 + *std::max_element(lags.lags.begin(), lags.lags.end()));
    } catch (const ArgumentError& e) {
      throw ConfigError("pipeline " + spec.id + ": " + e.what());
    }
    if (spec.factors < 1) throw ConfigError("pipeline " + spec.id + ": factors must be >= 1");
    if (spec.subset && !subsets.count(*spec.subset)) {
      throw ConfigError("pipeline " + spec.id + " references unknown subset '" + *spec.subset + "'");
    }
  }
  if (config.benchmark && !ids.count(*config.benchmark)) {
    throw ConfigError("evaluation.benchmark names unknown pipeline '" + *config.benchmark + "'");
  }
  for (const auto& [a, b] : config.encompassing) {
    if (!ids.count(a) || !ids.count(b)) {
      throw ConfigError("evaluation.encompassing names unknown pipeline '" + a + "' or '" + b + "'");
    }
    if (a == b) throw ConfigError("evaluation.encompassing: a model cannot encompass itself");
  }
  for (const auto& [id, group] : config.sector_groups) {
    if (group < 1 || group > kSectorCount) {
      throw ConfigError("data.sector_groups[" + id + "] must lie in 1..8");
    }
  }
  if (config.sign_overrides) {
    for (const auto& [id, sign] : *config.sign_overrides) {
      if (sign != 1 && sign != -1) {
        throw ConfigError("data.sign_overrides[" + id + "] must be +1 or -1");
      }
    }
  }
  if (config.tuning.cv_splits < 1) throw ConfigError("tuning.cv_splits must be >= 1");
  if (!(config.tuning.grid_min > 0.0) || !(config.tuning.grid_max > config.tuning.grid_min)) {
    throw ConfigError("tuning grid must satisfy 0 < grid_min < grid_max");
  }
  if (config.tuning.grid_points < 1) throw ConfigError("tuning.grid_points must be >= 1");
  if (config.bootstrap_replications < 1) {
    throw ConfigError("bootstrap.replications must be >= 1");
  }
  if (config.threads < 0) throw ConfigError("threads must be >= 0");
}

std::map<std::string, std::vector<std::string>> list_subsets(const RunConfig& config,
                                                             Diagnostics* diag) {
  std::map<std::string, std::vector<std::string>> subsets = fredmd::builtin_subsets();
  for (const auto& [name, ids] : config.user_subsets) subsets[name] = ids;

  for (auto& [name, ids] : subsets) {
    std::vector<std::string> resolved;
    std::set<std::string> seen;
    for (const auto& raw : ids) {
      const std::string id = resolve_series_id(raw, config);
      if (!seen.insert(id).second) {
        if (diag) diag->warn("subset " + name + ": duplicate id " + id + " removed");
        continue;
      }
      resolved.push_back(id);
    }
    ids = std::move(resolved);
  }
  return subsets;
}

std::string resolve_series_id(const std::string& name, const RunConfig& config) {
  auto user = config.user_aliases.find(name);
  if (user != config.user_aliases.end()) return user->second;
  const auto& builtin = fredmd::default_aliases();
  auto it = builtin.find(name);
  if (it != builtin.end()) return it->second;
  return name;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace atrisk
