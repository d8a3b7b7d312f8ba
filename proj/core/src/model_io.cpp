#include "atrisk/model_io.hpp"

#include <cmath>
#include <fstream>

#include "atrisk/errors.hpp"

namespace atrisk {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json labels_to_json(const std::vector<ColumnLabel>& labels) {
  json out = json::array();
  for (const auto& l : labels) out.push_back({{"base", l.base}, {"lag", l.lag}});
  return out;
}

std::vector<ColumnLabel> labels_from_json(const json& j) {
  std::vector<ColumnLabel> labels;
  labels.reserve(j.size());
  for (const auto& e : j) labels.push_back({e.at("base").get<std::string>(), e.at("lag").get<int>()});
  return labels;
}

}  // namespace

json to_json(const LogisticModel& model) {
  return json{
      {"type", "logistic_l2"},
      {"intercept", model.intercept},
      {"coef", vector_to_json(model.coef)},
      {"c", std::isinf(model.c) ? json("inf") : json(model.c)},
      {"standardized", model.standardized},
      {"feature_means", vector_to_json(model.feature_means)},
      {"feature_sds", vector_to_json(model.feature_sds)},
      {"labels", labels_to_json(model.labels)},
  };
}

LogisticModel logistic_from_json(const json& j) {
  if (j.at("type").get<std::string>() != "logistic_l2") {
    throw ParseError("model file is not a logistic_l2 model");
  }
  LogisticModel model;
  model.intercept = j.at("intercept").get<double>();
  model.coef = vector_from_json(j.at("coef"));
  model.c = j.at("c").is_string() ? std::numeric_limits<double>::infinity() : j.at("c").get<double>();
  model.standardized = j.at("standardized").get<bool>();
  model.feature_means = vector_from_json(j.at("feature_means"));
  model.feature_sds = vector_from_json(j.at("feature_sds"));
  model.labels = labels_from_json(j.at("labels"));
  return model;
}

json to_json(const GbtModel& model) {
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"gain", n.gain},
                       {"left", n.left},
                       {"right", n.right},
                       {"weight", n.weight}});
    }
    trees.push_back(std::move(nodes));
  }
  return json{
      {"type", "gbt_logistic"},
      {"base_score", model.base_score},
      {"rounds", model.params.rounds},
      {"max_depth", model.params.max_depth},
      {"learning_rate", model.params.learning_rate},
      {"leaf_l2", model.params.leaf_l2},
      {"min_child_weight", model.params.min_child_weight},
      {"trees", std::move(trees)},
      {"labels", labels_to_json(model.labels)},
  };
}

GbtModel gbt_from_json(const json& j) {
  if (j.at("type").get<std::string>() != "gbt_logistic") {
    throw ParseError("model file is not a gbt_logistic model");
  }
  GbtModel model;
  model.base_score = j.at("base_score").get<double>();
  model.params.rounds = j.at("rounds").get<int>();
  model.params.max_depth = j.at("max_depth").get<int>();
  model.params.learning_rate = j.at("learning_rate").get<double>();
  model.params.leaf_l2 = j.at("leaf_l2").get<double>();
  model.params.min_child_weight = j.at("min_child_weight").get<double>();
  for (const auto& tj : j.at("trees")) {
    GbtTree tree;
    for (const auto& nj : tj) {
      GbtNode n;
      n.feature = nj.at("feature").get<int>();
      n.threshold = nj.at("threshold").get<double>();
      n.gain = nj.at("gain").get<double>();
      n.left = nj.at("left").get<int>();
      n.right = nj.at("right").get<int>();
      n.weight = nj.at("weight").get<double>();
      tree.nodes.push_back(n);
    }
    model.trees.push_back(std::move(tree));
  }
  model.labels = labels_from_json(j.at("labels"));
  return model;
}

json to_json(const ProbitModel& model) {
  json cov = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(model.covariance(r, c));
    cov.push_back(std::move(row));
  }
  return json{
      {"type", "probit_encompassing"},
      {"coef", {model.coef(0), model.coef(1), model.coef(2)}},
      {"covariance", std::move(cov)},
      {"std_errors", {model.std_errors(0), model.std_errors(1), model.std_errors(2)}},
      {"p_values", {model.p_values(0), model.p_values(1), model.p_values(2)}},
  };
}

ProbitModel probit_from_json(const json& j) {
  if (j.at("type").get<std::string>() != "probit_encompassing") {
    throw ParseError("model file is not a probit_encompassing model");
  }
  ProbitModel model;
  for (int i = 0; i < 3; ++i) {
    model.coef(i) = j.at("coef")[static_cast<std::size_t>(i)].get<double>();
    model.std_errors(i) = j.at("std_errors")[static_cast<std::size_t>(i)].get<double>();
    model.p_values(i) = j.at("p_values")[static_cast<std::size_t>(i)].get<double>();
    for (int c = 0; c < 3; ++c) {
      model.covariance(i, c) =
          j.at("covariance")[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return model;
}

void save_model(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  out << j.dump(2) << '\n';
}

json load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid model file " + path + ": " + e.what());
  }
}

}  // namespace atrisk
