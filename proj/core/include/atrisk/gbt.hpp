#pragma once

#include <Eigen/Core>
#include <vector>

#include "atrisk/aggregate.hpp"

namespace atrisk {

/// Mirrors the reference gradient-boosting defaults.
struct GbtParams {
  int rounds = 100;
  int max_depth = 6;
  double learning_rate = 0.3;
  double leaf_l2 = 1.0;           // L2 penalty on leaf weights
  double min_child_weight = 1.0;  // minimum hessian sum per child
};

struct GbtNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double gain = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;  // leaf value before the learning rate is applied

  bool is_leaf() const { return feature < 0; }
};

struct GbtTree {
  std::vector<GbtNode> nodes;  // node 0 is the root
};

/// Depth-limited gradient-boosted trees with logistic loss. Leaf weights
/// are the Newton step -G/(H + leaf_l2); splits maximize the usual
/// second-order gain over exact sorted feature values.
struct GbtModel {
  double base_score = 0.0;  // log-odds of the training prevalence
  GbtParams params;
  std::vector<GbtTree> trees;
  std::vector<ColumnLabel> labels;
};

GbtModel fit_gbt(const Eigen::MatrixXd& x, const std::vector<int>& y, const GbtParams& params,
                 std::vector<ColumnLabel> labels = {});

/// Raw additive score; n_trees >= 0 truncates to the first n_trees rounds.
Eigen::VectorXd predict_gbt_raw(const GbtModel& model, const Eigen::MatrixXd& x, int n_trees = -1);

/// Probabilities through the logistic link.
Eigen::VectorXd predict_gbt(const GbtModel& model, const Eigen::MatrixXd& x, int n_trees = -1);

}  // namespace atrisk
