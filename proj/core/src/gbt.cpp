#include "atrisk/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atrisk/errors.hpp"
#include "atrisk/logistic.hpp"

namespace atrisk {

namespace {

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool valid() const { return feature >= 0; }
};

struct NodeState {
  double g_sum = 0.0;
  double h_sum = 0.0;
  int depth = 0;
  int node_id = -1;
};

double leaf_objective(double g, double h, double l2) { return g * g / (h + l2); }

void check_inputs(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw ArgumentError("fit_gbt: row/label count mismatch");
  }
  if (x.rows() == 0) throw ArgumentError("fit_gbt: empty design");
  if (!x.allFinite()) throw ArgumentError("fit_gbt: non-finite design values");
  bool has0 = false, has1 = false;
  for (int v : y) {
    if (v == 0) has0 = true;
    else if (v == 1) has1 = true;
    else throw ArgumentError("fit_gbt: labels must be 0/1");
  }
  if (!has0 || !has1) throw ArgumentError("fit_gbt: labels are single-class; widen the window");
}

}  // namespace

GbtModel fit_gbt(const Eigen::MatrixXd& x, const std::vector<int>& y, const GbtParams& params,
                 std::vector<ColumnLabel> labels) {
  check_inputs(x, y);
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != x.cols()) {
    throw ArgumentError("fit_gbt: label count does not match the design");
  }
  if (params.rounds < 0 || params.max_depth < 1) {
    throw ArgumentError("fit_gbt: invalid rounds/depth");
  }

  const int rows = static_cast<int>(x.rows());
  const int cols = static_cast<int>(x.cols());

  GbtModel model;
  model.params = params;
  model.labels = std::move(labels);
  const double prevalence =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(rows);
  model.base_score = std::log(prevalence / (1.0 - prevalence));

  // Rows presorted once per feature into contiguous (value, row) pairs;
  // ties broken by row index so the build is deterministic.
  struct Entry {
    double value;
    int row;
  };
  std::vector<std::vector<Entry>> order(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    auto& ord = order[static_cast<std::size_t>(j)];
    ord.resize(static_cast<std::size_t>(rows));
    for (int t = 0; t < rows; ++t) ord[static_cast<std::size_t>(t)] = {x(t, j), t};
    std::sort(ord.begin(), ord.end(), [](const Entry& a, const Entry& b) {
      return a.value < b.value || (a.value == b.value && a.row < b.row);
    });
  }

  std::vector<double> raw(static_cast<std::size_t>(rows), model.base_score);
  std::vector<double> grad(static_cast<std::size_t>(rows));
  std::vector<double> hess(static_cast<std::size_t>(rows));
  std::vector<int> node_of(static_cast<std::size_t>(rows));

  for (int round = 0; round < params.rounds; ++round) {
    for (int t = 0; t < rows; ++t) {
      const double p = sigmoid(raw[static_cast<std::size_t>(t)]);
      grad[static_cast<std::size_t>(t)] = p - static_cast<double>(y[static_cast<std::size_t>(t)]);
      hess[static_cast<std::size_t>(t)] = p * (1.0 - p);
    }

    GbtTree tree;
    tree.nodes.emplace_back();
    std::fill(node_of.begin(), node_of.end(), 0);

    NodeState root;
    root.node_id = 0;
    root.depth = 0;
    for (int t = 0; t < rows; ++t) {
      root.g_sum += grad[static_cast<std::size_t>(t)];
      root.h_sum += hess[static_cast<std::size_t>(t)];
    }
    std::vector<NodeState> frontier{root};

    while (!frontier.empty()) {
      // Active nodes all sit at the same depth; -1 in active_index means the
      // row's node is no longer splittable.
      std::vector<int> active_index(tree.nodes.size(), -1);
      std::vector<SplitCandidate> best(frontier.size());
      std::vector<bool> splittable(frontier.size(), false);
      for (std::size_t k = 0; k < frontier.size(); ++k) {
        active_index[static_cast<std::size_t>(frontier[k].node_id)] = static_cast<int>(k);
        splittable[k] = frontier[k].depth < params.max_depth &&
                        frontier[k].h_sum >= 2.0 * params.min_child_weight;
      }

      std::vector<double> gl(frontier.size());
      std::vector<double> hl(frontier.size());
      std::vector<double> last_value(frontier.size());
      std::vector<int> seen(frontier.size());

      for (int j = 0; j < cols; ++j) {
        std::fill(gl.begin(), gl.end(), 0.0);
        std::fill(hl.begin(), hl.end(), 0.0);
        std::fill(seen.begin(), seen.end(), 0);
        for (const Entry& entry : order[static_cast<std::size_t>(j)]) {
          const int row = entry.row;
          const int node = node_of[static_cast<std::size_t>(row)];
          const int k = active_index[static_cast<std::size_t>(node)];
          if (k < 0 || !splittable[static_cast<std::size_t>(k)]) continue;
          const double v = entry.value;
          auto ku = static_cast<std::size_t>(k);
          if (seen[ku] > 0 && v > last_value[ku]) {
            const double g = frontier[ku].g_sum;
            const double h = frontier[ku].h_sum;
            const double gr = g - gl[ku];
            const double hr = h - hl[ku];
            if (hl[ku] >= params.min_child_weight && hr >= params.min_child_weight) {
              const double gain = 0.5 * (leaf_objective(gl[ku], hl[ku], params.leaf_l2) +
                                         leaf_objective(gr, hr, params.leaf_l2) -
                                         leaf_objective(g, h, params.leaf_l2));
              const double threshold = 0.5 * (last_value[ku] + v);
              // Midpoint can collapse onto the left value for adjacent
              // doubles; such a split cannot be reproduced at predict time.
              if (gain > best[ku].gain && last_value[ku] < threshold && threshold <= v) {
                best[ku] = {gain, j, threshold};
              }
            }
          }
          gl[ku] += grad[static_cast<std::size_t>(row)];
          hl[ku] += hess[static_cast<std::size_t>(row)];
          last_value[ku] = v;
          ++seen[ku];
        }
      }

      std::vector<NodeState> next;
      for (std::size_t k = 0; k < frontier.size(); ++k) {
        const NodeState& st = frontier[k];
        GbtNode& node = tree.nodes[static_cast<std::size_t>(st.node_id)];
        if (!best[k].valid() || best[k].gain <= 0.0) {
          node.weight = -st.g_sum / (st.h_sum + params.leaf_l2);
          continue;
        }
        node.feature = best[k].feature;
        node.threshold = best[k].threshold;
        node.gain = best[k].gain;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();

        NodeState left, right;
        left.node_id = node.left;
        right.node_id = node.right;
        left.depth = right.depth = st.depth + 1;
        next.push_back(left);
        next.push_back(right);
      }
      // Re-path rows through the freshly split nodes and accumulate child
      // statistics.
      if (!next.empty()) {
        std::vector<NodeState*> state_of(tree.nodes.size(), nullptr);
        for (auto& st : next) state_of[static_cast<std::size_t>(st.node_id)] = &st;
        for (int t = 0; t < rows; ++t) {
          int node = node_of[static_cast<std::size_t>(t)];
          const GbtNode& nd = tree.nodes[static_cast<std::size_t>(node)];
          if (nd.is_leaf()) continue;
          const int child = x(t, nd.feature) < nd.threshold ? nd.left : nd.right;
          if (state_of[static_cast<std::size_t>(child)] == nullptr) continue;
          node_of[static_cast<std::size_t>(t)] = child;
          state_of[static_cast<std::size_t>(child)]->g_sum += grad[static_cast<std::size_t>(t)];
          state_of[static_cast<std::size_t>(child)]->h_sum += hess[static_cast<std::size_t>(t)];
        }
      }
      frontier = std::move(next);
    }

    for (int t = 0; t < rows; ++t) {
      int node = 0;
      while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const GbtNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = x(t, nd.feature) < nd.threshold ? nd.left : nd.right;
      }
      raw[static_cast<std::size_t>(t)] +=
          params.learning_rate * tree.nodes[static_cast<std::size_t>(node)].weight;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

Eigen::VectorXd predict_gbt_raw(const GbtModel& model, const Eigen::MatrixXd& x, int n_trees) {
  if (!model.labels.empty() && static_cast<Eigen::Index>(model.labels.size()) != x.cols()) {
    throw ArgumentError("predict_gbt: column count does not match the fit");
  }
  const std::size_t limit =
      n_trees < 0 ? model.trees.size()
                  : std::min<std::size_t>(static_cast<std::size_t>(n_trees), model.trees.size());
  Eigen::VectorXd out = Eigen::VectorXd::Constant(x.rows(), model.base_score);
  for (std::size_t k = 0; k < limit; ++k) {
    const GbtTree& tree = model.trees[k];
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
      int node = 0;
      while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const GbtNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = x(t, nd.feature) < nd.threshold ? nd.left : nd.right;
      }
      out(t) += model.params.learning_rate * tree.nodes[static_cast<std::size_t>(node)].weight;
    }
  }
  return out;
}

Eigen::VectorXd predict_gbt(const GbtModel& model, const Eigen::MatrixXd& x, int n_trees) {
  Eigen::VectorXd raw = predict_gbt_raw(model, x, n_trees);
  for (Eigen::Index t = 0; t < raw.size(); ++t) raw(t) = sigmoid(raw(t));
  return raw;
}

}  // namespace atrisk
