// Copyright 2026 The shapfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "shapfair/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shapfair/error.hpp"
#include "shapfair/random.hpp"

namespace shapfair {

double DecisionTree::evaluate(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold
                                     ? n.left
                                     : n.right);
  }
  return nodes[i].value;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[i].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return best;
}

void DecisionTree::validate(std::size_t n_features) const {
  if (nodes.empty()) throw ValidationError("tree has no nodes");
  std::vector<bool> seen(nodes.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto& n = nodes[stack.back()];
    stack.pop_back();
    if (n.is_leaf()) {
      if (!std::isfinite(n.value)) throw ValidationError("non-finite leaf value");
      continue;
    }
    if (static_cast<std::size_t>(n.feature) >= n_features) {
      throw ValidationError("split feature " + std::to_string(n.feature) +
                            " out of range");
    }
    for (int child : {n.left, n.right}) {
      if (child <= 0 || static_cast<std::size_t>(child) >= nodes.size()) {
        throw ValidationError("child index " + std::to_string(child) + " out of range");
      }
      if (seen[static_cast<std::size_t>(child)]) {
        throw ValidationError("node " + std::to_string(child) +
                              " reachable twice (cycle or shared child)");
      }
      seen[static_cast<std::size_t>(child)] = true;
      stack.push_back(static_cast<std::size_t>(child));
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ValidationError("tree has unreachable nodes");
  }
}

std::string to_string(Objective o) {
  return o == Objective::logistic ? "logistic" : "squared";
}

Objective objective_from_string(const std::string& s) {
  if (s == "logistic") return Objective::logistic;
  if (s == "squared") return Objective::squared;
  throw SchemaError("unknown objective '" + s + "'");
}

nlohmann::json to_json(const GbdtParams& p) {
  return {{"n_trees", p.n_trees},   {"max_depth", p.max_depth},
          {"learning_rate", p.learning_rate}, {"min_child_rows", p.min_child_rows},
          {"l2", p.l2},             {"subsample", p.subsample}};
}

GbdtParams gbdt_params_from_json(const nlohmann::json& j) {
  GbdtParams p;
  p.n_trees = j.value("n_trees", p.n_trees);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.min_child_rows = j.value("min_child_rows", p.min_child_rows);
  p.l2 = j.value("l2", p.l2);
  p.subsample = j.value("subsample", p.subsample);
  return p;
}

GradientBoostedModel::GradientBoostedModel(std::vector<DecisionTree> trees,
                                           double learning_rate, double base_score,
                                           Objective objective, std::size_t n_features)
    : trees_(std::move(trees)),
      learning_rate_(learning_rate),
      base_score_(base_score),
      objective_(objective),
      n_features_(n_features) {
  if (!(learning_rate_ > 0.0)) throw ValidationError("learning_rate must be > 0");
  for (const auto& t : trees_) t.validate(n_features_);
}

double GradientBoostedModel::predict_raw(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.evaluate(row);
  return base_score_ + learning_rate_ * sum;
}

GradientBoostedModel GradientBoostedModel::truncated(std::size_t n) const {
  std::vector<DecisionTree> head(trees_.begin(),
                                 trees_.begin() + static_cast<long>(std::min(n, trees_.size())));
  return GradientBoostedModel(std::move(head), learning_rate_, base_score_, objective_,
                              n_features_);
}

nlohmann::json GradientBoostedModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"value", n.value}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  return {{"schema_version", 1},
          {"kind", "gradient_boosted_model"},
          {"base_score", base_score_},
          {"learning_rate", learning_rate_},
          {"objective", to_string(objective_)},
          {"n_features", n_features_},
          {"trees", std::move(trees)}};
}

GradientBoostedModel GradientBoostedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw SchemaError("unsupported model schema_version");
    }
    std::vector<DecisionTree> trees;
    for (const auto& jt : j.at("trees")) {
      DecisionTree t;
      for (const auto& jn : jt.at("nodes")) {
        TreeNode n;
        if (jn.contains("value")) {
          n.value = jn.at("value").get<double>();
        } else {
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
        }
        t.nodes.push_back(n);
      }
      trees.push_back(std::move(t));
    }
    return GradientBoostedModel(std::move(trees), j.at("learning_rate").get<double>(),
                                j.at("base_score").get<double>(),
                                objective_from_string(j.at("objective").get<std::string>()),
                                j.at("n_features").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model JSON: ") + e.what());
  }
}

double mean_loss(Objective objective, std::span<const double> raw,
                 std::span<const double> targets) {
  double acc = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double z = raw[i];
    if (objective == Objective::logistic) {
      // softplus(z) - y z, stable for large |z|
      const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      acc += softplus - targets[i] * z;
    } else {
      const double d = z - targets[i];
      acc += 0.5 * d * d;
    }
  }
  return raw.empty() ? 0.0 : acc / static_cast<double>(raw.size());
}

namespace {

using RowList = std::vector<std::uint32_t>;

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> grad, std::span<const double> hess,
              const GbdtParams& params)
      : x_(x), grad_(grad), hess_(hess), params_(params), go_left_(x.rows(), 0) {}

  DecisionTree build(std::vector<RowList> root_lists) {
    DecisionTree tree;
    grow(tree, std::move(root_lists), 0);
    return tree;
  }

 private:
  double leaf_weight(double g, double h) const { return -g / (h + params_.l2); }
  double score(double g, double h) const { return g * g / (h + params_.l2); }

  int grow(DecisionTree& tree, std::vector<RowList> lists, int depth) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const RowList& rows = lists.front();
    double g = 0.0, h = 0.0;
    for (auto r : rows) {
      g += grad_[r];
      h += hess_[r];
    }

    SplitCandidate best;
    const auto min_rows = static_cast<std::size_t>(std::max(1, params_.min_child_rows));
    if (depth < params_.max_depth && rows.size() >= 2 * min_rows) {
      best = find_split(lists, g, h, min_rows);
    }
    if (best.feature < 0) {
      tree.nodes[static_cast<std::size_t>(index)].value = leaf_weight(g, h);
      return index;
    }

    const auto f = static_cast<std::size_t>(best.feature);
    for (auto r : rows) go_left_[r] = x_(r, f) <= best.threshold;
    std::vector<RowList> left(lists.size()), right(lists.size());
    for (std::size_t k = 0; k < lists.size(); ++k) {
      for (auto r : lists[k]) (go_left_[r] ? left[k] : right[k]).push_back(r);
    }
    lists.clear();

    const int l = grow(tree, std::move(left), depth + 1);
    const int rgt = grow(tree, std::move(right), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = rgt;
    return index;
  }

  SplitCandidate find_split(const std::vector<RowList>& lists, double g, double h,
                            std::size_t min_rows) const {
    SplitCandidate best;
    const double parent = score(g, h);
    constexpr double kMinGain = 1e-12;
    for (std::size_t f = 0; f < lists.size(); ++f) {
      const RowList& sorted = lists[f];
      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const auto r = sorted[i];
        gl += grad_[r];
        hl += hess_[r];
        const double v = x_(r, f);
        const double next = x_(sorted[i + 1], f);
        if (v == next) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_rows || sorted.size() - n_left < min_rows) continue;
        const double gain = score(gl, hl) + score(g - gl, h - hl) - parent;
        if (gain > kMinGain && gain > best.gain) {
          best.gain = gain;
          best.feature = static_cast<int>(f);
          best.threshold = v;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const GbdtParams& params_;
  std::vector<char> go_left_;
};

void scale_leaves(DecisionTree& t, double factor) {
  for (auto& n : t.nodes) {
    if (n.is_leaf()) n.value *= factor;
  }
}

}  // namespace

GradientBoostedModel train_gbdt(const Matrix& features, std::span<const double> targets,
                                Objective objective, const GbdtParams& params,
                                std::uint64_t seed) {
  const std::size_t n = features.rows();
  if (n == 0) throw TrainingError("empty training set");
  if (targets.size() != n) {
    throw TrainingError("targets length " + std::to_string(targets.size()) +
                        " does not match " + std::to_string(n) + " rows");
  }
  if (params.max_depth < 1) throw TrainingError("max_depth must be >= 1");
  if (params.n_trees < 0) throw TrainingError("n_trees must be >= 0");
  if (!(params.learning_rate > 0.0)) throw TrainingError("learning_rate must be > 0");
  if (!(params.subsample > 0.0 && params.subsample <= 1.0)) {
    throw TrainingError("subsample must lie in (0,1]");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw TrainingError("non-finite target");
    if (objective == Objective::logistic && (t < 0.0 || t > 1.0)) {
      throw TrainingError("logistic objective requires targets in [0,1]");
    }
  }

  const double mean = std::accumulate(targets.begin(), targets.end(), 0.0) /
                      static_cast<double>(n);
  const double base = objective == Objective::logistic
                          ? logit(std::clamp(mean, 1e-6, 1.0 - 1e-6))
                          : mean;

  const std::size_t m = features.cols();
  std::vector<RowList> presorted(m, RowList(n));
  for (std::size_t f = 0; f < m; ++f) {
    std::iota(presorted[f].begin(), presorted[f].end(), 0u);
    std::stable_sort(presorted[f].begin(), presorted[f].end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return features(a, f) < features(b, f);
                     });
  }

  std::vector<double> raw(n, base), grad(n), hess(n), contrib(n), trial(n);
  std::vector<DecisionTree> trees;
  std::vector<double> history{mean_loss(objective, raw, targets)};
  auto rng = make_rng(seed);
  std::vector<char> in_sample(n, 1);

  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (objective == Objective::logistic) {
        const double p = sigmoid(raw[i]);
        grad[i] = p - targets[i];
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      } else {
        grad[i] = raw[i] - targets[i];
        hess[i] = 1.0;
      }
    }

    std::vector<RowList> lists;
    if (params.subsample < 1.0) {
      const auto k = std::max<std::size_t>(1, round_count(params.subsample * static_cast<double>(n)));
      std::fill(in_sample.begin(), in_sample.end(), 0);
      for (auto r : sample_without_replacement(n, k, rng)) in_sample[r] = 1;
      lists.resize(m);
      for (std::size_t f = 0; f < m; ++f) {
        for (auto r : presorted[f]) {
          if (in_sample[r]) lists[f].push_back(r);
        }
      }
    } else {
      lists = presorted;
    }
    if (lists.empty()) {
      // No features: a single-leaf tree still fits the intercept.
      lists.emplace_back(n);
      std::iota(lists.front().begin(), lists.front().end(), 0u);
    }

    TreeBuilder builder(features, grad, hess, params);
    DecisionTree tree = builder.build(std::move(lists));

    for (std::size_t i = 0; i < n; ++i) contrib[i] = tree.evaluate(features.row(i));
    const double before = history.back();
    double after = before;
    double factor = 1.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = raw[i] + params.learning_rate * factor * contrib[i];
      }
      after = mean_loss(objective, trial, targets);
      if (after <= before) break;
      factor *= 0.5;
    }
    if (after > before) {
      factor = 0.0;
      trial = raw;
      after = before;
    }
    if (factor != 1.0) scale_leaves(tree, factor);
    raw.swap(trial);
    history.push_back(after);
    trees.push_back(std::move(tree));
  }

  GradientBoostedModel model(std::move(trees), params.learning_rate, base, objective, m);
  model.set_loss_history(std::move(history));
  return model;
}

GradientBoostedModel train_gbdt(const Dataset& train, std::span<const double> targets,
                                Objective objective, const GbdtParams& params,
                                std::uint64_t seed) {
  return train_gbdt(train.features, targets, objective, params, seed);
}

}  // namespace shapfair
