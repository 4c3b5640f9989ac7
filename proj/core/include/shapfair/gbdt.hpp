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
#ifndef SHAPFAIR_GBDT_HPP
#define SHAPFAIR_GBDT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/data.hpp"
#include "shapfair/matrix.hpp"
#include "shapfair/model.hpp"

namespace shapfair {

/// One node of a regression tree. feature < 0 marks a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree rooted at node 0. A row goes left iff
/// row[feature] <= threshold.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  double evaluate(std::span<const double> row) const;
  std::size_t depth() const;
  /// Throws ValidationError unless every node is reachable exactly once
  /// from the root and every internal node has two valid children.
  void validate(std::size_t n_features) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

enum class Objective { logistic, squared };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct GbdtParams {
  int n_trees = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_child_rows = 10;
  /// L2 penalty on leaf weights.
  double l2 = 1.0;
  /// Row fraction sampled (seeded) per tree; 1.0 disables sampling.
  double subsample = 1.0;
};

nlohmann::json to_json(const GbdtParams& p);
GbdtParams gbdt_params_from_json(const nlohmann::json& j);

/// Additive tree ensemble: raw(x) = base_score + learning_rate * sum_k tree_k(x).
class GradientBoostedModel final : public Model {
 public:
  GradientBoostedModel() = default;
  GradientBoostedModel(std::vector<DecisionTree> trees, double learning_rate,
                       double base_score, Objective objective,
                       std::size_t n_features);

  std::size_t n_features() const override { return n_features_; }
  double predict_raw(std::span<const double> row) const override;
  using Model::predict_raw;
  Link link() const override {
    return objective_ == Objective::logistic ? Link::logistic : Link::identity;
  }

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  double learning_rate() const noexcept { return learning_rate_; }
  double base_score() const noexcept { return base_score_; }
  Objective objective() const noexcept { return objective_; }

  /// Mean training loss after each boosting round (index 0 = base score
  /// only). Empty for deserialized models.
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }
  void set_loss_history(std::vector<double> h) { loss_history_ = std::move(h); }

  /// Copy with only the first n trees.
  GradientBoostedModel truncated(std::size_t n) const;

  nlohmann::json to_json() const;
  static GradientBoostedModel from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  double learning_rate_ = 0.1;
  double base_score_ = 0.0;
  Objective objective_ = Objective::squared;
  std::size_t n_features_ = 0;
  std::vector<double> loss_history_;
};

/// Second-order gradient boosting with exact greedy split enumeration over
/// sorted unique feature values. Deterministic for fixed inputs and seed;
/// each round is damped if needed so the training loss never increases.
GradientBoostedModel train_gbdt(const Matrix& features, std::span<const double> targets,
                                Objective objective, const GbdtParams& params,
                                std::uint64_t seed);

GradientBoostedModel train_gbdt(const Dataset& train, std::span<const double> targets,
                                Objective objective, const GbdtParams& params,
                                std::uint64_t seed);

/// Mean loss of raw scores against targets under the objective.
double mean_loss(Objective objective, std::span<const double> raw,
                 std::span<const double> targets);

}  // namespace shapfair

#endif  // SHAPFAIR_GBDT_HPP
