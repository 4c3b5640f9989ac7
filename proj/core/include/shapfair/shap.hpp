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
#ifndef SHAPFAIR_SHAP_HPP
#define SHAPFAIR_SHAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/gbdt.hpp"
#include "shapfair/matrix.hpp"
#include "shapfair/model.hpp"

namespace shapfair {

/// Interventional value function: v(S) is the mean over background rows b
/// of f(x_S, b_rest), i.e. features outside S take the background row's
/// values. Both attribution algorithms resolve the same background.
struct ValueFunctionConfig {
  Matrix background;
  std::size_t max_background = 256;
  std::uint64_t seed = 0;

  /// The background actually used: all rows, or a seeded subsample of
  /// max_background rows (kept in original order).
  Matrix resolve() const;
};

/// Per-row attributions in the model's raw (additive) score space.
struct ShapMatrix {
  Matrix phi;                       // n_rows x n_features
  double phi0 = 0.0;                // mean raw prediction over the background
  std::vector<double> model_scores; // raw f(x) per row
  Link link = Link::identity;

  std::size_t n_rows() const noexcept { return phi.rows(); }
  std::size_t n_features() const noexcept { return phi.cols(); }
  std::vector<double> feature(std::size_t i) const { return phi.column(i); }
  /// Link-mapped predictions (probabilities for logistic models).
  std::vector<double> predictions() const;
  std::vector<double> mean_abs() const;
};

inline constexpr std::size_t kMaxExactFeatures = 20;

/// Reference implementation: enumerates all 2^M coalitions per row and
/// applies the Shapley weights |z|!(M-|z|-1)!/M! directly. Works for any
/// Model. Throws CapabilityError when M exceeds kMaxExactFeatures.
ShapMatrix exact_shapley(const Model& model, const Matrix& rows,
                         const ValueFunctionConfig& vf);

/// Interventional Shapley values for tree ensembles without coalition
/// enumeration. For a (row, background row) pair a tree is walked down both
/// branches only where the two rows disagree; a leaf reached with feature
/// sets X (took the row's side) and B (took the background side) is worth
/// its value exactly for coalitions containing X and avoiding B, which pays
/// value / (|X| C(|X|+|B|, |X|)) to each member of X and the mirrored
/// negative amount to each member of B. All background rows are walked
/// together as bitsets so rows sharing a path are credited once.
ShapMatrix tree_shap(const GradientBoostedModel& model, const Matrix& rows,
                     const ValueFunctionConfig& vf);

/// Dispatching form; throws CapabilityError for non-tree models.
ShapMatrix tree_shap(const Model& model, const Matrix& rows, const ValueFunctionConfig& vf);

/// Attributions of a single tree's output for one row, averaged over an
/// explicit background (no learning-rate scaling). Summing these over the trees of
/// an ensemble and scaling reproduces tree_shap.
std::vector<double> tree_attributions(const DecisionTree& tree, std::span<const double> row,
                                      const Matrix& background, std::size_t n_features);

/// max over rows of |f(x) - phi0 - sum_i phi_i(x)|.
double additivity_check(const ShapMatrix& s);

/// CSV with columns row_id, one per feature, phi0, score (raw f(x)).
std::string shap_to_csv(const ShapMatrix& s, const std::vector<std::string>& feature_names);

/// Summary with per-feature mean |phi|.
nlohmann::json shap_summary_json(const ShapMatrix& s,
                                 const std::vector<std::string>& feature_names);

}  // namespace shapfair

#endif  // SHAPFAIR_SHAP_HPP
