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
#include "shapfair/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"
#include "shapfair/random.hpp"

namespace shapfair {
namespace {

void check_inputs(const Model& model, const Matrix& rows, const Matrix& background) {
  if (rows.rows() == 0) throw ValidationError("no rows to explain");
  if (background.rows() == 0) throw ValidationError("background has no rows");
  if (rows.cols() != model.n_features() || background.cols() != model.n_features()) {
    throw ValidationError("model expects " + std::to_string(model.n_features()) +
                          " features");
  }
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

double background_mean(const Model& model, const Matrix& background) {
  double acc = 0.0;
  for (std::size_t b = 0; b < background.rows(); ++b) acc += model.predict_raw(background.row(b));
  return acc / static_cast<double>(background.rows());
}

// Weights for a leaf reached with nx row-side and nb background-side
// features: pos(nx, nb) = (nx-1)! nb! / (nx+nb)!, neg(nx, nb) = nx! (nb-1)! / (nx+nb)!.
class LeafWeights {
 public:
  explicit LeafWeights(std::size_t max_path) : n_(max_path + 1), pos_(n_ * n_, 0.0) {
    for (std::size_t nx = 1; nx < n_; ++nx) {
      for (std::size_t nb = 0; nb < n_; ++nb) {
        pos_[nx * n_ + nb] = 1.0 / (static_cast<double>(nx) * binomial(nx + nb, nx));
      }
    }
  }
  double pos(std::size_t nx, std::size_t nb) const { return pos_[nx * n_ + nb]; }
  double neg(std::size_t nx, std::size_t nb) const { return pos_[nb * n_ + nx]; }

 private:
  std::size_t n_;
  std::vector<double> pos_;
};

enum Role : std::uint8_t { kUnset = 0, kRowSide = 1, kBackgroundSide = 2 };

using Word = std::uint64_t;

// For one tree and a fixed background, bit b of goes_left(node) is set when
// background row b takes the left branch at that node.
class BackgroundRouting {
 public:
  BackgroundRouting(const DecisionTree& tree, const Matrix& background)
      : words_((background.rows() + 63) / 64), bits_(tree.nodes.size() * words_, 0) {
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
      const auto& node = tree.nodes[n];
      if (node.is_leaf()) continue;
      Word* out = bits_.data() + n * words_;
      const auto f = static_cast<std::size_t>(node.feature);
      for (std::size_t b = 0; b < background.rows(); ++b) {
        if (background(b, f) <= node.threshold) out[b / 64] |= Word{1} << (b % 64);
      }
    }
  }
  std::size_t words() const noexcept { return words_; }
  const Word* goes_left(std::size_t node) const { return bits_.data() + node * words_; }

 private:
  std::size_t words_;
  std::vector<Word> bits_;
};

// Walks one tree for one explained row with every background row at once.
// Background rows that make the same left/right decisions relative to the
// row share a path, so each leaf is credited once with a row count.
class TreeWalker {
 public:
  TreeWalker(const DecisionTree& tree, const Matrix& background, const LeafWeights& weights,
             std::size_t n_features)
      : tree_(tree),
        routing_(tree, background),
        weights_(weights),
        role_(n_features, kUnset),
        all_(routing_.words(), ~Word{0}),
        scratch_((tree.depth() + 1) * 2 * routing_.words()) {
    const std::size_t tail = background.rows() % 64;
    if (tail) all_.back() = (Word{1} << tail) - 1;
  }

  // Adds sum over background rows of this tree's attribution into phi.
  void run(std::span<const double> row, std::span<double> phi) {
    row_ = row;
    phi_ = phi;
    visit(0, all_.data(), 0);
  }

 private:
  std::size_t count(const Word* set) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < routing_.words(); ++w) c += static_cast<std::size_t>(std::popcount(set[w]));
    return c;
  }

  void visit(std::size_t index, const Word* alive, std::size_t level) {
    const TreeNode& node = tree_.nodes[index];
    if (node.is_leaf()) {
      const std::size_t c = count(alive);
      if (c) credit(node.value * static_cast<double>(c));
      return;
    }
    const std::size_t words = routing_.words();
    const auto f = static_cast<std::size_t>(node.feature);
    const bool row_left = row_[f] <= node.threshold;
    const auto row_child = static_cast<std::size_t>(row_left ? node.left : node.right);
    const auto other_child = static_cast<std::size_t>(row_left ? node.right : node.left);

    if (role_[f] == kRowSide) {
      visit(row_child, alive, level);
      return;
    }
    const Word* left = routing_.goes_left(index);
    Word* same = scratch_.data() + level * 2 * words;
    Word* diff = same + words;
    bool any_same = false, any_diff = false;
    for (std::size_t w = 0; w < words; ++w) {
      const Word with_row = row_left ? left[w] : ~left[w];
      same[w] = alive[w] & with_row;
      diff[w] = alive[w] & ~with_row;
      any_same |= same[w] != 0;
      any_diff |= diff[w] != 0;
    }
    if (role_[f] == kBackgroundSide) {
      // Each background row follows its own branch.
      if (any_same) visit(row_child, same, level + 1);
      if (any_diff) visit(other_child, diff, level + 1);
      return;
    }
    if (any_same) visit(row_child, same, level + 1);
    if (!any_diff) return;
    role_[f] = kRowSide;
    row_side_.push_back(f);
    visit(row_child, diff, level + 1);
    row_side_.pop_back();

    role_[f] = kBackgroundSide;
    bg_side_.push_back(f);
    visit(other_child, diff, level + 1);
    bg_side_.pop_back();
    role_[f] = kUnset;
  }

  void credit(double value) {
    const std::size_t nx = row_side_.size();
    const std::size_t nb = bg_side_.size();
    if (nx > 0) {
      const double w = value * weights_.pos(nx, nb);
      for (auto f : row_side_) phi_[f] += w;
    }
    if (nb > 0) {
      const double w = value * weights_.neg(nx, nb);
      for (auto f : bg_side_) phi_[f] -= w;
    }
  }

  const DecisionTree& tree_;
  BackgroundRouting routing_;
  const LeafWeights& weights_;
  std::vector<std::uint8_t> role_;
  std::vector<Word> all_;
  std::vector<Word> scratch_;
  std::vector<std::size_t> row_side_;
  std::vector<std::size_t> bg_side_;
  std::span<const double> row_;
  std::span<double> phi_;
};

}  // namespace

Matrix ValueFunctionConfig::resolve() const {
  if (background.rows() == 0) throw ValidationError("background has no rows");
  if (max_background == 0 || background.rows() <= max_background) return background;
  auto rng = make_rng(seed);
  const auto idx = sample_without_replacement(background.rows(), max_background, rng);
  return background.select_rows(idx);
}

std::vector<double> ShapMatrix::predictions() const {
  std::vector<double> out(model_scores);
  for (auto& v : out) v = apply_link(link, v);
  return out;
}

std::vector<double> ShapMatrix::mean_abs() const {
  std::vector<double> out(n_features(), 0.0);
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t i = 0; i < n_features(); ++i) out[i] += std::abs(phi(r, i));
  }
  for (auto& v : out) v /= static_cast<double>(std::max<std::size_t>(1, n_rows()));
  return out;
}

ShapMatrix exact_shapley(const Model& model, const Matrix& rows,
                         const ValueFunctionConfig& vf) {
  const std::size_t m = model.n_features();
  if (m > kMaxExactFeatures) {
    throw CapabilityError("exact_shapley enumerates 2^M coalitions and supports M <= " +
                          std::to_string(kMaxExactFeatures) + " (got " +
                          std::to_string(m) + "); use tree_shap for tree ensembles");
  }
  const Matrix background = vf.resolve();
  check_inputs(model, rows, background);

  const std::size_t n_coalitions = std::size_t{1} << m;
  // weight[k] = k! (M-k-1)! / M! = 1 / (M * C(M-1, k))
  std::vector<double> weight(m);
  for (std::size_t k = 0; k < m; ++k) {
    weight[k] = 1.0 / (static_cast<double>(m) * binomial(m - 1, k));
  }

  ShapMatrix out;
  out.phi = Matrix(rows.rows(), m);
  out.phi0 = background_mean(model, background);
  out.model_scores = model.predict_raw(rows);
  out.link = model.link();

  std::vector<double> value(n_coalitions);
  std::vector<double> hybrid(m);
  const double nb = static_cast<double>(background.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto x = rows.row(r);
    std::fill(value.begin(), value.end(), 0.0);
    for (std::size_t b = 0; b < background.rows(); ++b) {
      const auto z = background.row(b);
      for (std::size_t s = 0; s < n_coalitions; ++s) {
        for (std::size_t i = 0; i < m; ++i) hybrid[i] = (s >> i) & 1u ? x[i] : z[i];
        value[s] += model.predict_raw(hybrid);
      }
    }
    for (auto& v : value) v /= nb;

    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      double acc = 0.0;
      for (std::size_t s = 0; s < n_coalitions; ++s) {
        if (s & bit) continue;
        acc += weight[static_cast<std::size_t>(std::popcount(s))] * (value[s | bit] - value[s]);
      }
      out.phi(r, i) = acc;
    }
  }
  return out;
}

std::vector<double> tree_attributions(const DecisionTree& tree, std::span<const double> row,
                                      const Matrix& background, std::size_t n_features) {
  if (background.rows() == 0) throw ValidationError("background has no rows");
  LeafWeights weights(tree.depth());
  TreeWalker walker(tree, background, weights, n_features);
  std::vector<double> phi(n_features, 0.0);
  walker.run(row, phi);
  for (auto& v : phi) v /= static_cast<double>(background.rows());
  return phi;
}

ShapMatrix tree_shap(const GradientBoostedModel& model, const Matrix& rows,
                     const ValueFunctionConfig& vf) {
  const Matrix background = vf.resolve();
  check_inputs(model, rows, background);
  const std::size_t m = model.n_features();

  std::size_t max_depth = 0;
  for (const auto& t : model.trees()) max_depth = std::max(max_depth, t.depth());
  const LeafWeights weights(max_depth);
  std::vector<TreeWalker> walkers;
  walkers.reserve(model.trees().size());
  for (const auto& t : model.trees()) walkers.emplace_back(t, background, weights, m);

  ShapMatrix out;
  out.phi = Matrix(rows.rows(), m);
  out.phi0 = background_mean(model, background);
  out.model_scores = model.predict_raw(rows);
  out.link = model.link();

  const double scale = model.learning_rate() / static_cast<double>(background.rows());
  std::vector<double> acc(m);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const auto x = rows.row(r);
    for (auto& w : walkers) w.run(x, acc);
    for (std::size_t i = 0; i < m; ++i) out.phi(r, i) = acc[i] * scale;
  }
  return out;
}

ShapMatrix tree_shap(const Model& model, const Matrix& rows, const ValueFunctionConfig& vf) {
  const auto* ensemble = dynamic_cast<const GradientBoostedModel*>(&model);
  if (!ensemble) throw CapabilityError("tree_shap requires a tree ensemble model");
  return tree_shap(*ensemble, rows, vf);
}

double additivity_check(const ShapMatrix& s) {
  double worst = 0.0;
  for (std::size_t r = 0; r < s.n_rows(); ++r) {
    double sum = s.phi0;
    for (std::size_t i = 0; i < s.n_features(); ++i) sum += s.phi(r, i);
    worst = std::max(worst, std::abs(s.model_scores[r] - sum));
  }
  return worst;
}

std::string shap_to_csv(const ShapMatrix& s, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  csv::Record header{"row_id"};
  header.insert(header.end(), feature_names.begin(), feature_names.end());
  header.push_back("phi0");
  header.push_back("score");
  csv::write_record(out, header);
  for (std::size_t r = 0; r < s.n_rows(); ++r) {
    csv::Record rec{std::to_string(r)};
    for (std::size_t i = 0; i < s.n_features(); ++i) rec.push_back(csv::format_double(s.phi(r, i)));
    rec.push_back(csv::format_double(s.phi0));
    rec.push_back(csv::format_double(s.model_scores[r]));
    csv::write_record(out, rec);
  }
  return out.str();
}

nlohmann::json shap_summary_json(const ShapMatrix& s,
                                 const std::vector<std::string>& feature_names) {
  nlohmann::json mean_abs = nlohmann::json::object();
  const auto ma = s.mean_abs();
  for (std::size_t i = 0; i < s.n_features(); ++i) mean_abs[feature_names.at(i)] = ma[i];
  return {{"schema_version", 1},
          {"kind", "shap_summary"},
          {"n_rows", s.n_rows()},
          {"phi0", s.phi0},
          {"space", s.link == Link::logistic ? "log_odds" : "identity"},
          {"max_additivity_residual", additivity_check(s)},
          {"mean_abs_phi", std::move(mean_abs)}};
}

}  // namespace shapfair
