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
// Generators and reference implementations shared by the unit and
// acceptance tests. Nothing here calls the code under test's algorithms.
#ifndef SHAPFAIR_TEST_SUPPORT_HPP
#define SHAPFAIR_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "shapfair/gbdt.hpp"
#include "shapfair/matrix.hpp"
#include "shapfair/model.hpp"
#include "shapfair/random.hpp"

namespace shapfair::testing {

// Values on a coarse grid so rows regularly land exactly on thresholds.
inline double grid_value(Rng& rng) {
  return -1.5 + 0.5 * static_cast<double>(uniform_index(rng, 7));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

inline Matrix grid_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = grid_value(rng);
  return m;
}

inline int grow(DecisionTree& t, Rng& rng, std::size_t n_features, int depth_left) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  const bool leaf = depth_left == 0 || uniform_unit(rng) < 0.15;
  if (leaf) {
    t.nodes[id].value = uniform(rng, -1.0, 1.0);
    return id;
  }
  t.nodes[id].feature = static_cast<int>(uniform_index(rng, n_features));
  t.nodes[id].threshold = -1.0 + 0.5 * static_cast<double>(uniform_index(rng, 5));
  const int l = grow(t, rng, n_features, depth_left - 1);
  const int r = grow(t, rng, n_features, depth_left - 1);
  t.nodes[id].left = l;
  t.nodes[id].right = r;
  return id;
}

inline DecisionTree random_tree(Rng& rng, std::size_t n_features, int max_depth) {
  DecisionTree t;
  grow(t, rng, n_features, max_depth);
  return t;
}

inline GradientBoostedModel random_ensemble(Rng& rng, std::size_t n_features,
                                            std::size_t n_trees, int max_depth,
                                            Objective objective = Objective::squared) {
  std::vector<DecisionTree> trees;
  for (std::size_t k = 0; k < n_trees; ++k) trees.push_back(random_tree(rng, n_features, max_depth));
  return GradientBoostedModel(std::move(trees), uniform(rng, 0.05, 1.0), uniform(rng, -1.0, 1.0),
                              objective, n_features);
}

// Shapley values by the permutation definition: average marginal
// contribution over all M! feature orderings, v(S) = background mean of
// f(x_S, b_rest). Factorial cost; keep M <= 7.
inline std::vector<double> permutation_shapley(const Model& f, std::span<const double> x,
                                               const Matrix& background) {
  const std::size_t m = x.size();
  auto value = [&](const std::vector<bool>& in) {
    double total = 0.0;
    std::vector<double> z(m);
    for (std::size_t b = 0; b < background.rows(); ++b) {
      for (std::size_t i = 0; i < m; ++i) z[i] = in[i] ? x[i] : background(b, i);
      total += f.predict_raw(z);
    }
    return total / static_cast<double>(background.rows());
  };
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> phi(m, 0.0);
  double n_orders = 0.0;
  do {
    std::vector<bool> in(m, false);
    double prev = value(in);
    for (std::size_t i : order) {
      in[i] = true;
      const double next = value(in);
      phi[i] += next - prev;
      prev = next;
    }
    n_orders += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= n_orders;
  return phi;
}

// Minimum-cost perfect matching (Hungarian method, O(n^3)) on |u_i - v_j|;
// for equal-size samples W1 equals this cost divided by n.
inline double matching_cost(const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t n = u.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pu(n + 1, 0.0), pv(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = std::abs(u[i0 - 1] - v[j - 1]) - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          pu[match[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double cost = 0.0;
  for (std::size_t j = 1; j <= n; ++j) cost += std::abs(u[match[j] - 1] - v[j - 1]);
  return cost;
}

// Reference selection rule for the quadrant method, written from the rule's
// statement: rank quadrants 1 and 3 by distance descending, quadrants 2 and
// 4 ascending, row id ascending on ties; take N from the first list, then
// the remainder from the second.
struct RefPoint {
  std::size_t row;
  int quadrant;
  double distance;
};

inline std::vector<std::size_t> reference_selection(std::vector<RefPoint> pts, std::size_t n) {
  std::vector<RefPoint> far, near;
  for (const auto& p : pts) (p.quadrant == 1 || p.quadrant == 3 ? far : near).push_back(p);
  std::sort(far.begin(), far.end(), [](const RefPoint& a, const RefPoint& b) {
    return a.distance != b.distance ? a.distance > b.distance : a.row < b.row;
  });
  std::sort(near.begin(), near.end(), [](const RefPoint& a, const RefPoint& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.row < b.row;
  });
  std::vector<std::size_t> out;
  for (const auto& p : far) {
    if (out.size() == n) break;
    out.push_back(p.row);
  }
  for (const auto& p : near) {
    if (out.size() == n) break;
    out.push_back(p.row);
  }
  return out;
}

// Quadrant by the boundary convention: shap <= 0 is the negative side,
// pred <= mu the low side.
inline int reference_quadrant(double shap, double pred, double mu) {
  const bool pos = shap > 0.0;
  const bool high = pred > mu;
  if (pos && high) return 1;
  if (!pos && high) return 2;
  if (!pos && !high) return 3;
  return 4;
}

}  // namespace shapfair::testing

#endif  // SHAPFAIR_TEST_SUPPORT_HPP
