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
#include "shapfair/synthetic.hpp"

#include <array>

#include "shapfair/error.hpp"
#include "shapfair/model.hpp"
#include "shapfair/random.hpp"

namespace shapfair {
namespace {

constexpr std::array<double, 6> kWeights{1.0, -0.8, 0.6, 0.4, -0.3, 0.2};

double weight(std::size_t j) { return kWeights[(j - 1) % kWeights.size()]; }

}  // namespace

double synthetic_logit(std::span<const double> row, const SyntheticConfig& cfg) {
  double z = cfg.intercept + (row[0] == 0.0 ? cfg.bonus_logit : 0.0);
  for (std::size_t j = 1; j < row.size(); ++j) z += weight(j) * row[j];
  return z;
}

SyntheticData make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n_rows < 2 || cfg.n_features < 2) {
    throw ValidationError("synthetic data needs >= 2 rows and >= 2 features");
  }
  auto rng = make_rng(cfg.seed);
  SyntheticData out;
  Dataset& d = out.data;
  d.column_names.push_back("group");
  for (std::size_t j = 1; j < cfg.n_features; ++j) d.column_names.push_back("x" + std::to_string(j));
  d.encoding.values["group"] = {"a", "b"};
  d.features = Matrix(cfg.n_rows, cfg.n_features);
  std::vector<double> score(cfg.n_rows);
  d.label.resize(cfg.n_rows);
  for (std::size_t r = 0; r < cfg.n_rows; ++r) {
    auto row = d.features.row(r);
    row[0] = uniform_unit(rng) < cfg.group_a_fraction ? 0.0 : 1.0;
    for (std::size_t j = 1; j < cfg.n_features; ++j) row[j] = standard_normal(rng);
    score[r] = sigmoid(synthetic_logit(row, cfg));
    d.label[r] = uniform_unit(rng) < score[r] ? 1 : 0;
  }
  d.score = std::move(score);
  d.validate();
  out.spec = ProtectedSpec{"group", {0.0, 1.0}, 1};
  out.spec.validate(d);
  return out;
}

}  // namespace shapfair
