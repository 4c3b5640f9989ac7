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
#ifndef SHAPFAIR_SYNTHETIC_HPP
#define SHAPFAIR_SYNTHETIC_HPP

#include <cstdint>
#include <span>

#include "shapfair/data.hpp"

namespace shapfair {

/// Generator for planted-bias experiments. Column 0 is a binary protected
/// attribute "group" with categories "a" and "b"; the remaining columns are
/// independent standard normal covariates x1.. with fixed weights. The
/// black-box score is sigmoid(intercept + sum w_j x_j + bonus * [group = a])
/// and the label is drawn Bernoulli(score).
struct SyntheticConfig {
  std::size_t n_rows = 5000;
  std::size_t n_features = 6;
  double bonus_logit = 0.15;
  double group_a_fraction = 0.5;
  double intercept = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset data;  // score column holds the black-box score
  ProtectedSpec spec;
};

SyntheticData make_synthetic(const SyntheticConfig& cfg);

/// Logit of the planted black-box model for one encoded row.
double synthetic_logit(std::span<const double> row, const SyntheticConfig& cfg);

}  // namespace shapfair

#endif  // SHAPFAIR_SYNTHETIC_HPP
