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
#ifndef SHAPFAIR_METRICS_HPP
#define SHAPFAIR_METRICS_HPP

#include <cmath>
#include <span>
#include <vector>

namespace shapfair {

/// Area under the ROC curve as the Mann-Whitney statistic: the probability a
/// random positive outscores a random negative, ties counting one half.
/// Throws ValidationError unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_score = 0.0;
  double positive_rate = 0.0;
  std::size_t count = 0;

  double gap() const { return count ? std::abs(mean_score - positive_rate) : 0.0; }
};

/// Equal-width bins on [0,1]; a score of exactly 1 falls in the last bin.
std::vector<CalibrationBin> calibration_table(std::span<const double> scores,
                                              std::span<const int> labels, int n_bins);

/// Largest per-bin gap among bins holding at least min_count rows.
double max_calibration_gap(const std::vector<CalibrationBin>& table,
                           std::size_t min_count = 1);

}  // namespace shapfair

#endif  // SHAPFAIR_METRICS_HPP
