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
#include "shapfair/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "shapfair/error.hpp"

namespace shapfair {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("auc: scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw ValidationError("auc needs both positive and negative labels");
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

std::vector<CalibrationBin> calibration_table(std::span<const double> scores,
                                              std::span<const int> labels, int n_bins) {
  if (n_bins < 2) throw ValidationError("calibration_table needs n_bins >= 2");
  if (scores.size() != labels.size()) {
    throw ValidationError("calibration_table: scores and labels differ in length");
  }
  std::vector<CalibrationBin> bins(static_cast<std::size_t>(n_bins));
  std::vector<double> score_sum(bins.size(), 0.0), pos_sum(bins.size(), 0.0);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lower = static_cast<double>(b) / n_bins;
    bins[b].upper = static_cast<double>(b + 1) / n_bins;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = std::clamp(scores[i], 0.0, 1.0);
    auto b = static_cast<std::size_t>(s * n_bins);
    if (b >= bins.size()) b = bins.size() - 1;
    score_sum[b] += scores[i];
    pos_sum[b] += labels[i];
    ++bins[b].count;
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b].count) {
      const double c = static_cast<double>(bins[b].count);
      bins[b].mean_score = score_sum[b] / c;
      bins[b].positive_rate = pos_sum[b] / c;
    }
  }
  return bins;
}

double max_calibration_gap(const std::vector<CalibrationBin>& table,
                           std::size_t min_count) {
  double worst = 0.0;
  for (const auto& b : table) {
    if (b.count >= min_count && b.count > 0) worst = std::max(worst, b.gap());
  }
  return worst;
}

}  // namespace shapfair
