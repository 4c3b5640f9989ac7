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
#ifndef SHAPFAIR_DETECT_HPP
#define SHAPFAIR_DETECT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/data.hpp"
#include "shapfair/distance.hpp"
#include "shapfair/gbdt.hpp"
#include "shapfair/shap.hpp"

namespace shapfair {

/// Protected-attribute attributions of the rows in one group, optionally
/// restricted to one true outcome.
struct GroupSlice {
  double group = 0.0;
  std::optional<int> outcome;  // nullopt = any outcome
  std::vector<double> phi_values;
};

/// Slice of phi_A for rows with A == group (and Y == outcome when given).
/// Throws ValidationError naming group and outcome when the slice is empty.
GroupSlice make_slice(const ShapMatrix& s, const Dataset& d, const ProtectedSpec& spec,
                      double group, std::optional<int> outcome);

/// Mean |phi_A| over all rows.
double demographic_parity_score(const ShapMatrix& s, const Dataset& d,
                                const ProtectedSpec& spec);

struct PairDistance {
  double group_a = 0.0;
  double group_b = 0.0;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  double value = 0.0;
};

/// Distances between every pair of groups at one outcome (groups in spec order).
std::vector<PairDistance> pairwise_distances(const ShapMatrix& s, const Dataset& d,
                                             const ProtectedSpec& spec, int outcome,
                                             const DistanceConfig& cfg);

/// Distance between group-conditional phi_A distributions at the favourable
/// outcome. With more than two groups the largest pairwise distance.
double equality_of_opportunity_score(const ShapMatrix& s, const Dataset& d,
                                     const ProtectedSpec& spec, const DistanceConfig& cfg);

/// Same statistic at Y = 0 (index 0) and Y = 1 (index 1).
std::array<double, 2> equalized_odds_score(const ShapMatrix& s, const Dataset& d,
                                           const ProtectedSpec& spec,
                                           const DistanceConfig& cfg);

/// All criterion statistics for one explained model.
struct CriterionValues {
  double demographic_parity = 0.0;
  double equality_of_opportunity = 0.0;
  std::array<double, 2> equalized_odds{0.0, 0.0};
};

CriterionValues evaluate_criteria(const ShapMatrix& s, const Dataset& d,
                                  const ProtectedSpec& spec, const DistanceConfig& cfg);

/// Settings shared by the audited fit and every baseline refit.
struct PipelineConfig {
  GbdtParams params;
  std::size_t max_background = 256;
  std::uint64_t shap_seed = 0;
  DistanceConfig distance;
};

struct ExplainedModel {
  GradientBoostedModel model;
  ShapMatrix shap;
};

/// Trains the GBDT on (d, targets) and explains every row of d with
/// tree_shap against a background drawn from d itself.
ExplainedModel fit_and_explain(const Dataset& d, std::span<const double> targets,
                               Objective objective, const PipelineConfig& config,
                               std::uint64_t seed);

struct BaselineStats {
  double mean = 0.0;
  double max = 0.0;
  std::vector<double> values;

  static BaselineStats from_values(std::vector<double> values);
};

struct BaselineResult {
  std::vector<CriterionValues> runs;
  BaselineStats demographic_parity;
  BaselineStats equality_of_opportunity;
  std::array<BaselineStats, 2> equalized_odds;
  /// Per run: the permuted protected column and the phi_A it produced.
  std::vector<std::vector<double>> permuted_protected;
  std::vector<std::vector<double>> phi_protected;
};

/// For k = 1..K: permute A (seed + k), refit the mimic on the same targets
/// (seed + k), re-explain, and recompute each criterion with rows grouped
/// by the permuted attribute.
BaselineResult randomized_baseline(const Dataset& d, const ProtectedSpec& spec,
                                   std::span<const double> targets, Objective objective,
                                   const PipelineConfig& config, int k,
                                   std::uint64_t seed);

enum class Verdict { violation, no_evidence };
std::string to_string(Verdict v);

struct VerdictRule {
  double ratio_threshold = 3.0;
  double floor = 1e-3;
};

/// metric / max(baseline.mean, floor).
double baseline_ratio(double metric, const BaselineStats& baseline, const VerdictRule& rule);

/// violation iff metric > ratio_threshold * max(baseline.mean, floor).
Verdict verdict(double metric, const BaselineStats& baseline, const VerdictRule& rule);

enum class Criterion { demographic_parity, equality_of_opportunity, equalized_odds };
std::string to_string(Criterion c);

struct SliceCount {
  double group = 0.0;
  std::optional<int> outcome;
  std::size_t count = 0;
};

struct FairnessReport {
  Criterion criterion = Criterion::demographic_parity;
  DistanceKind distance_kind = DistanceKind::wasserstein1;
  /// One entry for demographic parity / equality of opportunity, two
  /// (Y = 0, Y = 1) for equalized odds.
  std::vector<double> metric;
  std::vector<BaselineStats> baseline;
  std::vector<double> ratio;
  Verdict verdict = Verdict::no_evidence;
  std::vector<SliceCount> slices;

  nlohmann::json to_json(const Dataset& d, const ProtectedSpec& spec) const;
};

std::vector<FairnessReport> build_reports(const ShapMatrix& s, const Dataset& d,
                                          const ProtectedSpec& spec,
                                          const BaselineResult& baseline,
                                          const DistanceConfig& cfg, const VerdictRule& rule);

/// Plot data for attribution histograms: n_bins equal-width bins over the
/// pooled range of all series; columns bin_lower, bin_upper, then one count
/// column per series.
std::string histogram_csv(const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& series, int n_bins);

}  // namespace shapfair

#endif  // SHAPFAIR_DETECT_HPP
