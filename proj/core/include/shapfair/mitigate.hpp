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
#ifndef SHAPFAIR_MITIGATE_HPP
#define SHAPFAIR_MITIGATE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/data.hpp"
#include "shapfair/model.hpp"

namespace shapfair {

/// Weighted cost g = w_fp * c_fp + w_fn * c_fn.
struct CostSpec {
  double w_fp = 1.0;
  double w_fn = 1.0;

  void validate() const;
  double operator()(double fp_cost, double fn_cost) const {
    return w_fp * fp_cost + w_fn * fn_cost;
  }
  /// Cost of the constant classifier that always predicts the base rate.
  double of_base_rate(double base_rate) const { return (*this)(base_rate, 1.0 - base_rate); }
};

/// Generalised (soft) error costs of one protected group.
struct GroupStats {
  double group = 0.0;
  std::size_t count = 0;
  double base_rate = 0.0;  // mean(Y)
  double fp_cost = 0.0;    // mean score over Y = 0
  double fn_cost = 0.0;    // mean (1 - score) over Y = 1
  double accuracy = 0.0;   // (score >= 0.5) == Y
  double avg_score = 0.0;

  double weighted_cost(const CostSpec& c) const { return c(fp_cost, fn_cost); }
  friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

/// Stats for every group in spec order. Throws ValidationError naming a
/// group that lacks rows of either outcome.
std::vector<GroupStats> group_stats(std::span<const double> scores, std::span<const int> labels,
                                    std::span<const double> protected_values,
                                    const ProtectedSpec& spec);

/// Mixing rate that moves cost_h to target when a fraction alpha of the
/// predictions is replaced by the base rate:
/// alpha = (target - cost_h) / (cost_base - cost_h), clamped to [0,1].
/// Throws InfeasibleError when target lies outside [cost_h, cost_base].
double compute_alpha(double cost_h, double cost_base, double target);

/// Same, reading cost_h and the base-rate cost from the group's stats.
double compute_alpha(const GroupStats& low, double target, const CostSpec& cost);

/// Number of rows replaced for a group of size n: round(alpha * n), half
/// away from zero.
std::size_t selection_size(double alpha, std::size_t n);

/// Uniformly random subset of group_rows of size selection_size(alpha, n);
/// returned in ascending order.
std::vector<std::size_t> random_select(std::span<const std::size_t> group_rows, double alpha,
                                       std::uint64_t seed);

/// 1: shap > 0, pred > mu.  2: shap <= 0, pred > mu.
/// 3: shap <= 0, pred <= mu.  4: shap > 0, pred <= mu.
int quadrant_of(double shap, double pred, double mu);

enum class DistanceFn { shap_only, non_protected };
std::string to_string(DistanceFn f);
DistanceFn distance_fn_from_string(const std::string& s);

struct QuadrantPoint {
  std::size_t row = 0;
  double shap = 0.0;  // raw-space phi_A
  double pred = 0.0;  // prediction in [0,1]
  double raw = 0.0;   // raw model score behind pred
  int quadrant = 0;
  double distance = 0.0;
};

/// shap_only: |phi_A|. non_protected: |(pred - mu) - c| where c is phi_A
/// mapped to prediction space, c = link(raw) - link(raw - phi_A).
double point_distance(const QuadrantPoint& p, DistanceFn kind, double mu, Link link);

/// Builds points (quadrant and distance filled in) for the given rows.
std::vector<QuadrantPoint> make_points(std::span<const std::size_t> rows,
                                       std::span<const double> shap,
                                       std::span<const double> pred,
                                       std::span<const double> raw, double mu,
                                       DistanceFn kind, Link link);

/// Row ids in each quadrant (index 0 = quadrant 1), ascending.
std::array<std::vector<std::size_t>, 4> quadrant_partition(
    std::span<const QuadrantPoint> points, double mu);

/// SHAP-guided selection. N = selection_size(alpha, |points|). Takes the N
/// largest-distance points of quadrants 1 and 3, then fills any remainder
/// with the smallest-distance points of quadrants 2 and 4. Ties go to the
/// lower row id. Returns row ids in selection order.
std::vector<std::size_t> find_individuals(std::span<const QuadrantPoint> points, double alpha);

/// Convenience form over parallel arrays; rows are 0..n-1.
std::vector<std::size_t> find_individuals(std::span<const double> shap,
                                          std::span<const double> pred,
                                          std::span<const double> raw, double alpha,
                                          double mu, DistanceFn kind, Link link);

/// True if, within quadrants 1 and 3, every selected point is at least as
/// far as every unselected one, and within quadrants 2 and 4 at most as far.
bool satisfies_dominance(std::span<const QuadrantPoint> points,
                         std::span<const std::size_t> selected);

/// Copy of scores with every selected row set to mu. Throws
/// ValidationError if a selected row is not in group_rows.
std::vector<double> apply_mitigation(std::span<const double> scores,
                                     std::span<const std::size_t> selected,
                                     std::span<const std::size_t> group_rows, double mu);

enum class SelectionMethod { random, quadrant };
std::string to_string(SelectionMethod m);

struct MitigationResult {
  SelectionMethod method = SelectionMethod::random;
  double modified_group = 0.0;
  double alpha = 0.0;
  double target_cost = 0.0;
  CostSpec cost;
  std::vector<std::size_t> modified_indices;  // ascending
  std::vector<double> new_scores;
  std::vector<GroupStats> before;
  std::vector<GroupStats> after;
  double cost_gap_before = 0.0;
  double cost_gap_after = 0.0;

  nlohmann::json to_json(const Dataset& d, const ProtectedSpec& spec) const;
};

/// Table with accuracy, FP cost, FN cost, base rate and average score per
/// group for the original, randomly post-processed and quadrant
/// post-processed classifiers, plus each variant's weighted-cost gap.
struct MitigationReport {
  std::array<std::vector<GroupStats>, 3> variants;  // before, random, quadrant
  std::array<double, 3> cost_gap{0.0, 0.0, 0.0};

  nlohmann::json to_json(const Dataset& d, const ProtectedSpec& spec) const;
  std::string to_csv(const Dataset& d, const ProtectedSpec& spec) const;
};

MitigationReport mitigation_report(const std::vector<GroupStats>& before,
                                   const std::vector<GroupStats>& after_random,
                                   const std::vector<GroupStats>& after_quadrant,
                                   const CostSpec& cost);

/// |g_a - g_b| over the first two groups.
double cost_gap(const std::vector<GroupStats>& stats, const CostSpec& cost);

struct MitigationInputs {
  std::vector<double> scores;            // h(x) in [0,1]
  std::vector<int> labels;
  std::vector<double> protected_values;  // A per row
  std::vector<double> phi_protected;     // raw-space phi_A per row
  std::vector<double> raw;               // raw score behind phi_A
  Link link = Link::logistic;
};

struct MitigationOutcome {
  MitigationResult random;
  MitigationResult quadrant;
  MitigationReport report;
  std::vector<QuadrantPoint> points;  // modified group, for scatter plots
};

/// Full post-processing run on a binary protected attribute. The group with
/// the lower weighted cost is modified; its target is the other group's
/// cost. Both selection methods use the same alpha.
MitigationOutcome run_mitigation(const MitigationInputs& in, const ProtectedSpec& spec,
                                 const CostSpec& cost, DistanceFn kind, std::uint64_t seed);

/// Plot data: row_id, shap, pred, quadrant, selected_random,
/// selected_quadrant for every row of the modified group.
std::string scatter_csv(const MitigationOutcome& m);

}  // namespace shapfair

#endif  // SHAPFAIR_MITIGATE_HPP
