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
#include "shapfair/mitigate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"
#include "shapfair/random.hpp"

namespace shapfair {

void CostSpec::validate() const {
  if (w_fp < 0.0 || w_fn < 0.0 || !(w_fp + w_fn > 0.0)) {
    throw ValidationError("cost weights must be non-negative with a positive sum");
  }
}

std::vector<GroupStats> group_stats(std::span<const double> scores, std::span<const int> labels,
                                    std::span<const double> protected_values,
                                    const ProtectedSpec& spec) {
  if (scores.size() != labels.size() || scores.size() != protected_values.size()) {
    throw ValidationError("group_stats: input lengths differ");
  }
  std::vector<GroupStats> out;
  for (double g : spec.groups) {
    GroupStats s;
    s.group = g;
    std::size_t n_pos = 0, n_neg = 0, correct = 0;
    double fp = 0.0, fn = 0.0, score_sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (protected_values[i] != g) continue;
      ++s.count;
      score_sum += scores[i];
      if (labels[i] == 1) {
        ++n_pos;
        fn += 1.0 - scores[i];
      } else {
        ++n_neg;
        fp += scores[i];
      }
      correct += (scores[i] >= 0.5) == (labels[i] == 1);
    }
    if (n_pos == 0 || n_neg == 0) {
      std::ostringstream msg;
      msg << "group " << csv::format_double(g) << " has only "
          << (n_pos == 0 ? "negative" : "positive") << " outcomes (" << s.count << " rows)";
      throw ValidationError(msg.str());
    }
    const double n = static_cast<double>(s.count);
    s.base_rate = static_cast<double>(n_pos) / n;
    s.fp_cost = fp / static_cast<double>(n_neg);
    s.fn_cost = fn / static_cast<double>(n_pos);
    s.accuracy = static_cast<double>(correct) / n;
    s.avg_score = score_sum / n;
    out.push_back(s);
  }
  return out;
}

double compute_alpha(double cost_h, double cost_base, double target) {
  constexpr double kTol = 1e-12;
  const double lo = std::min(cost_h, cost_base);
  const double hi = std::max(cost_h, cost_base);
  if (target < lo - kTol || target > hi + kTol) {
    throw InfeasibleError("target cost " + csv::format_double(target) +
                              " is not reachable by mixing classifier cost " +
                              csv::format_double(cost_h) + " with base-rate cost " +
                              csv::format_double(cost_base),
                          cost_h, target);
  }
  if (hi - lo <= kTol) return 0.0;
  return std::clamp((target - cost_h) / (cost_base - cost_h), 0.0, 1.0);
}

double compute_alpha(const GroupStats& low, double target, const CostSpec& cost) {
  return compute_alpha(low.weighted_cost(cost), cost.of_base_rate(low.base_rate), target);
}

std::size_t selection_size(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0,1]");
  return std::min(n, round_count(alpha * static_cast<double>(n)));
}

std::vector<std::size_t> random_select(std::span<const std::size_t> group_rows, double alpha,
                                       std::uint64_t seed) {
  const std::size_t k = selection_size(alpha, group_rows.size());
  auto rng = make_rng(seed);
  std::vector<std::size_t> out;
  for (auto i : sample_without_replacement(group_rows.size(), k, rng)) out.push_back(group_rows[i]);
  std::sort(out.begin(), out.end());
  return out;
}

int quadrant_of(double shap, double pred, double mu) {
  const bool positive = shap > 0.0;
  const bool high = pred > mu;
  if (high) return positive ? 1 : 2;
  return positive ? 4 : 3;
}

std::string to_string(DistanceFn f) {
  return f == DistanceFn::shap_only ? "shap_only" : "non_protected";
}

DistanceFn distance_fn_from_string(const std::string& s) {
  if (s == "shap_only") return DistanceFn::shap_only;
  if (s == "non_protected") return DistanceFn::non_protected;
  throw SchemaError("unknown selection distance '" + s + "' (expected shap_only or non_protected)");
}

double point_distance(const QuadrantPoint& p, DistanceFn kind, double mu, Link link) {
  switch (kind) {
    case DistanceFn::shap_only:
      return std::abs(p.shap);
    case DistanceFn::non_protected: {
      const double contribution = apply_link(link, p.raw) - apply_link(link, p.raw - p.shap);
      return std::abs((p.pred - mu) - contribution);
    }
  }
  throw SchemaError("unknown selection distance");
}

std::vector<QuadrantPoint> make_points(std::span<const std::size_t> rows,
                                       std::span<const double> shap,
                                       std::span<const double> pred,
                                       std::span<const double> raw, double mu,
                                       DistanceFn kind, Link link) {
  std::vector<QuadrantPoint> out;
  out.reserve(rows.size());
  for (auto r : rows) {
    QuadrantPoint p{r, shap[r], pred[r], raw[r], 0, 0.0};
    p.quadrant = quadrant_of(p.shap, p.pred, mu);
    p.distance = point_distance(p, kind, mu, link);
    out.push_back(p);
  }
  return out;
}

std::array<std::vector<std::size_t>, 4> quadrant_partition(
    std::span<const QuadrantPoint> points, double mu) {
  std::array<std::vector<std::size_t>, 4> out;
  for (const auto& p : points) {
    out[static_cast<std::size_t>(quadrant_of(p.shap, p.pred, mu) - 1)].push_back(p.row);
  }
  for (auto& q : out) std::sort(q.begin(), q.end());
  return out;
}

std::vector<std::size_t> find_individuals(std::span<const QuadrantPoint> points, double alpha) {
  const std::size_t n = selection_size(alpha, points.size());
  std::vector<const QuadrantPoint*> affected, unaffected;
  for (const auto& p : points) {
    (p.quadrant == 1 || p.quadrant == 3 ? affected : unaffected).push_back(&p);
  }
  std::sort(affected.begin(), affected.end(), [](auto* a, auto* b) {
    return a->distance != b->distance ? a->distance > b->distance : a->row < b->row;
  });
  std::sort(unaffected.begin(), unaffected.end(), [](auto* a, auto* b) {
    return a->distance != b->distance ? a->distance < b->distance : a->row < b->row;
  });
  std::vector<std::size_t> out;
  out.reserve(n);
  for (auto* p : affected) {
    if (out.size() == n) break;
    out.push_back(p->row);
  }
  for (auto* p : unaffected) {
    if (out.size() == n) break;
    out.push_back(p->row);
  }
  return out;
}

std::vector<std::size_t> find_individuals(std::span<const double> shap,
                                          std::span<const double> pred,
                                          std::span<const double> raw, double alpha,
                                          double mu, DistanceFn kind, Link link) {
  std::vector<std::size_t> rows(shap.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const auto points = make_points(rows, shap, pred, raw, mu, kind, link);
  return find_individuals(points, alpha);
}

bool satisfies_dominance(std::span<const QuadrantPoint> points,
                         std::span<const std::size_t> selected) {
  const std::unordered_set<std::size_t> chosen(selected.begin(), selected.end());
  constexpr double inf = std::numeric_limits<double>::infinity();
  double far_min_sel = inf, far_max_unsel = -inf;
  double near_max_sel = -inf, near_min_unsel = inf;
  for (const auto& p : points) {
    const bool sel = chosen.count(p.row) > 0;
    if (p.quadrant == 1 || p.quadrant == 3) {
      if (sel) far_min_sel = std::min(far_min_sel, p.distance);
      else far_max_unsel = std::max(far_max_unsel, p.distance);
    } else {
      if (sel) near_max_sel = std::max(near_max_sel, p.distance);
      else near_min_unsel = std::min(near_min_unsel, p.distance);
    }
  }
  return far_min_sel >= far_max_unsel && near_max_sel <= near_min_unsel;
}

std::vector<double> apply_mitigation(std::span<const double> scores,
                                     std::span<const std::size_t> selected,
                                     std::span<const std::size_t> group_rows, double mu) {
  const std::set<std::size_t> group(group_rows.begin(), group_rows.end());
  std::vector<double> out(scores.begin(), scores.end());
  for (auto r : selected) {
    if (r >= out.size() || !group.contains(r)) {
      throw ValidationError("selected row " + std::to_string(r) + " is outside the modified group");
    }
    out[r] = mu;
  }
  return out;
}

std::string to_string(SelectionMethod m) {
  return m == SelectionMethod::random ? "random" : "quadrant";
}

double cost_gap(const std::vector<GroupStats>& stats, const CostSpec& cost) {
  if (stats.size() < 2) return 0.0;
  return std::abs(stats[0].weighted_cost(cost) - stats[1].weighted_cost(cost));
}

namespace {

nlohmann::json stats_json(const std::vector<GroupStats>& stats, const Dataset& d,
                          const ProtectedSpec& spec, const CostSpec& cost) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : stats) {
    out.push_back({{"group", d.encoding.decode(spec.column, s.group)},
                   {"count", s.count},
                   {"accuracy", s.accuracy},
                   {"fp_cost", s.fp_cost},
                   {"fn_cost", s.fn_cost},
                   {"base_rate", s.base_rate},
                   {"avg_score", s.avg_score},
                   {"weighted_cost", s.weighted_cost(cost)}});
  }
  return out;
}

constexpr std::array<const char*, 3> kVariantNames{"before", "random", "quadrant"};

}  // namespace

nlohmann::json MitigationResult::to_json(const Dataset& d, const ProtectedSpec& spec) const {
  return {{"method", to_string(method)},
          {"cost_weights", {{"w_fp", cost.w_fp}, {"w_fn", cost.w_fn}}},
          {"modified_group", d.encoding.decode(spec.column, modified_group)},
          {"alpha", alpha},
          {"target_cost", target_cost},
          {"n_modified", modified_indices.size()},
          {"modified_indices", modified_indices},
          {"per_group_stats_before", stats_json(before, d, spec, cost)},
          {"per_group_stats_after", stats_json(after, d, spec, cost)},
          {"cost_gap_before", cost_gap_before},
          {"cost_gap_after", cost_gap_after}};
}

MitigationReport mitigation_report(const std::vector<GroupStats>& before,
                                   const std::vector<GroupStats>& after_random,
                                   const std::vector<GroupStats>& after_quadrant,
                                   const CostSpec& cost) {
  MitigationReport r;
  r.variants = {before, after_random, after_quadrant};
  for (std::size_t v = 0; v < 3; ++v) r.cost_gap[v] = cost_gap(r.variants[v], cost);
  return r;
}

nlohmann::json MitigationReport::to_json(const Dataset& d, const ProtectedSpec& spec) const {
  nlohmann::json rows = nlohmann::json::array();
  const std::array<std::pair<const char*, double GroupStats::*>, 5> metrics{{
      {"accuracy", &GroupStats::accuracy},
      {"fp_cost", &GroupStats::fp_cost},
      {"fn_cost", &GroupStats::fn_cost},
      {"base_rate", &GroupStats::base_rate},
      {"avg_score", &GroupStats::avg_score},
  }};
  for (const auto& [name, field] : metrics) {
    nlohmann::json row = {{"metric", name}};
    for (std::size_t v = 0; v < 3; ++v) {
      nlohmann::json cells = nlohmann::json::object();
      for (const auto& s : variants[v]) cells[d.encoding.decode(spec.column, s.group)] = s.*field;
      row[kVariantNames[v]] = std::move(cells);
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json gaps = nlohmann::json::object();
  for (std::size_t v = 0; v < 3; ++v) gaps[kVariantNames[v]] = cost_gap[v];
  return {{"rows", std::move(rows)}, {"cost_gap", std::move(gaps)}};
}

std::string MitigationReport::to_csv(const Dataset& d, const ProtectedSpec& spec) const {
  std::ostringstream out;
  csv::Record header{"metric"};
  for (std::size_t v = 0; v < 3; ++v) {
    for (const auto& s : variants[v]) {
      header.push_back(std::string(kVariantNames[v]) + ":" + d.encoding.decode(spec.column, s.group));
    }
  }
  csv::write_record(out, header);
  const std::array<std::pair<const char*, double GroupStats::*>, 5> metrics{{
      {"accuracy", &GroupStats::accuracy},
      {"fp_cost", &GroupStats::fp_cost},
      {"fn_cost", &GroupStats::fn_cost},
      {"base_rate", &GroupStats::base_rate},
      {"avg_score", &GroupStats::avg_score},
  }};
  for (const auto& [name, field] : metrics) {
    csv::Record rec{name};
    for (std::size_t v = 0; v < 3; ++v) {
      for (const auto& s : variants[v]) rec.push_back(csv::format_double(s.*field));
    }
    csv::write_record(out, rec);
  }
  csv::Record gap{"cost_gap"};
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t g = 0; g < variants[v].size(); ++g) {
      gap.push_back(g == 0 ? csv::format_double(cost_gap[v]) : "");
    }
  }
  csv::write_record(out, gap);
  return out.str();
}

MitigationOutcome run_mitigation(const MitigationInputs& in, const ProtectedSpec& spec,
                                 const CostSpec& cost, DistanceFn kind, std::uint64_t seed) {
  cost.validate();
  if (spec.groups.size() != 2) {
    throw ValidationError("mitigation requires a binary protected attribute (got " +
                          std::to_string(spec.groups.size()) + " groups)");
  }
  const std::size_t n = in.scores.size();
  if (in.labels.size() != n || in.protected_values.size() != n ||
      in.phi_protected.size() != n || in.raw.size() != n) {
    throw ValidationError("mitigation inputs differ in length");
  }

  const auto before = group_stats(in.scores, in.labels, in.protected_values, spec);
  const double g0 = before[0].weighted_cost(cost);
  const double g1 = before[1].weighted_cost(cost);
  const std::size_t t = g0 <= g1 ? 0 : 1;
  const GroupStats& low = before[t];
  const double target = std::max(g0, g1);
  const double alpha = compute_alpha(low, target, cost);

  std::vector<std::size_t> group_rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (in.protected_values[i] == low.group) group_rows.push_back(i);
  }
  const double mu = low.base_rate;

  MitigationOutcome out;
  out.points = make_points(group_rows, in.phi_protected, in.scores, in.raw, mu, kind, in.link);

  auto finish = [&](SelectionMethod method, std::vector<std::size_t> selected) {
    MitigationResult r;
    r.method = method;
    r.modified_group = low.group;
    r.alpha = alpha;
    r.target_cost = target;
    r.cost = cost;
    std::sort(selected.begin(), selected.end());
    r.new_scores = apply_mitigation(in.scores, selected, group_rows, mu);
    r.modified_indices = std::move(selected);
    r.before = before;
    r.after = group_stats(r.new_scores, in.labels, in.protected_values, spec);
    r.cost_gap_before = cost_gap(before, cost);
    r.cost_gap_after = cost_gap(r.after, cost);
    return r;
  };
  out.random = finish(SelectionMethod::random, random_select(group_rows, alpha, seed));
  out.quadrant = finish(SelectionMethod::quadrant, find_individuals(out.points, alpha));
  out.report = mitigation_report(before, out.random.after, out.quadrant.after, cost);
  return out;
}

std::string scatter_csv(const MitigationOutcome& m) {
  const std::set<std::size_t> random(m.random.modified_indices.begin(),
                                     m.random.modified_indices.end());
  const std::set<std::size_t> quadrant(m.quadrant.modified_indices.begin(),
                                       m.quadrant.modified_indices.end());
  std::ostringstream out;
  csv::write_record(out, {"row_id", "shap", "pred", "quadrant", "selected_random",
                          "selected_quadrant"});
  for (const auto& p : m.points) {
    csv::write_record(out, {std::to_string(p.row), csv::format_double(p.shap),
                            csv::format_double(p.pred), std::to_string(p.quadrant),
                            random.contains(p.row) ? "1" : "0",
                            quadrant.contains(p.row) ? "1" : "0"});
  }
  return out.str();
}

}  // namespace shapfair
