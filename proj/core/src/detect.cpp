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
#include "shapfair/detect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"

namespace shapfair {
namespace {

std::string outcome_name(std::optional<int> outcome) {
  return outcome ? "Y=" + std::to_string(*outcome) : "any outcome";
}

void check_shape(const ShapMatrix& s, const Dataset& d) {
  if (s.n_rows() != d.n_rows() || s.n_features() != d.n_features()) {
    throw ValidationError("attribution matrix does not match the dataset shape");
  }
}

}  // namespace

GroupSlice make_slice(const ShapMatrix& s, const Dataset& d, const ProtectedSpec& spec,
                      double group, std::optional<int> outcome) {
  check_shape(s, d);
  const std::size_t col = d.column_index(spec.column);
  GroupSlice slice{group, outcome, {}};
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    if (d.features(r, col) != group) continue;
    if (outcome && d.label[r] != *outcome) continue;
    slice.phi_values.push_back(s.phi(r, col));
  }
  if (slice.phi_values.empty()) {
    throw ValidationError("empty slice: group '" + d.encoding.decode(spec.column, group) +
                          "' has no rows with " + outcome_name(outcome));
  }
  return slice;
}

double demographic_parity_score(const ShapMatrix& s, const Dataset& d,
                                const ProtectedSpec& spec) {
  check_shape(s, d);
  const std::size_t col = d.column_index(spec.column);
  double acc = 0.0;
  for (std::size_t r = 0; r < s.n_rows(); ++r) acc += std::abs(s.phi(r, col));
  return acc / static_cast<double>(s.n_rows());
}

std::vector<PairDistance> pairwise_distances(const ShapMatrix& s, const Dataset& d,
                                             const ProtectedSpec& spec, int outcome,
                                             const DistanceConfig& cfg) {
  std::vector<GroupSlice> slices;
  for (double g : spec.groups) slices.push_back(make_slice(s, d, spec, g, outcome));
  std::vector<PairDistance> out;
  for (std::size_t a = 0; a < slices.size(); ++a) {
    for (std::size_t b = a + 1; b < slices.size(); ++b) {
      out.push_back({slices[a].group, slices[b].group, slices[a].phi_values.size(),
                     slices[b].phi_values.size(),
                     distance(slices[a].phi_values, slices[b].phi_values, cfg)});
    }
  }
  return out;
}

namespace {

double max_pair(const std::vector<PairDistance>& pairs) {
  double best = 0.0;
  for (const auto& p : pairs) best = std::max(best, p.value);
  return best;
}

}  // namespace

double equality_of_opportunity_score(const ShapMatrix& s, const Dataset& d,
                                     const ProtectedSpec& spec, const DistanceConfig& cfg) {
  return max_pair(pairwise_distances(s, d, spec, spec.favorable_outcome, cfg));
}

std::array<double, 2> equalized_odds_score(const ShapMatrix& s, const Dataset& d,
                                           const ProtectedSpec& spec,
                                           const DistanceConfig& cfg) {
  return {max_pair(pairwise_distances(s, d, spec, 0, cfg)),
          max_pair(pairwise_distances(s, d, spec, 1, cfg))};
}

CriterionValues evaluate_criteria(const ShapMatrix& s, const Dataset& d,
                                  const ProtectedSpec& spec, const DistanceConfig& cfg) {
  CriterionValues v;
  v.demographic_parity = demographic_parity_score(s, d, spec);
  v.equalized_odds = equalized_odds_score(s, d, spec, cfg);
  v.equality_of_opportunity = v.equalized_odds[static_cast<std::size_t>(spec.favorable_outcome)];
  return v;
}

ExplainedModel fit_and_explain(const Dataset& d, std::span<const double> targets,
                               Objective objective, const PipelineConfig& config,
                               std::uint64_t seed) {
  auto model = train_gbdt(d, targets, objective, config.params, seed);
  ValueFunctionConfig vf{d.features, config.max_background, config.shap_seed};
  auto shap = tree_shap(model, d.features, vf);
  return {std::move(model), std::move(shap)};
}

BaselineStats BaselineStats::from_values(std::vector<double> values) {
  BaselineStats s;
  if (!values.empty()) {
    double acc = 0.0;
    for (double v : values) acc += v;
    s.mean = acc / static_cast<double>(values.size());
    s.max = *std::max_element(values.begin(), values.end());
  }
  s.values = std::move(values);
  return s;
}

BaselineResult randomized_baseline(const Dataset& d, const ProtectedSpec& spec,
                                   std::span<const double> targets, Objective objective,
                                   const PipelineConfig& config, int k,
                                   std::uint64_t seed) {
  if (k < 1) throw ValidationError("baseline needs at least one permutation");
  BaselineResult result;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t run_seed = seed + static_cast<std::uint64_t>(i);
    try {
      const Dataset permuted = permute_protected(d, spec, run_seed);
      const auto fit = fit_and_explain(permuted, targets, objective, config, run_seed);
      result.runs.push_back(evaluate_criteria(fit.shap, permuted, spec, config.distance));
      const std::size_t col = permuted.column_index(spec.column);
      result.permuted_protected.push_back(permuted.features.column(col));
      result.phi_protected.push_back(fit.shap.feature(col));
    } catch (const Error& e) {
      throw TrainingError("baseline permutation " + std::to_string(i) + ": " + e.what());
    }
  }
  std::vector<double> dp, eopp, eodds0, eodds1;
  for (const auto& r : result.runs) {
    dp.push_back(r.demographic_parity);
    eopp.push_back(r.equality_of_opportunity);
    eodds0.push_back(r.equalized_odds[0]);
    eodds1.push_back(r.equalized_odds[1]);
  }
  result.demographic_parity = BaselineStats::from_values(std::move(dp));
  result.equality_of_opportunity = BaselineStats::from_values(std::move(eopp));
  result.equalized_odds = {BaselineStats::from_values(std::move(eodds0)),
                           BaselineStats::from_values(std::move(eodds1))};
  return result;
}

std::string to_string(Verdict v) {
  return v == Verdict::violation ? "violation" : "no_evidence";
}

double baseline_ratio(double metric, const BaselineStats& baseline, const VerdictRule& rule) {
  return metric / std::max(baseline.mean, rule.floor);
}

Verdict verdict(double metric, const BaselineStats& baseline, const VerdictRule& rule) {
  return metric > rule.ratio_threshold * std::max(baseline.mean, rule.floor)
             ? Verdict::violation
             : Verdict::no_evidence;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::demographic_parity: return "demographic_parity";
    case Criterion::equality_of_opportunity: return "equality_of_opportunity";
    case Criterion::equalized_odds: return "equalized_odds";
  }
  return "unknown";
}

nlohmann::json FairnessReport::to_json(const Dataset& d, const ProtectedSpec& spec) const {
  nlohmann::json baselines = nlohmann::json::array();
  for (const auto& b : baseline) {
    baselines.push_back({{"mean", b.mean}, {"max", b.max}, {"values", b.values}});
  }
  nlohmann::json sl = nlohmann::json::array();
  for (const auto& s : slices) {
    sl.push_back({{"group", d.encoding.decode(spec.column, s.group)},
                  {"outcome", s.outcome ? nlohmann::json(*s.outcome) : nlohmann::json("any")},
                  {"count", s.count}});
  }
  nlohmann::json j = {{"criterion", to_string(criterion)},
                      {"distance_kind", to_string(distance_kind)},
                      {"statistic", criterion == Criterion::demographic_parity
                                        ? "mean_abs_phi"
                                        : "group_distance"},
                      {"verdict", to_string(verdict)},
                      {"slices", std::move(sl)}};
  nlohmann::json unfloored = nlohmann::json::array();
  for (std::size_t i = 0; i < metric.size(); ++i) {
    unfloored.push_back(baseline[i].mean > 0.0 ? nlohmann::json(metric[i] / baseline[i].mean)
                                                : nlohmann::json(nullptr));
  }
  if (metric.size() == 1) {
    j["metric"] = metric[0];
    j["baseline"] = baselines[0];
    j["ratio"] = ratio[0];
    j["unfloored_ratio"] = unfloored[0];
  } else {
    j["outcomes"] = {0, 1};
    j["metric"] = metric;
    j["baseline"] = baselines;
    j["ratio"] = ratio;
    j["unfloored_ratio"] = std::move(unfloored);
  }
  return j;
}

std::vector<FairnessReport> build_reports(const ShapMatrix& s, const Dataset& d,
                                          const ProtectedSpec& spec,
                                          const BaselineResult& baseline,
                                          const DistanceConfig& cfg, const VerdictRule& rule) {
  const auto values = evaluate_criteria(s, d, spec, cfg);
  const std::size_t col = d.column_index(spec.column);

  auto count_slice = [&](double g, std::optional<int> y) {
    SliceCount c{g, y, 0};
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      if (d.features(r, col) == g && (!y || d.label[r] == *y)) ++c.count;
    }
    return c;
  };
  auto finish = [&](FairnessReport& rep) {
    rep.verdict = Verdict::no_evidence;
    for (std::size_t i = 0; i < rep.metric.size(); ++i) {
      rep.ratio.push_back(baseline_ratio(rep.metric[i], rep.baseline[i], rule));
      if (verdict(rep.metric[i], rep.baseline[i], rule) == Verdict::violation) {
        rep.verdict = Verdict::violation;
      }
    }
  };

  std::vector<FairnessReport> out;
  FairnessReport dp;
  dp.criterion = Criterion::demographic_parity;
  dp.distance_kind = cfg.kind;
  dp.metric = {values.demographic_parity};
  dp.baseline = {baseline.demographic_parity};
  for (double g : spec.groups) dp.slices.push_back(count_slice(g, std::nullopt));
  finish(dp);
  out.push_back(std::move(dp));

  FairnessReport eopp;
  eopp.criterion = Criterion::equality_of_opportunity;
  eopp.distance_kind = cfg.kind;
  eopp.metric = {values.equality_of_opportunity};
  eopp.baseline = {baseline.equality_of_opportunity};
  for (double g : spec.groups) eopp.slices.push_back(count_slice(g, spec.favorable_outcome));
  finish(eopp);
  out.push_back(std::move(eopp));

  FairnessReport eodds;
  eodds.criterion = Criterion::equalized_odds;
  eodds.distance_kind = cfg.kind;
  eodds.metric = {values.equalized_odds[0], values.equalized_odds[1]};
  eodds.baseline = {baseline.equalized_odds[0], baseline.equalized_odds[1]};
  for (int y : {0, 1}) {
    for (double g : spec.groups) eodds.slices.push_back(count_slice(g, y));
  }
  finish(eodds);
  out.push_back(std::move(eodds));
  return out;
}

std::string histogram_csv(const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& series, int n_bins) {
  if (n_bins < 1) throw ValidationError("histogram needs n_bins >= 1");
  if (names.size() != series.size()) throw ValidationError("histogram name/series mismatch");
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (double v : s) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const auto bins = static_cast<std::size_t>(n_bins);
  std::vector<std::vector<std::size_t>> counts(series.size(), std::vector<std::size_t>(bins, 0));
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (double v : series[k]) {
      auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      ++counts[k][std::min(b, bins - 1)];
    }
  }
  std::ostringstream out;
  csv::Record header{"bin_lower", "bin_upper"};
  header.insert(header.end(), names.begin(), names.end());
  csv::write_record(out, header);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    csv::Record rec{csv::format_double(lo + width * static_cast<double>(b)),
                    csv::format_double(b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1))};
    for (const auto& c : counts) rec.push_back(std::to_string(c[b]));
    csv::write_record(out, rec);
  }
  return out.str();
}

}  // namespace shapfair
