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
#include "app/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "app/artifacts.hpp"
#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"
#include "shapfair/metrics.hpp"
#include "shapfair/mitigate.hpp"

namespace shapfair::app {
namespace {

std::vector<double> protected_column(const Dataset& d, const ProtectedSpec& spec) {
  return d.features.column(d.column_index(spec.column));
}

nlohmann::json model_block(const AuditConfig& config, const PreparedModel& pm) {
  nlohmann::json j = {{"mode", to_string(config.mode)},
                      {"objective", to_string(pm.objective)},
                      {"n_trees", pm.fit.model.trees().size()},
                      {"params", to_json(config.mimic)},
                      {"shap_in_sample", true}};
  const auto pred = pm.fit.shap.predictions();
  try {
    j["auc_vs_labels"] = auc(pred, pm.data.label);
    if (config.mode != Mode::whitebox) j["oracle_auc_vs_labels"] = auc(pm.scores, pm.data.label);
  } catch (const ValidationError&) {
    j["auc_vs_labels"] = nullptr;
  }
  if (pm.fidelity) {
    j["fidelity"] = {{"metric", pm.fidelity->metric}, {"value", pm.fidelity->value}};
  }
  return j;
}

nlohmann::json stats_json(const BaselineStats& s) {
  return {{"mean", s.mean}, {"max", s.max}, {"values", s.values}};
}

std::string series_name(const std::string& source, const Dataset& d, const ProtectedSpec& spec,
                        double group) {
  return source + ":" + d.encoding.decode(spec.column, group);
}

// phi_A values of rows with A == group (and Y == outcome when set).
std::vector<double> select(const std::vector<double>& phi, const std::vector<double>& a,
                           const std::vector<int>& y, double group, std::optional<int> outcome) {
  std::vector<double> out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (a[i] == group && (!outcome || y[i] == *outcome)) out.push_back(phi[i]);
  }
  return out;
}

void write_histograms(ArtifactWriter& w, const AuditConfig& config, const PreparedModel& pm,
                      const BaselineResult& baseline) {
  const std::size_t col = pm.data.column_index(pm.spec.column);
  const auto phi = pm.fit.shap.feature(col);
  const auto a = protected_column(pm.data, pm.spec);
  const auto& rand_phi = baseline.phi_protected.front();
  const auto& rand_a = baseline.permuted_protected.front();
  const auto& y = pm.data.label;

  auto figure = [&](const std::string& file, std::optional<int> outcome) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (double g : pm.spec.groups) {
      names.push_back(series_name("attribute", pm.data, pm.spec, g));
      series.push_back(select(phi, a, y, g, outcome));
    }
    for (double g : pm.spec.groups) {
      names.push_back(series_name("randomized", pm.data, pm.spec, g));
      series.push_back(select(rand_phi, rand_a, y, g, outcome));
    }
    w.write_csv(file, histogram_csv(names, series, config.histogram_bins));
  };
  figure("hist_demographic_parity.csv", std::nullopt);
  figure("hist_equality_of_opportunity.csv", pm.spec.favorable_outcome);
  figure("hist_equalized_odds_y0.csv", 0);
  figure("hist_equalized_odds_y1.csv", 1);
}

}  // namespace

PipelineConfig pipeline_config(const AuditConfig& config) {
  PipelineConfig p;
  p.params = config.mimic;
  p.max_background = config.max_background;
  p.shap_seed = config.seed;
  p.distance = config.distance;
  return p;
}

PreparedModel prepare_model(const AuditConfig& config, std::ostream& log) {
  PreparedModel pm;
  log << "loading " << config.data_path.string() << "\n";
  pm.data = load_csv(config.data_path.string(), config.schema());
  pm.spec = make_protected_spec(pm.data, config.protected_column, config.groups,
                                config.favorable_outcome);
  const auto pipeline = pipeline_config(config);

  if (config.mode == Mode::whitebox) {
    pm.targets.assign(pm.data.label.begin(), pm.data.label.end());
    pm.objective = Objective::logistic;
    log << "training model on labels (" << pm.data.n_rows() << " rows)\n";
    pm.fit = fit_and_explain(pm.data, pm.targets, pm.objective, pipeline, config.seed);
    pm.scores = pm.fit.shap.predictions();
    return pm;
  }

  std::unique_ptr<BlackBoxOracle> oracle;
  if (config.mode == Mode::blackbox_column) {
    oracle = std::make_unique<ScoreColumnOracle>();
  } else {
    oracle = std::make_unique<SubprocessOracle>(config.oracle_command, config.oracle_batch_size);
  }
  log << "querying black box for " << pm.data.n_rows() << " rows\n";
  auto distilled = distill(*oracle, pm.data, config.mimic, config.seed);
  pm.targets = distilled.oracle_scores;
  pm.scores = distilled.oracle_scores;
  pm.objective = distilled.objective;
  pm.fidelity = distilled.fidelity;
  log << "mimic fidelity " << distilled.fidelity.metric << " = " << distilled.fidelity.value << "\n";
  ValueFunctionConfig vf{pm.data.features, pipeline.max_background, pipeline.shap_seed};
  auto shap = tree_shap(distilled.mimic, pm.data.features, vf);
  pm.fit = ExplainedModel{std::move(distilled.mimic), std::move(shap)};
  return pm;
}

int cmd_audit(const AuditConfig& config, std::ostream& log) {
  const auto pm = prepare_model(config, log);
  const auto pipeline = pipeline_config(config);
  log << "randomized baseline over " << config.permutations << " permutation(s)\n";
  const auto baseline = randomized_baseline(pm.data, pm.spec, pm.targets, pm.objective, pipeline,
                                            config.permutations, config.seed);
  const auto reports =
      build_reports(pm.fit.shap, pm.data, pm.spec, baseline, config.distance, config.verdict);

  ArtifactWriter w(config, "audit");
  bool violation = false;
  nlohmann::json jreports = nlohmann::json::array();
  for (const auto& r : reports) {
    violation |= r.verdict == Verdict::violation;
    jreports.push_back(r.to_json(pm.data, pm.spec));
  }
  nlohmann::json groups = nlohmann::json::array();
  for (double g : pm.spec.groups) groups.push_back(pm.data.encoding.decode(pm.spec.column, g));

  w.write_json("audit_report.json",
               {{"kind", "fairness_audit"},
                {"protected", {{"column", pm.spec.column},
                               {"groups", groups},
                               {"favorable_outcome", pm.spec.favorable_outcome}}},
                {"n_rows", pm.data.n_rows()},
                {"model", model_block(config, pm)},
                {"shap",
                 {{"phi0", pm.fit.shap.phi0},
                  {"space", pm.fit.shap.link == Link::logistic ? "log_odds" : "identity"},
                  {"background_rows", std::min(config.max_background, pm.data.n_rows())},
                  {"max_additivity_residual", additivity_check(pm.fit.shap)}}},
                {"verdict_rule", {{"ratio_threshold", config.verdict.ratio_threshold},
                                  {"floor", config.verdict.floor}}},
                {"permutations", config.permutations},
                {"reports", std::move(jreports)},
                {"overall_verdict", violation ? "violation" : "no_evidence"}});
  w.write_csv("shap_values.csv", shap_to_csv(pm.fit.shap, pm.data.column_names));
  w.write_json("shap_summary.json", shap_summary_json(pm.fit.shap, pm.data.column_names));
  w.write_json("model.json", pm.fit.model.to_json());
  w.write_json("encoding.json", {{"kind", "encoding"}, {"columns", pm.data.encoding.to_json()}});
  write_histograms(w, config, pm, baseline);

  for (const auto& r : reports) {
    log << std::left << std::setw(26) << to_string(r.criterion);
    for (std::size_t i = 0; i < r.metric.size(); ++i) {
      if (r.metric.size() > 1) log << " Y=" << i << ":";
      log << " metric=" << r.metric[i] << " baseline=" << r.baseline[i].mean
          << " ratio=" << r.ratio[i];
    }
    log << " -> " << to_string(r.verdict) << "\n";
  }
  return violation ? kExitViolation : kExitOk;
}

int cmd_baseline(const AuditConfig& config, std::ostream& log) {
  const auto pm = prepare_model(config, log);
  log << "randomized baseline over " << config.permutations << " permutation(s)\n";
  const auto b = randomized_baseline(pm.data, pm.spec, pm.targets, pm.objective,
                                     pipeline_config(config), config.permutations, config.seed);
  ArtifactWriter w(config, "baseline");
  auto common = [&](const char* criterion) {
    return nlohmann::json{{"kind", "baseline"},
                          {"criterion", criterion},
                          {"distance_kind", to_string(config.distance.kind)},
                          {"permutations", config.permutations},
                          {"seed", config.seed}};
  };
  auto dp = common("demographic_parity");
  dp["statistic"] = "mean_abs_phi";
  dp["baseline"] = stats_json(b.demographic_parity);
  w.write_json("baseline_demographic_parity.json", std::move(dp));

  auto eopp = common("equality_of_opportunity");
  eopp["outcome"] = pm.spec.favorable_outcome;
  eopp["baseline"] = stats_json(b.equality_of_opportunity);
  w.write_json("baseline_equality_of_opportunity.json", std::move(eopp));

  auto eodds = common("equalized_odds");
  eodds["outcomes"] = {0, 1};
  eodds["baseline"] = {stats_json(b.equalized_odds[0]), stats_json(b.equalized_odds[1])};
  w.write_json("baseline_equalized_odds.json", std::move(eodds));
  return kExitOk;
}

int cmd_mitigate(const AuditConfig& config, std::ostream& log) {
  const auto pm = prepare_model(config, log);
  if (pm.spec.groups.size() != 2) {
    throw ValidationError("mitigation requires a binary protected attribute");
  }
  const auto table = calibration_table(pm.scores, pm.data.label, config.calibration_bins);
  const double gap = max_calibration_gap(table, config.calibration_min_count);
  if (gap > config.calibration_tolerance) {
    log << "warning: classifier looks miscalibrated (max per-bin gap " << gap << " > "
        << config.calibration_tolerance << "); proceeding\n";
  }

  MitigationInputs in;
  in.scores = pm.scores;
  in.labels = pm.data.label;
  in.protected_values = protected_column(pm.data, pm.spec);
  in.phi_protected = pm.fit.shap.feature(pm.data.column_index(pm.spec.column));
  in.raw = pm.fit.shap.model_scores;
  in.link = pm.fit.shap.link;
  const auto outcome =
      run_mitigation(in, pm.spec, config.cost, config.selection_distance, config.seed);

  ArtifactWriter w(config, "mitigate");
  nlohmann::json calib = nlohmann::json::array();
  for (const auto& b : table) {
    calib.push_back({{"lower", b.lower},
                     {"upper", b.upper},
                     {"mean_score", b.mean_score},
                     {"positive_rate", b.positive_rate},
                     {"count", b.count}});
  }
  w.write_json("calibration.json", {{"kind", "calibration"},
                                    {"bins", std::move(calib)},
                                    {"max_gap", gap},
                                    {"min_count", config.calibration_min_count},
                                    {"tolerance", config.calibration_tolerance},
                                    {"warning", gap > config.calibration_tolerance}});
  auto with_kind = [&](const MitigationResult& r) {
    auto j = r.to_json(pm.data, pm.spec);
    j["kind"] = "mitigation_result";
    j["selection_distance"] = to_string(config.selection_distance);
    return j;
  };
  w.write_json("mitigation_random.json", with_kind(outcome.random));
  auto quadrant = with_kind(outcome.quadrant);
  quadrant["dominance_property"] =
      satisfies_dominance(outcome.points, outcome.quadrant.modified_indices);
  w.write_json("mitigation_quadrant.json", std::move(quadrant));
  auto tab = outcome.report.to_json(pm.data, pm.spec);
  tab["kind"] = "mitigation_table";
  tab["alpha"] = outcome.random.alpha;
  tab["modified_group"] = pm.data.encoding.decode(pm.spec.column, outcome.random.modified_group);
  tab["n_modified"] = outcome.random.modified_indices.size();
  w.write_json("mitigation_table.json", std::move(tab));
  w.write_csv("mitigation_table.csv", outcome.report.to_csv(pm.data, pm.spec));
  w.write_csv("quadrant_scatter.csv", scatter_csv(outcome));

  log << "modified group " << pm.data.encoding.decode(pm.spec.column, outcome.random.modified_group)
      << ": alpha=" << outcome.random.alpha << ", " << outcome.random.modified_indices.size()
      << " rows set to the base rate\n"
      << "cost gap before=" << outcome.report.cost_gap[0]
      << " random=" << outcome.report.cost_gap[1]
      << " quadrant=" << outcome.report.cost_gap[2] << "\n";
  return kExitOk;
}

namespace {

std::string fmt(const nlohmann::json& v) {
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_audit(const nlohmann::json& j, std::ostream& out) {
  out << "fairness audit (" << fmt(j["metadata"]["mode"]) << ", protected "
      << fmt(j["protected"]["column"]) << ")\n";
  for (const auto& r : j["reports"]) {
    out << "  " << std::left << std::setw(26) << fmt(r["criterion"]);
    if (r["metric"].is_array()) {
      for (std::size_t i = 0; i < r["metric"].size(); ++i) {
        out << " Y=" << i << ": " << fmt(r["metric"][i]) << " vs " << fmt(r["baseline"][i]["mean"])
            << " (x" << fmt(r["ratio"][i]) << ")";
      }
    } else {
      out << " " << fmt(r["metric"]) << " vs " << fmt(r["baseline"]["mean"]) << " (x"
          << fmt(r["ratio"]) << ")";
    }
    out << "  " << fmt(r["verdict"]) << "\n";
  }
  out << "overall: " << fmt(j["overall_verdict"]) << "\n";
}

void print_table(const nlohmann::json& j, std::ostream& out) {
  out << "mitigation table (modified group " << fmt(j["modified_group"]) << ", alpha "
      << fmt(j["alpha"]) << ", " << fmt(j["n_modified"]) << " rows)\n";
  const std::array<const char*, 3> variants{"before", "random", "quadrant"};
  out << std::left << std::setw(12) << "";
  for (const char* v : variants) {
    for (const auto& [g, _] : j["rows"][0][v].items()) out << std::setw(20) << (std::string(v) + ":" + g);
  }
  out << "\n";
  for (const auto& row : j["rows"]) {
    out << std::setw(12) << fmt(row["metric"]);
    for (const char* v : variants) {
      for (const auto& [g, val] : row[v].items()) out << std::setw(20) << fmt(val);
    }
    out << "\n";
  }
  out << std::setw(12) << "cost_gap";
  for (const char* v : variants) out << std::setw(20) << fmt(j["cost_gap"][v]) << std::setw(20) << "";
  out << "\n";
}

}  // namespace

int cmd_report(const std::filesystem::path& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "' is not JSON: " + e.what(), 0);
  }
  const std::string kind = j.value("kind", "");
  if (kind == "fairness_audit") {
    print_audit(j, out);
  } else if (kind == "mitigation_table") {
    print_table(j, out);
  } else {
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace shapfair::app
