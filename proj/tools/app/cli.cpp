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
#include "app/cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "app/commands.hpp"
#include "shapfair/error.hpp"
#include "shapfair/synthetic.hpp"

namespace shapfair::app {
namespace {

void print_error(std::ostream& err, const std::string& kind, const std::string& message,
                 nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json body = {{"kind", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) body[k] = v;
  err << nlohmann::json{{"error", body}}.dump() << "\n";
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley-attribution fairness audits for tabular classifiers", "shapfair"};
  app.set_version_flag("--version", std::string(SHAPFAIR_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string distance;
  app.add_option("--config", config_path, "audit configuration (JSON)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
  auto* dist_opt = app.add_option("--distance", distance, "distribution distance")
                       ->check(CLI::IsMember({"wasserstein1", "kl"}));

  auto* audit = app.add_subcommand("audit", "explain, compare against the baseline, report");
  auto* baseline = app.add_subcommand("baseline", "randomized baseline statistics only");
  auto* mitigate = app.add_subcommand("mitigate", "random vs quadrant post-processing");
  auto* report = app.add_subcommand("report", "pretty-print a JSON artifact");
  std::string report_path;
  report->add_option("file", report_path, "artifact to print")->required();

  auto* synth = app.add_subcommand("synth", "write a synthetic planted-bias dataset");
  SyntheticConfig sc;
  std::string synth_path;
  synth->add_option("file", synth_path, "CSV to write")->required();
  synth->add_option("--rows", sc.n_rows, "number of rows")->capture_default_str();
  synth->add_option("--features", sc.n_features, "covariates besides the group")
      ->capture_default_str();
  synth->add_option("--bonus", sc.bonus_logit, "logit bonus for group a")->capture_default_str();
  synth->add_option("--group-a-fraction", sc.group_a_fraction)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    print_error(err, "usage", e.what());
    return kExitError;
  }

  if (*out_opt) overrides.output_dir = out_dir;
  if (*seed_opt) overrides.seed = seed;
  if (*dist_opt) overrides.distance = distance;

  try {
    if (*report) return cmd_report(report_path, out);
    if (*synth) {
      sc.seed = overrides.seed.value_or(0);
      const auto s = make_synthetic(sc);
      write_csv(synth_path, s.data);
      err << "wrote " << s.data.n_rows() << " rows to " << synth_path << "\n";
      return kExitOk;
    }
    if (config_path.empty()) {
      print_error(err, "usage", "--config is required for this subcommand");
      return kExitError;
    }
    const AuditConfig config = load_config(config_path, overrides);
    if (*audit) return cmd_audit(config, err);
    if (*baseline) return cmd_baseline(config, err);
    if (*mitigate) return cmd_mitigate(config, err);
  } catch (const InfeasibleError& e) {
    print_error(err, e.kind(), e.what(), {{"cost_a", e.cost_a()}, {"cost_b", e.cost_b()}});
    return kExitError;
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitError;
  }
  return kExitError;
}

}  // namespace shapfair::app
