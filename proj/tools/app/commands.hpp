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
#ifndef SHAPFAIR_APP_COMMANDS_HPP
#define SHAPFAIR_APP_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "app/config.hpp"
#include "shapfair/data.hpp"
#include "shapfair/detect.hpp"
#include "shapfair/oracle.hpp"

namespace shapfair::app {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// The audited model after loading, training or distilling, and explaining.
struct PreparedModel {
  Dataset data;
  ProtectedSpec spec;
  std::vector<double> targets;  // labels (whitebox) or oracle outputs
  Objective objective = Objective::logistic;
  /// Predictions of the classifier under audit: the trained model in
  /// whitebox mode, the oracle's scores otherwise.
  std::vector<double> scores;
  ExplainedModel fit;
  std::optional<Fidelity> fidelity;
};

PreparedModel prepare_model(const AuditConfig& config, std::ostream& log);

PipelineConfig pipeline_config(const AuditConfig& config);

/// Trains or distills, explains, runs the randomized baseline and writes the
/// fairness report, attribution CSV/summary, histogram plot data, model and
/// encoding. Returns kExitViolation if any criterion is flagged.
int cmd_audit(const AuditConfig& config, std::ostream& log);

/// Writes one baseline statistics file per criterion.
int cmd_baseline(const AuditConfig& config, std::ostream& log);

/// Runs random and quadrant post-processing and writes both results, the
/// comparison table and scatter plot data. Throws InfeasibleError when the
/// cost gap cannot be closed.
int cmd_mitigate(const AuditConfig& config, std::ostream& log);

/// Pretty-prints any JSON artifact.
int cmd_report(const std::filesystem::path& path, std::ostream& out);

}  // namespace shapfair::app

#endif  // SHAPFAIR_APP_COMMANDS_HPP
