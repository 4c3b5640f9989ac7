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
#ifndef SHAPFAIR_APP_CONFIG_HPP
#define SHAPFAIR_APP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/data.hpp"
#include "shapfair/detect.hpp"
#include "shapfair/gbdt.hpp"
#include "shapfair/mitigate.hpp"

namespace shapfair::app {

enum class Mode { whitebox, blackbox_column, blackbox_subprocess };
std::string to_string(Mode m);

/// Everything one audit / baseline / mitigation run needs. Loaded from a
/// single JSON file; relative paths resolve against the file's directory.
struct AuditConfig {
  std::filesystem::path data_path;
  std::string label_column;
  std::optional<std::string> score_column;
  std::string protected_column;
  std::vector<std::string> groups;  // empty: every distinct value
  int favorable_outcome = 1;
  std::vector<std::string> feature_columns;
  std::vector<std::string> categorical_columns;

  Mode mode = Mode::whitebox;
  std::string oracle_command;
  std::size_t oracle_batch_size = 4096;

  GbdtParams mimic;
  std::size_t max_background = 256;

  DistanceConfig distance;
  int permutations = 5;
  VerdictRule verdict;
  int histogram_bins = 30;

  CostSpec cost;
  DistanceFn selection_distance = DistanceFn::shap_only;
  int calibration_bins = 10;
  double calibration_tolerance = 0.1;
  std::size_t calibration_min_count = 20;

  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "shapfair-out";

  static AuditConfig from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
  /// Canonical form; output_dir is excluded so artifacts do not depend on
  /// where they are written.
  nlohmann::json to_json() const;
  /// FNV-1a 64 of to_json().dump(), as 16 hex digits.
  std::string hash() const;

  Schema schema() const;
};

struct Overrides {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> distance;
};

AuditConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
void apply_overrides(AuditConfig& config, const Overrides& overrides);

}  // namespace shapfair::app

#endif  // SHAPFAIR_APP_CONFIG_HPP
