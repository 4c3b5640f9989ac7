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
#include "app/config.hpp"

#include <cstdio>
#include <fstream>

#include "shapfair/error.hpp"

namespace shapfair::app {
namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const nlohmann::json& section(const nlohmann::json& j, const char* key) {
  static const nlohmann::json empty = nlohmann::json::object();
  return j.contains(key) ? j.at(key) : empty;
}

Mode mode_from_string(const std::string& s) {
  if (s == "whitebox") return Mode::whitebox;
  if (s == "blackbox_column") return Mode::blackbox_column;
  if (s == "blackbox_subprocess") return Mode::blackbox_subprocess;
  throw SchemaError("unknown mode '" + s +
                    "' (expected whitebox, blackbox_column or blackbox_subprocess)");
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::whitebox: return "whitebox";
    case Mode::blackbox_column: return "blackbox_column";
    case Mode::blackbox_subprocess: return "blackbox_subprocess";
  }
  return "unknown";
}

AuditConfig AuditConfig::from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir) {
  AuditConfig c;
  try {
    if (!j.contains("seed")) throw SchemaError("config must set 'seed'");
    c.seed = j.at("seed").get<std::uint64_t>();

    std::filesystem::path data = j.at("data").get<std::string>();
    c.data_path = data.is_absolute() || base_dir.empty() ? data : base_dir / data;

    const auto& schema = j.at("schema");
    c.label_column = schema.at("label").get<std::string>();
    if (schema.contains("score") && !schema.at("score").is_null()) {
      c.score_column = schema.at("score").get<std::string>();
    }
    c.protected_column = schema.at("protected").get<std::string>();
    c.groups = get_or(schema, "groups", std::vector<std::string>{});
    c.favorable_outcome = get_or(schema, "favorable_outcome", 1);
    c.feature_columns = get_or(schema, "features", std::vector<std::string>{});
    c.categorical_columns = get_or(schema, "categorical", std::vector<std::string>{});

    c.mode = mode_from_string(get_or<std::string>(j, "mode", "whitebox"));
    const auto& oracle = section(j, "oracle");
    c.oracle_command = get_or<std::string>(oracle, "command", "");
    c.oracle_batch_size = get_or<std::size_t>(oracle, "batch_size", 4096);
    if (c.mode == Mode::blackbox_subprocess && c.oracle_command.empty()) {
      throw SchemaError("mode blackbox_subprocess needs oracle.command");
    }
    if (c.mode == Mode::blackbox_column && !c.score_column) {
      throw SchemaError("mode blackbox_column needs schema.score");
    }

    c.mimic = gbdt_params_from_json(section(j, "mimic"));
    c.max_background = get_or<std::size_t>(section(j, "shap"), "max_background", 256);

    const auto& det = section(j, "detection");
    c.distance.kind = distance_kind_from_string(get_or<std::string>(det, "distance", "wasserstein1"));
    c.distance.kl_bins = get_or(det, "kl_bins", 50);
    c.distance.kl_epsilon = get_or(det, "kl_epsilon", 0.0);
    c.permutations = get_or(det, "permutations", 5);
    c.verdict.ratio_threshold = get_or(det, "ratio_threshold", 3.0);
    c.verdict.floor = get_or(det, "floor", 1e-3);
    c.histogram_bins = get_or(det, "histogram_bins", 30);
    if (c.permutations < 1) throw SchemaError("detection.permutations must be >= 1");

    const auto& mit = section(j, "mitigation");
    c.cost.w_fp = get_or(mit, "w_fp", 1.0);
    c.cost.w_fn = get_or(mit, "w_fn", 1.0);
    c.selection_distance = distance_fn_from_string(get_or<std::string>(mit, "distance", "shap_only"));
    c.calibration_bins = get_or(mit, "calibration_bins", 10);
    c.calibration_tolerance = get_or(mit, "calibration_tolerance", 0.1);
    c.calibration_min_count = get_or<std::size_t>(mit, "calibration_min_count", 20);

    if (j.contains("output_dir")) {
      std::filesystem::path out = j.at("output_dir").get<std::string>();
      c.output_dir = out.is_absolute() || base_dir.empty() ? out : base_dir / out;
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid config: ") + e.what());
  }
  return c;
}

nlohmann::json AuditConfig::to_json() const {
  nlohmann::json schema = {{"label", label_column},
                           {"protected", protected_column},
                           {"groups", groups},
                           {"favorable_outcome", favorable_outcome},
                           {"features", feature_columns},
                           {"categorical", categorical_columns}};
  schema["score"] = score_column ? nlohmann::json(*score_column) : nlohmann::json(nullptr);
  return {{"data", data_path.generic_string()},
          {"schema", std::move(schema)},
          {"mode", to_string(mode)},
          {"oracle", {{"command", oracle_command}, {"batch_size", oracle_batch_size}}},
          {"mimic", shapfair::to_json(mimic)},
          {"shap", {{"max_background", max_background}}},
          {"detection",
           {{"distance", shapfair::to_string(distance.kind)},
            {"kl_bins", distance.kl_bins},
            {"kl_epsilon", distance.kl_epsilon},
            {"permutations", permutations},
            {"ratio_threshold", verdict.ratio_threshold},
            {"floor", verdict.floor},
            {"histogram_bins", histogram_bins}}},
          {"mitigation",
           {{"w_fp", cost.w_fp},
            {"w_fn", cost.w_fn},
            {"distance", shapfair::to_string(selection_distance)},
            {"calibration_bins", calibration_bins},
            {"calibration_tolerance", calibration_tolerance},
            {"calibration_min_count", calibration_min_count}}},
          {"seed", seed}};
}

std::string AuditConfig::hash() const {
  const std::string text = to_json().dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Schema AuditConfig::schema() const {
  Schema s;
  s.label_column = label_column;
  s.score_column = score_column;
  s.feature_columns = feature_columns;
  s.categorical_columns = categorical_columns;
  return s;
}

void apply_overrides(AuditConfig& config, const Overrides& o) {
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.seed) config.seed = *o.seed;
  if (o.distance) config.distance.kind = distance_kind_from_string(*o.distance);
}

AuditConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  auto config = AuditConfig::from_json(j, path.parent_path());
  apply_overrides(config, overrides);
  return config;
}

}  // namespace shapfair::app
