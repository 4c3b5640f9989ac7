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
#include "app/artifacts.hpp"

#include <fstream>

#include "shapfair/error.hpp"

namespace shapfair::app {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

ArtifactWriter::ArtifactWriter(const AuditConfig& config, std::string command)
    : dir_(config.output_dir),
      config_hash_(config.hash()),
      mode_(to_string(config.mode)),
      command_(std::move(command)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw SchemaError("cannot create output directory '" + dir_.string() + "'");
}

nlohmann::json ArtifactWriter::metadata() const {
  return {{"config_hash", config_hash_},
          {"tool_version", kToolVersion},
          {"mode", mode_},
          {"command", command_}};
}

std::filesystem::path ArtifactWriter::write_json(const std::string& name, nlohmann::json body) {
  nlohmann::json doc = {{"schema_version", kSchemaVersion}, {"metadata", metadata()}};
  for (auto& [k, v] : body.items()) {
    if (k != "schema_version") doc[k] = std::move(v);
  }
  const auto path = dir_ / name;
  write_text(path, doc.dump(2) + "\n");
  written_.push_back(path);
  return path;
}

std::filesystem::path ArtifactWriter::write_csv(const std::string& name, const std::string& body) {
  const auto path = dir_ / name;
  write_text(path, "# shapfair " + std::string(kToolVersion) + " config_hash=" + config_hash_ +
                       " mode=" + mode_ + " command=" + command_ + "\n" + body);
  written_.push_back(path);
  return path;
}

}  // namespace shapfair::app
