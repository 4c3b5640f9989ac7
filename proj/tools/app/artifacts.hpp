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
#ifndef SHAPFAIR_APP_ARTIFACTS_HPP
#define SHAPFAIR_APP_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "app/config.hpp"

namespace shapfair::app {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = SHAPFAIR_VERSION;

/// Writes run artifacts into the output directory. Every JSON artifact gets
/// schema_version and a metadata block; every CSV starts with one comment
/// line carrying the same metadata.
class ArtifactWriter {
 public:
  ArtifactWriter(const AuditConfig& config, std::string command);

  nlohmann::json metadata() const;
  std::filesystem::path write_json(const std::string& name, nlohmann::json body);
  std::filesystem::path write_csv(const std::string& name, const std::string& body);

  const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

 private:
  std::filesystem::path dir_;
  std::string config_hash_;
  std::string mode_;
  std::string command_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace shapfair::app

#endif  // SHAPFAIR_APP_ARTIFACTS_HPP
