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
#include "shapfair/oracle.hpp"

#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"

namespace shapfair {
namespace {

std::string row_range(std::size_t begin, std::size_t end) {
  return "rows [" + std::to_string(begin) + ", " + std::to_string(end) + ")";
}

// Owns a mkstemp file; removed on destruction.
class TempFile {
 public:
  TempFile() {
    auto dir = std::filesystem::temp_directory_path() / "shapfair-oracle-XXXXXX";
    path_ = dir.string();
    const int fd = ::mkstemp(path_.data());
    if (fd < 0) throw OracleError(std::string("mkstemp failed: ") + std::strerror(errno));
    ::close(fd);
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

}  // namespace

std::vector<double> ScoreColumnOracle::query(const Dataset& d) const {
  if (!d.score) throw OracleError("dataset has no score column to use as oracle");
  return *d.score;
}

std::vector<double> FunctionOracle::query(const Dataset& d) const {
  std::vector<double> out(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    out[r] = fn_(d.features.row(r));
    if (!(out[r] >= 0.0 && out[r] <= 1.0)) {
      throw OracleError("score outside [0,1] at " + row_range(r, r + 1));
    }
  }
  return out;
}

std::vector<double> SubprocessOracle::query(const Dataset& d) const {
  const std::size_t batch = std::max<std::size_t>(1, batch_size_);
  std::vector<double> out;
  out.reserve(d.n_rows());
  for (std::size_t begin = 0; begin < d.n_rows(); begin += batch) {
    const std::size_t end = std::min(d.n_rows(), begin + batch);
    TempFile input;
    {
      std::ofstream f(input.path(), std::ios::binary);
      for (std::size_t r = begin; r < end; ++r) {
        csv::Record rec;
        for (std::size_t c = 0; c < d.n_features(); ++c) {
          const auto& name = d.column_names[c];
          rec.push_back(d.encoding.is_categorical(name)
                            ? d.encoding.decode(name, d.features(r, c))
                            : csv::format_double(d.features(r, c)));
        }
        csv::write_record(f, rec);
      }
      if (!f) throw OracleError("cannot write oracle input for " + row_range(begin, end));
    }

    const std::string cmd = command_ + " < " + shell_quote(input.path());
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw OracleError("cannot start oracle command for " + row_range(begin, end));
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) text.append(buf, got);
    const int status = ::pclose(pipe);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      throw OracleError("oracle command failed (status " + std::to_string(status) +
                        ") for " + row_range(begin, end));
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t r = begin;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (r >= end) {
        throw OracleError("oracle returned more scores than rows for " +
                          row_range(begin, end));
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
      if (ec != std::errc() || ptr != line.data() + line.size() || !(v >= 0.0 && v <= 1.0)) {
        throw OracleError("malformed oracle score '" + line + "' at " + row_range(r, r + 1));
      }
      out.push_back(v);
      ++r;
    }
    if (r != end) {
      throw OracleError("oracle returned " + std::to_string(r - begin) + " scores for " +
                        row_range(begin, end));
    }
  }
  return out;
}

bool is_hard(std::span<const double> scores) {
  return std::all_of(scores.begin(), scores.end(),
                     [](double s) { return s == 0.0 || s == 1.0; });
}

double r_squared(std::span<const double> reference, std::span<const double> predicted) {
  const double n = static_cast<double>(reference.size());
  if (reference.empty()) return 1.0;
  double mean = 0.0;
  for (double v : reference) mean += v;
  mean /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ss_res += (reference[i] - predicted[i]) * (reference[i] - predicted[i]);
    ss_tot += (reference[i] - mean) * (reference[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res <= 1e-24 * n ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

DistillResult distill_from_scores(const Dataset& d, std::vector<double> scores,
                                  const GbdtParams& params, std::uint64_t seed) {
  if (scores.size() != d.n_rows()) {
    throw OracleError("oracle returned " + std::to_string(scores.size()) +
                      " scores for " + std::to_string(d.n_rows()) + " rows");
  }
  DistillResult result;
  result.objective = is_hard(scores) ? Objective::logistic : Objective::squared;
  result.mimic = train_gbdt(d, scores, result.objective, params, seed);
  const auto pred = result.mimic.predict(d.features);
  if (result.objective == Objective::logistic) {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      agree += (pred[i] >= 0.5) == (scores[i] == 1.0);
    }
    result.fidelity = {"agreement", static_cast<double>(agree) / static_cast<double>(pred.size())};
  } else {
    result.fidelity = {"r2", r_squared(scores, pred)};
  }
  result.oracle_scores = std::move(scores);
  return result;
}

DistillResult distill(const BlackBoxOracle& oracle, const Dataset& d,
                      const GbdtParams& params, std::uint64_t seed) {
  return distill_from_scores(d, oracle.query(d), params, seed);
}

}  // namespace shapfair
