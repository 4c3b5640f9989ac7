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
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "shapfair/error.hpp"
#include "shapfair/metrics.hpp"
#include "shapfair/oracle.hpp"
#include "shapfair/synthetic.hpp"

using namespace shapfair;
namespace fs = std::filesystem;

namespace {

Dataset small_dataset(std::size_t n, std::uint64_t seed) {
  SyntheticConfig c;
  c.n_rows = n;
  c.seed = seed;
  return make_synthetic(c).data;
}

std::string script(const std::string& name, const std::string& body) {
  fs::create_directories(SHAPFAIR_TEST_SCRATCH);
  const fs::path p = fs::path(SHAPFAIR_TEST_SCRATCH) / name;
  std::ofstream(p) << "#!/bin/sh\n" << body << "\n";
  fs::permissions(p, fs::perms::owner_all);
  return p.string();
}

}  // namespace

TEST_CASE("score column oracle returns the stored scores") {
  const auto d = small_dataset(50, 1);
  CHECK(ScoreColumnOracle().query(d) == *d.score);
  auto no_score = d;
  no_score.score.reset();
  CHECK_THROWS_AS(ScoreColumnOracle().query(no_score), OracleError);
}

TEST_CASE("self-distillation reaches R2 >= 0.99") {
  const auto d = small_dataset(1500, 2);
  const auto r = distill(ScoreColumnOracle(), d, {}, 2);
  CHECK(r.objective == Objective::squared);
  CHECK(r.fidelity.metric == "r2");
  CHECK(r.fidelity.value >= 0.99);
}

TEST_CASE("constant oracle gives a constant mimic") {
  const auto d = small_dataset(300, 3);
  const FunctionOracle half([](std::span<const double>) { return 0.5; });
  const auto r = distill(half, d, {}, 3);
  for (double p : r.mimic.predict(d.features)) CHECK(p == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("hard outputs distill with a logistic mimic and agreement fidelity") {
  const auto d = small_dataset(2000, 4);
  const FunctionOracle hard([](std::span<const double> x) {
    return x[1] - 0.5 * x[2] + 0.3 * x[3] > 0 ? 1.0 : 0.0;
  });
  const auto r = distill(hard, d, {}, 4);
  CHECK(r.objective == Objective::logistic);
  CHECK(r.fidelity.metric == "agreement");
  CHECK(r.fidelity.value >= 0.95);
}

TEST_CASE("mimic of a logistic model ranks its thresholded labels") {
  const auto d = small_dataset(2000, 5);
  const FunctionOracle logistic([](std::span<const double> x) {
    return sigmoid(0.8 * x[1] - 0.6 * x[2] + 0.4 * x[3] + 0.2 * x[4] - 0.5 * x[5]);
  });
  const auto r = distill(logistic, d, {}, 5);
  std::vector<int> thresholded;
  for (double s : r.oracle_scores) thresholded.push_back(s >= 0.5 ? 1 : 0);
  CHECK(auc(r.mimic.predict(d.features), thresholded) >= 0.95);
}

TEST_CASE("subprocess oracle: one decimal score per input line") {
  const auto d = small_dataset(37, 6);
  // Score = 0.25 when group is a, else 0.75; rows arrive decoded.
  const auto cmd = script("by_group.sh",
                          "awk -F, '{ if ($1 == \"a\") print 0.25; else print 0.75 }'");
  const SubprocessOracle oracle(cmd, 10);
  const auto s = oracle.query(d);
  REQUIRE(s.size() == d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    CHECK(s[r] == (d.features(r, 0) == 0.0 ? 0.25 : 0.75));
  }
}

TEST_CASE("subprocess failures name the row range") {
  const auto d = small_dataset(25, 7);
  auto message = [&](const std::string& body) {
    try {
      SubprocessOracle(script("bad.sh", body), 10).query(d);
    } catch (const OracleError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("exit 3").find("rows [0, 10)") != std::string::npos);
  CHECK(message("awk '{ print \"nan-ish\" }'").find("rows [0, 1)") != std::string::npos);
  CHECK(message("head -n 3 | awk '{ print 0.5 }'").find("rows [0, 10)") != std::string::npos);
  CHECK(message("awk '{ print 1.5 }'") != "no error");
}

TEST_CASE("r_squared edge cases") {
  const std::vector<double> a{1, 2, 3}, c{2, 2, 2};
  CHECK(r_squared(a, a) == 1.0);
  CHECK(r_squared(c, c) == 1.0);
  CHECK(is_hard(std::vector<double>{0, 1, 1}));
  CHECK_FALSE(is_hard(std::vector<double>{0, 0.5}));
}
