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
#ifndef SHAPFAIR_ORACLE_HPP
#define SHAPFAIR_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shapfair/data.hpp"
#include "shapfair/gbdt.hpp"

namespace shapfair {

/// A model we can only query. Returns one score in [0,1] per row.
class BlackBoxOracle {
 public:
  virtual ~BlackBoxOracle() = default;
  virtual std::vector<double> query(const Dataset& d) const = 0;
};

/// Scores already present in the dataset's score column.
class ScoreColumnOracle final : public BlackBoxOracle {
 public:
  std::vector<double> query(const Dataset& d) const override;
};

/// External program: receives CSV rows without a header on stdin (category
/// codes decoded back to their strings), writes one decimal score per line
/// on stdout and exits 0. Rows are sent in batches of batch_size.
class SubprocessOracle final : public BlackBoxOracle {
 public:
  explicit SubprocessOracle(std::string command, std::size_t batch_size = 4096)
      : command_(std::move(command)), batch_size_(batch_size) {}
  std::vector<double> query(const Dataset& d) const override;

 private:
  std::string command_;
  std::size_t batch_size_;
};

/// In-process scoring function; used for synthetic experiments.
class FunctionOracle final : public BlackBoxOracle {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}
  std::vector<double> query(const Dataset& d) const override;

 private:
  Fn fn_;
};

struct Fidelity {
  /// "r2" for soft scores, "agreement" for hard 0/1 outputs.
  std::string metric;
  double value = 0.0;
};

struct DistillResult {
  GradientBoostedModel mimic;
  std::vector<double> oracle_scores;
  Objective objective = Objective::squared;
  Fidelity fidelity;
};

/// True when every score is exactly 0 or 1.
bool is_hard(std::span<const double> scores);

/// Trains a mimic on already-collected oracle outputs: logistic on hard 0/1
/// outputs, squared error on soft scores.
DistillResult distill_from_scores(const Dataset& d, std::vector<double> scores,
                                  const GbdtParams& params, std::uint64_t seed);

/// Queries the oracle for every row of d, then distill_from_scores.
DistillResult distill(const BlackBoxOracle& oracle, const Dataset& d,
                      const GbdtParams& params, std::uint64_t seed);

/// Coefficient of determination of predictions against reference values.
/// Returns 1 when both residual and total variation are zero.
double r_squared(std::span<const double> reference, std::span<const double> predicted);

}  // namespace shapfair

#endif  // SHAPFAIR_ORACLE_HPP
