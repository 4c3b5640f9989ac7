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
#ifndef SHAPFAIR_MODEL_HPP
#define SHAPFAIR_MODEL_HPP

#include <cmath>
#include <span>
#include <vector>

#include "shapfair/matrix.hpp"

namespace shapfair {

/// How the additive raw score maps to the reported prediction.
enum class Link { identity, logistic };

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

inline double apply_link(Link link, double raw) {
  return link == Link::logistic ? sigmoid(raw) : raw;
}

/// Anything that scores a feature row. Attributions are computed on
/// predict_raw, the additive space; predict applies the link.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t n_features() const = 0;
  virtual double predict_raw(std::span<const double> row) const = 0;
  virtual Link link() const { return Link::identity; }

  double predict(std::span<const double> row) const {
    return apply_link(link(), predict_raw(row));
  }

  /// Batch forms; throw ValidationError on a feature count mismatch.
  std::vector<double> predict_raw(const Matrix& rows) const;
  std::vector<double> predict(const Matrix& rows) const;
};

/// f(x) = intercept + sum_i w_i x_i.
class LinearModel final : public Model {
 public:
  LinearModel(std::vector<double> weights, double intercept = 0.0,
              Link link = Link::identity)
      : weights_(std::move(weights)), intercept_(intercept), link_(link) {}

  std::size_t n_features() const override { return weights_.size(); }
  double predict_raw(std::span<const double> row) const override;
  using Model::predict_raw;
  Link link() const override { return link_; }

  const std::vector<double>& weights() const noexcept { return weights_; }
  double intercept() const noexcept { return intercept_; }

 private:
  std::vector<double> weights_;
  double intercept_;
  Link link_;
};

}  // namespace shapfair

#endif  // SHAPFAIR_MODEL_HPP
