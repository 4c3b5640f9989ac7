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
#include "shapfair/model.hpp"

#include <string>

#include "shapfair/error.hpp"

namespace shapfair {
namespace {

void check_width(const Model& m, const Matrix& rows) {
  if (rows.rows() > 0 && rows.cols() != m.n_features()) {
    throw ValidationError("model expects " + std::to_string(m.n_features()) +
                          " features, got " + std::to_string(rows.cols()));
  }
}

}  // namespace

std::vector<double> Model::predict_raw(const Matrix& rows) const {
  check_width(*this, rows);
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = predict_raw(rows.row(r));
  return out;
}

std::vector<double> Model::predict(const Matrix& rows) const {
  auto out = predict_raw(rows);
  const Link l = link();
  for (auto& v : out) v = apply_link(l, v);
  return out;
}

double LinearModel::predict_raw(std::span<const double> row) const {
  double acc = intercept_;
  for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * row[i];
  return acc;
}

}  // namespace shapfair
