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
#include <benchmark/benchmark.h>

#include <map>

#include "shapfair/gbdt.hpp"
#include "shapfair/shap.hpp"
#include "shapfair/synthetic.hpp"

namespace {

using namespace shapfair;

struct Fitted {
  Dataset data;
  GradientBoostedModel model;
};

const Fitted& fitted(std::size_t n_features) {
  static std::map<std::size_t, Fitted> cache;
  auto it = cache.find(n_features);
  if (it == cache.end()) {
    SyntheticConfig c;
    c.n_rows = 2000;
    c.n_features = n_features;
    c.seed = 1;
    auto s = make_synthetic(c);
    auto m = train_gbdt(s.data, *s.data.score, Objective::squared, {}, 1);
    it = cache.emplace(n_features, Fitted{std::move(s.data), std::move(m)}).first;
  }
  return it->second;
}

// Rows explained per second against a background of range(0) rows.
void BM_TreeShap(benchmark::State& state) {
  const auto& f = fitted(6);
  const Matrix rows = f.data.features.select_rows(std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  const ValueFunctionConfig vf{f.data.features, static_cast<std::size_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(tree_shap(f.model, rows, vf));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows.rows()));
}
BENCHMARK(BM_TreeShap)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// Same model, coalition enumeration; cost doubles per feature.
void BM_ExactShapley(benchmark::State& state) {
  const auto& f = fitted(static_cast<std::size_t>(state.range(0)));
  const Matrix rows = f.data.features.select_rows(std::vector<std::size_t>{0, 1});
  const ValueFunctionConfig vf{f.data.features, 16, 1};
  for (auto _ : state) benchmark::DoNotOptimize(exact_shapley(f.model, rows, vf));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows.rows()));
}
BENCHMARK(BM_ExactShapley)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
