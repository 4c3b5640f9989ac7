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

#include "shapfair/gbdt.hpp"
#include "shapfair/synthetic.hpp"

namespace {

using namespace shapfair;

void BM_TrainGbdt(benchmark::State& state) {
  SyntheticConfig c;
  c.n_rows = static_cast<std::size_t>(state.range(0));
  c.seed = 2;
  const auto s = make_synthetic(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_gbdt(s.data, *s.data.score, Objective::squared, {}, 2));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainGbdt)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  SyntheticConfig c;
  c.n_rows = 5000;
  c.seed = 3;
  const auto s = make_synthetic(c);
  const auto m = train_gbdt(s.data, *s.data.score, Objective::squared, {}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(s.data.features));
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMicrosecond);

}  // namespace
