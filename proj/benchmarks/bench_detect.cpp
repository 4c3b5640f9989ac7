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

#include "shapfair/distance.hpp"
#include "shapfair/random.hpp"

namespace {

using namespace shapfair;

std::vector<double> normal_sample(std::size_t n, double shift, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = shift + standard_normal(rng);
  return v;
}

void BM_Wasserstein1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = normal_sample(n, 0.0, 1), v = normal_sample(n, 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein1(u, v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wasserstein1)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_KlDivergence(benchmark::State& state) {
  const auto u = normal_sample(10000, 0.0, 3), v = normal_sample(10000, 1.0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kl_divergence(u, v, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_KlDivergence)->Arg(20)->Arg(50)->Arg(200);

}  // namespace
