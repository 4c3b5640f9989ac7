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
#ifndef SHAPFAIR_DISTANCE_HPP
#define SHAPFAIR_DISTANCE_HPP

#include <span>
#include <string>
#include <vector>

namespace shapfair {

/// Wasserstein-1 distance between two empirical distributions, computed as
/// the integral of |F_u - F_v| over the merged sorted support.
double wasserstein1(std::span<const double> u, std::span<const double> v);

/// Smoothing mass used when kl_divergence is called with epsilon <= 0:
/// 1 / (n_bins * (|u| + |v|)).
double default_kl_epsilon(int n_bins, std::size_t total_count);

/// KL(P_u || P_v) between histogram estimates on n_bins equal-width bins
/// spanning the pooled range. Each bin's relative frequency gets epsilon
/// added before renormalisation, so the result is finite even on disjoint
/// supports. epsilon <= 0 selects default_kl_epsilon.
double kl_divergence(std::span<const double> u, std::span<const double> v, int n_bins,
                     double epsilon = 0.0);

enum class DistanceKind { wasserstein1, kl };

std::string to_string(DistanceKind k);
DistanceKind distance_kind_from_string(const std::string& s);

struct DistanceConfig {
  DistanceKind kind = DistanceKind::wasserstein1;
  int kl_bins = 50;
  double kl_epsilon = 0.0;
};

double distance(std::span<const double> u, std::span<const double> v,
                const DistanceConfig& cfg);

}  // namespace shapfair

#endif  // SHAPFAIR_DISTANCE_HPP
