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
#include "shapfair/distance.hpp"

#include <algorithm>
#include <cmath>

#include "shapfair/error.hpp"

namespace shapfair {

double wasserstein1(std::span<const double> u, std::span<const double> v) {
  if (u.empty() || v.empty()) throw ValidationError("wasserstein1 needs non-empty samples");
  std::vector<double> a(u.begin(), u.end()), b(v.begin(), v.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  std::size_t i = 0, j = 0;
  double x = std::min(a.front(), b.front());
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    // Consume every sample sitting at x, then integrate to the next point.
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    if (i == a.size() && j == b.size()) break;
    const double next = std::min(i < a.size() ? a[i] : b[j], j < b.size() ? b[j] : a[i]);
    const double fa = static_cast<double>(i) / na;
    const double fb = static_cast<double>(j) / nb;
    total += std::abs(fa - fb) * (next - x);
    x = next;
  }
  return total;
}

double default_kl_epsilon(int n_bins, std::size_t total_count) {
  return 1.0 / (static_cast<double>(n_bins) * static_cast<double>(std::max<std::size_t>(1, total_count)));
}

double kl_divergence(std::span<const double> u, std::span<const double> v, int n_bins,
                     double epsilon) {
  if (n_bins < 2) throw ValidationError("kl_divergence needs n_bins >= 2");
  if (u.empty() || v.empty()) throw ValidationError("kl_divergence needs non-empty samples");
  if (epsilon <= 0.0) epsilon = default_kl_epsilon(n_bins, u.size() + v.size());

  auto [umin, umax] = std::minmax_element(u.begin(), u.end());
  auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  const double lo = std::min(*umin, *vmin);
  const double hi = std::max(*umax, *vmax);
  if (!(hi > lo)) return 0.0;  // every sample in one point

  const auto bins = static_cast<std::size_t>(n_bins);
  auto histogram = [&](std::span<const double> s) {
    std::vector<double> h(bins, 0.0);
    for (double x : s) {
      auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
      h[std::min(b, bins - 1)] += 1.0;
    }
    const double norm = static_cast<double>(s.size());
    const double z = 1.0 + static_cast<double>(bins) * epsilon;
    for (auto& c : h) c = (c / norm + epsilon) / z;
    return h;
  };
  const auto p = histogram(u);
  const auto q = histogram(v);
  double kl = 0.0;
  for (std::size_t b = 0; b < bins; ++b) kl += p[b] * std::log(p[b] / q[b]);
  return std::max(kl, 0.0);
}

std::string to_string(DistanceKind k) {
  return k == DistanceKind::kl ? "kl" : "wasserstein1";
}

DistanceKind distance_kind_from_string(const std::string& s) {
  if (s == "wasserstein1") return DistanceKind::wasserstein1;
  if (s == "kl") return DistanceKind::kl;
  throw SchemaError("unknown distance kind '" + s + "' (expected wasserstein1 or kl)");
}

double distance(std::span<const double> u, std::span<const double> v,
                const DistanceConfig& cfg) {
  return cfg.kind == DistanceKind::kl ? kl_divergence(u, v, cfg.kl_bins, cfg.kl_epsilon)
                                      : wasserstein1(u, v);
}

}  // namespace shapfair
