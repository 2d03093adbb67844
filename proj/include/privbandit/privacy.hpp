//
// Copyright 2026 The privbandit Authors
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
//

// Analytic density-ratio checks for the Laplace mechanism and the LPPQ
// recorder.

#ifndef PRIVBANDIT_PRIVACY_HPP_
#define PRIVBANDIT_PRIVACY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/lppq.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/policy.hpp"
#include "privbandit/prng.hpp"

namespace privbandit {

// ln of Lap(x, b) density over Lap(x', b) density at v.
inline double laplace_log_ratio(double v, double x, double x_prime, double b) {
  if (!(b > 0.0)) throw ParameterError("Laplace scale must be > 0");
  return (std::abs(v - x_prime) - std::abs(v - x)) / b;
}

// ln of the joint density ratio of z under centres a and a', with
// independent Lap(b) noise per coordinate.
inline double vector_log_ratio(std::span<const double> z, std::span<const double> a,
                               std::span<const double> a_prime, double b) {
  if (z.size() != a.size() || z.size() != a_prime.size()) {
    throw ParameterError("vectors must have equal length");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += laplace_log_ratio(z[j], a[j], a_prime[j], b);
  return s;
}

struct PrivacyCheckReport {
  double eps = 1.0;
  std::int64_t trials = 0;
  double max_revenue = 1.0;     // largest p * y fed to the recorder
  double max_log_ratio = 0.0;   // over all evaluated (s, s', z)
  double bound = 0.0;           // analytic worst case, eps * max_revenue / sensitivity
  bool within_eps = false;      // max_log_ratio <= eps + 1e-9
  std::string warning;          // set when the inputs exceed the normalized range
};

// Draws `trials` neighbouring record pairs (s, s') with p * y in
// [0, max_revenue], privatizes s through an LppqRecorder, and evaluates the
// log density ratio at the released z and at a point past both centres,
// where the ratio is largest.
inline PrivacyCheckReport privacy_check(double eps, std::int64_t trials, std::uint64_t seed,
                                        double max_revenue = 1.0,
                                        SensitivityMode mode = SensitivityMode::kUnitRevenue) {
  internal::CheckEpsilon(eps);
  if (!std::isfinite(eps)) throw ParameterError("privacy check needs a finite eps");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (!(max_revenue > 0.0)) throw ParameterError("max_revenue must be > 0");

  PrivacyCheckReport rep;
  rep.eps = eps;
  rep.trials = trials;
  rep.max_revenue = max_revenue;
  const double sensitivity = mode == SensitivityMode::kSensitivityCorrect ? max_revenue : 1.0;
  rep.bound = eps * max_revenue / sensitivity;

  RngStream pick = derive_stream(seed, "privacy-check/inputs");
  RngStream noise = derive_stream(seed, "privacy-check/noise");
  const HypercubePartition part = build_partition(2, 16);
  LppqRecorder recorder(part, eps, sensitivity, noise);
  const double b = recorder.noise_scale();

  std::vector<double> a(static_cast<std::size_t>(part.J)), a2(a.size()), far(a.size());
  double worst = -INFINITY;
  for (std::int64_t i = 0; i < trials; ++i) {
    auto cube_point = [&](std::array<double, 2>& x) {
      x = {pick.next_unit(), pick.next_unit()};
      return cube_index(part, x);
    };
    std::array<double, 2> x{}, x2{};
    const auto j = static_cast<std::size_t>(cube_point(x));
    const auto j2 = static_cast<std::size_t>(cube_point(x2));
    const double p = 1.0, y = uniform_from_unit(pick.next_unit(), 0.0, max_revenue);
    const double y2 = uniform_from_unit(pick.next_unit(), 0.0, max_revenue);
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(a2.begin(), a2.end(), 0.0);
    a[j] = p * y;
    a2[j2] = p * y2;
    const std::vector<double> z = recorder.privatize(x, p, y);
    worst = std::max(worst, vector_log_ratio(z, a, a2, b));
    for (std::size_t k = 0; k < far.size(); ++k) {
      // Past both centres on the side of a: every coordinate contributes
      // its full |a_k - a'_k| / b.
      far[k] = a[k] >= a2[k] ? std::max(a[k], a2[k]) + 1.0 : std::min(a[k], a2[k]) - 1.0;
    }
    worst = std::max(worst, vector_log_ratio(far, a, a2, b));
  }
  rep.max_log_ratio = worst;
  rep.within_eps = worst <= eps + 1e-9;
  if (max_revenue > 1.0 && mode == SensitivityMode::kUnitRevenue) {
    rep.warning = "WARNING: revenue exceeds 1 under unit-revenue noise; the guarantee degrades to " +
                  std::to_string(rep.bound) + " instead of eps";
  }
  return rep;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_PRIVACY_HPP_
