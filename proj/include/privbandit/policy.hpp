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

#ifndef PRIVBANDIT_POLICY_HPP_
#define PRIVBANDIT_POLICY_HPP_

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/partition.hpp"

namespace privbandit {

inline constexpr double kInfiniteEpsilon = std::numeric_limits<double>::infinity();

// Where algorithm constants come from.
enum class Preset {
  kTheorem,     // constants from the regret guarantees
  kExperiment,  // constants from the simulation study
  kCustom,
};

// How the privacy noise is calibrated when revenue can exceed one.
enum class SensitivityMode {
  kUnitRevenue,        // noise as if p * y were in [0, 1]
  kSensitivityCorrect,  // noise scaled by the environment's revenue bound
};

inline std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::kTheorem: return "theorem";
    case Preset::kExperiment: return "experiment";
    case Preset::kCustom: return "custom";
  }
  return "custom";
}

inline Preset parse_preset(std::string_view s) {
  if (s == "theorem") return Preset::kTheorem;
  if (s == "experiment") return Preset::kExperiment;
  if (s == "custom") return Preset::kCustom;
  throw ParameterError("unknown preset '" + std::string(s) + "'");
}

inline std::string_view to_string(SensitivityMode m) {
  return m == SensitivityMode::kUnitRevenue ? "unit-revenue" : "sensitivity-correct";
}

inline SensitivityMode parse_sensitivity_mode(std::string_view s) {
  if (s == "unit-revenue") return SensitivityMode::kUnitRevenue;
  if (s == "sensitivity-correct") return SensitivityMode::kSensitivityCorrect;
  throw ParameterError("unknown sensitivity mode '" + std::string(s) + "'");
}

// A cube's grid was cut at period t.
struct ShrinkEvent {
  std::int64_t cube;
  CutDirection direction;
  std::int64_t t;
};

// Interface the simulation driver needs from a pricing policy.
template <class P>
concept PricingPolicy = requires(P& policy, const P& cpolicy,
                                 std::span<const double> x, double p, double y,
                                 std::int64_t t) {
  { cpolicy.choose_price(x, t) } -> std::convertible_to<double>;
  policy.observe(x, p, y, t);
  { cpolicy.shrinks_total() } -> std::convertible_to<std::int64_t>;
  { cpolicy.cube_count() } -> std::convertible_to<std::int64_t>;
  { cpolicy.dimension() } -> std::convertible_to<int>;
};

namespace internal {

inline void CheckEpsilon(double eps) {
  if (std::isnan(eps) || !(eps > 0.0)) {
    throw ParameterError("privacy parameter eps must be > 0 or infinite");
  }
}

inline void CheckHorizon(std::int64_t T) {
  if (T < 1) throw ParameterError("horizon T must be >= 1");
}

}  // namespace internal

}  // namespace privbandit

#endif  // PRIVBANDIT_POLICY_HPP_
