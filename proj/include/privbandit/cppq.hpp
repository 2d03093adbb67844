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

// Centrally private parallel quadrisection (CPPQ).
//
// Contexts are binned into J congruent cubes. Each cube runs its own
// quadrisection search over a five-point price grid, cycling through the five
// prices with period t. Per cube and per phase k the policy keeps two private
// running sums released by tree aggregators: revenue (p * y when the customer
// fell in the cube, 0 otherwise) and visit count. Every period feeds every
// cube's phase-k aggregators, visited or not, so the released statistics do
// not reveal which cube the customer came from. A cube's grid is cut from the
// left when the estimated revenues at phases 1, 2, 3 increase by more than a
// confidence width, and from the right when phases 3, 4, 5 decrease.

#ifndef PRIVBANDIT_CPPQ_HPP_
#define PRIVBANDIT_CPPQ_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/policy.hpp"
#include "privbandit/prng.hpp"
#include "privbandit/tree_agg.hpp"

namespace privbandit {

// J = ceil(T^(d/(d+4))).
inline std::int64_t cppq_theorem_cube_count(std::int64_t T, int d) {
  internal::CheckHorizon(T);
  const double e = static_cast<double>(d) / (d + 4);
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(T), e) - 1e-12)));
}

// Privacy budget handed to each of a phase's two tree aggregators.
enum class AggregatorBudget {
  kHalf,  // eps/2 each: the released statistics are eps-CDP
  kFull,  // eps each: noise Lap(2(L+1)/eps), the scale used by the simulation
          // study; composes to 2 eps
};

inline std::string_view to_string(AggregatorBudget b) {
  return b == AggregatorBudget::kHalf ? "half" : "full";
}

inline AggregatorBudget parse_aggregator_budget(std::string_view s) {
  if (s == "half") return AggregatorBudget::kHalf;
  if (s == "full") return AggregatorBudget::kFull;
  throw ParameterError("unknown aggregator budget '" + std::string(s) + "'");
}

struct CppqConfig {
  std::int64_t T = 1;
  double eps = kInfiniteEpsilon;
  std::int64_t J_request = 1;
  double c1 = 0.0;
  double c1_prime = 0.0;
  double c2 = 0.0;
  Preset preset = Preset::kCustom;
  SensitivityMode sensitivity = SensitivityMode::kUnitRevenue;
  AggregatorBudget budget = AggregatorBudget::kHalf;

  static CppqConfig theorem(std::int64_t T, double eps, int d) {
    internal::CheckHorizon(T);
    internal::CheckEpsilon(eps);
    const double log_2t3 = std::log(2.0) + 3.0 * std::log(static_cast<double>(T));
    CppqConfig c;
    c.T = T;
    c.eps = eps;
    c.J_request = cppq_theorem_cube_count(T, d);
    c.c1 = std::sqrt(log_2t3);
    c.c2 = 76.0 / eps * log_2t3 * log_2t3;
    c.c1_prime = 4.0 * c.c2;
    c.preset = Preset::kTheorem;
    return c;
  }

  // The cube count is not given for the simulation study; the theorem's
  // formula is used.
  static CppqConfig experiment(std::int64_t T, double eps, int d) {
    internal::CheckHorizon(T);
    internal::CheckEpsilon(eps);
    const double log_t = std::log(static_cast<double>(T));
    CppqConfig c;
    c.T = T;
    c.eps = eps;
    c.J_request = cppq_theorem_cube_count(T, d);
    c.c1 = 0.001 * std::sqrt(log_t);
    c.c2 = log_t * log_t / eps;
    c.c1_prime = 0.01 * c.c2;
    c.preset = Preset::kExperiment;
    c.budget = AggregatorBudget::kFull;
    return c;
  }

  void validate() const {
    internal::CheckHorizon(T);
    internal::CheckEpsilon(eps);
    if (J_request < 1) throw ParameterError("J must be >= 1");
    if (!(c1 >= 0.0) || !(c1_prime >= 0.0) || !(c2 >= 0.0)) {
      throw ParameterError("c1, c1', c2 must be non-negative");
    }
  }
};

class Cppq {
 public:
  Cppq(const CppqConfig& config, int d, double p_lo, double p_hi,
       double revenue_bound, const RngStream& noise_root)
      : config_(config) {
    config_.validate();
    partition_ = build_partition(d, config_.J_request);
    const auto J = static_cast<std::size_t>(partition_.J);
    grids_.assign(J, init_price_grid(p_lo, p_hi));
    shrinks_.assign(J, 0);
    const double reward_sensitivity =
        config_.sensitivity == SensitivityMode::kSensitivityCorrect ? revenue_bound : 1.0;
    const double branch =
        config_.budget == AggregatorBudget::kHalf ? config_.eps / 2.0 : config_.eps;
    reward_.reserve(J * 5);
    count_.reserve(J * 5);
    for (std::size_t j = 0; j < J; ++j) {
      for (int k = 1; k <= 5; ++k) {
        const std::string tag = "j/" + std::to_string(j) + "/k/" + std::to_string(k);
        reward_.emplace_back(branch, config_.T, noise_root.child(tag + "/reward"),
                             reward_sensitivity);
        count_.emplace_back(branch, config_.T, noise_root.child(tag + "/count"));
      }
    }
    snap_reward_.assign(J * 5, 0.0);
    snap_count_.assign(J * 5, 0.0);
    contributions_.assign(J, 0.0);
  }

  double choose_price(std::span<const double> x, std::int64_t t) const {
    if (t < 1 || t > config_.T) {
      throw ProtocolError("period " + std::to_string(t) + " outside [1, T]");
    }
    const std::int64_t j = cube_index(partition_, x);
    return grids_[static_cast<std::size_t>(j)].price(phase_index(t));
  }

  // Feeds period t into every cube's phase-k_t aggregators, then evaluates
  // the cut rules in every cube. Periods must arrive in order 1, 2, ...
  std::vector<ShrinkEvent> update(std::span<const double> x, double p, double y,
                                  std::int64_t t) {
    if (t != last_t_ + 1) {
      throw ProtocolError("expected period " + std::to_string(last_t_ + 1) +
                          ", got " + std::to_string(t));
    }
    if (p != choose_price(x, t)) {
      throw ProtocolError("price " + std::to_string(p) +
                          " was not offered by this policy at period " + std::to_string(t));
    }
    last_t_ = t;
    const auto jt = static_cast<std::size_t>(cube_index(partition_, x));
    const auto k = static_cast<std::size_t>(phase_index(t) - 1);
    const std::size_t J = grids_.size();
    for (std::size_t j = 0; j < J; ++j) {
      const double u = j == jt ? p * y : 0.0;
      contributions_[j] = u;
      reward_[j * 5 + k].update(u);
      count_[j * 5 + k].update(j == jt ? 1.0 : 0.0);
    }
    std::vector<ShrinkEvent> events;
    for (std::size_t j = 0; j < J; ++j) {
      if (auto dir = evaluate_cut(j)) {
        apply_cut(j, *dir, t);
        events.push_back({static_cast<std::int64_t>(j), *dir, t});
      }
    }
    return events;
  }

  void observe(std::span<const double> x, double p, double y, std::int64_t t) {
    update(x, p, y, t);
  }

  const CppqConfig& config() const { return config_; }
  const HypercubePartition& partition() const { return partition_; }
  std::int64_t cube_count() const { return partition_.J; }
  int dimension() const { return partition_.d; }
  const PriceGrid& grid(std::int64_t j) const {
    return grids_[static_cast<std::size_t>(j)];
  }
  const TreeAggregator& reward_aggregator(std::int64_t j, int k) const {
    return reward_[static_cast<std::size_t>(j) * 5 + static_cast<std::size_t>(k - 1)];
  }
  const TreeAggregator& count_aggregator(std::int64_t j, int k) const {
    return count_[static_cast<std::size_t>(j) * 5 + static_cast<std::size_t>(k - 1)];
  }
  // Epoch-differenced private statistics (r_hat, mu_hat) for cube j, phase k.
  std::pair<double, double> epoch_statistics(std::int64_t j, int k) const {
    const std::size_t idx = static_cast<std::size_t>(j) * 5 + static_cast<std::size_t>(k - 1);
    return {reward_[idx].snapshot() - snap_reward_[idx],
            count_[idx].snapshot() - snap_count_[idx]};
  }
  // Revenue contribution fed to each cube in the last period.
  std::span<const double> last_contributions() const { return contributions_; }
  std::int64_t shrinks(std::int64_t j) const {
    return shrinks_[static_cast<std::size_t>(j)];
  }
  std::int64_t shrinks_total() const {
    std::int64_t s = 0;
    for (auto v : shrinks_) s += v;
    return s;
  }
  std::vector<std::int64_t> shrink_counts() const { return shrinks_; }

 private:
  // Cut direction for cube j if a rule fires; the left rule is checked first.
  std::optional<CutDirection> evaluate_cut(std::size_t j) const {
    std::array<double, 5> r{};
    std::array<double, 5> mu{};
    for (std::size_t k = 0; k < 5; ++k) {
      r[k] = reward_[j * 5 + k].snapshot() - snap_reward_[j * 5 + k];
      mu[k] = count_[j * 5 + k].snapshot() - snap_count_[j * 5 + k];
    }
    if (!can_shrink(grids_[j])) return std::nullopt;
    if (passes(r, mu, 0, 1, 2)) return CutDirection::kLeft;
    if (passes(r, mu, 4, 3, 2)) return CutDirection::kRight;
    return std::nullopt;
  }

  // Revenue estimates increase strictly along a -> b -> c by more than the
  // confidence width built from the smallest of the three private counts.
  bool passes(const std::array<double, 5>& r, const std::array<double, 5>& mu,
              std::size_t a, std::size_t b, std::size_t c) const {
    const double mu_min = std::min({mu[a], mu[b], mu[c]});
    // Noisy counts can be zero or negative; those never pass.
    if (!(mu_min >= config_.c2) || !(mu_min > 0.0)) return false;
    const double qa = r[a] / mu[a];
    const double qb = r[b] / mu[b];
    const double qc = r[c] / mu[c];
    const double width =
        3.0 * config_.c1 / std::sqrt(mu_min) + 3.0 * config_.c1_prime / mu_min;
    return std::min(qc - qb, qb - qa) > width;
  }

  void apply_cut(std::size_t j, CutDirection dir, std::int64_t t) {
    grids_[j] = shrink_grid(grids_[j], dir, t);
    ++shrinks_[j];
    for (std::size_t k = 0; k < 5; ++k) {
      snap_reward_[j * 5 + k] = reward_[j * 5 + k].snapshot();
      snap_count_[j * 5 + k] = count_[j * 5 + k].snapshot();
    }
  }

  CppqConfig config_;
  HypercubePartition partition_;
  std::vector<PriceGrid> grids_;
  std::vector<TreeAggregator> reward_;  // index j * 5 + (k - 1)
  std::vector<TreeAggregator> count_;
  std::vector<double> snap_reward_;
  std::vector<double> snap_count_;
  std::vector<double> contributions_;
  std::vector<std::int64_t> shrinks_;
  std::int64_t last_t_ = 0;
};

static_assert(PricingPolicy<Cppq>);

}  // namespace privbandit

#endif  // PRIVBANDIT_CPPQ_HPP_
