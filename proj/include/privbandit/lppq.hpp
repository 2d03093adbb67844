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

// Locally private parallel quadrisection (LPPQ).
//
// The customer-side recorder turns each raw record (x, p, y) into a vector
// z in R^J with z_j = 1{x in B_j} p y + Lap(2/eps) for every cube j. The
// platform side (class Lppq) only ever sees z: it adds z_j to cube j's running
// sum for the current phase and decides cuts from those sums and the number
// of periods n_j since the cube's last reset. No visit counts are kept.

#ifndef PRIVBANDIT_LPPQ_HPP_
#define PRIVBANDIT_LPPQ_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/policy.hpp"
#include "privbandit/prng.hpp"

namespace privbandit {

// J = ceil((eps * sqrt(T))^(d/(d+2))), at least 1.
inline std::int64_t lppq_theorem_cube_count(std::int64_t T, double eps, int d) {
  internal::CheckHorizon(T);
  internal::CheckEpsilon(eps);
  if (!std::isfinite(eps)) {
    throw ParameterError("cube count formula is undefined for eps = inf; set J explicitly");
  }
  const double base = eps * std::sqrt(static_cast<double>(T));
  const double e = static_cast<double>(d) / (d + 2);
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::pow(base, e) - 1e-12)));
}

struct LppqConfig {
  std::int64_t T = 1;
  double eps = 1.0;
  std::int64_t J_request = 1;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  Preset preset = Preset::kCustom;
  SensitivityMode sensitivity = SensitivityMode::kUnitRevenue;

  static LppqConfig theorem(std::int64_t T, double eps, int d) {
    LppqConfig c;
    c.T = T;
    c.eps = eps;
    c.J_request = lppq_theorem_cube_count(T, eps, d);
    c.kappa1 = 1.7 * std::sqrt(std::log(2.0 * static_cast<double>(T)));
    c.kappa2 = 31.0 * std::log(static_cast<double>(T));
    c.preset = Preset::kTheorem;
    return c;
  }

  // The simulation study does not state J; the theorem's formula is used.
  static LppqConfig experiment(std::int64_t T, double eps, int d) {
    LppqConfig c;
    c.T = T;
    c.eps = eps;
    c.J_request = lppq_theorem_cube_count(T, eps, d);
    const double log_t = std::log(static_cast<double>(T));
    c.kappa1 = 0.001 * std::sqrt(log_t);
    c.kappa2 = 0.1 * log_t;
    c.preset = Preset::kExperiment;
    return c;
  }

  void validate() const {
    internal::CheckHorizon(T);
    internal::CheckEpsilon(eps);
    if (J_request < 1) throw ParameterError("J must be >= 1");
    if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0)) {
      throw ParameterError("kappa1, kappa2 must be non-negative");
    }
  }
};

// The local statistics recorder. It sees one raw record, returns the
// privatized vector, and keeps nothing but its noise stream.
class LppqRecorder {
 public:
  // Noise is Lap(2 * sensitivity / eps) per coordinate; eps = inf disables it.
  LppqRecorder(HypercubePartition partition, double eps, double sensitivity,
               RngStream stream)
      : partition_(partition), stream_(std::move(stream)) {
    internal::CheckEpsilon(eps);
    if (std::isfinite(eps)) noise_.emplace(2.0 * sensitivity / eps);
  }

  void privatize(std::span<const double> x, double p, double y, std::span<double> z) {
    if (static_cast<std::int64_t>(z.size()) != partition_.J) {
      throw ParameterError("output vector must have J entries");
    }
    const std::int64_t jt = cube_index(partition_, x);
    const double signal = p * y;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double a = static_cast<std::int64_t>(j) == jt ? signal : 0.0;
      z[j] = noise_ ? a + laplace_sample(stream_, *noise_) : a;
    }
  }

  std::vector<double> privatize(std::span<const double> x, double p, double y) {
    std::vector<double> z(static_cast<std::size_t>(partition_.J));
    privatize(x, p, y, z);
    return z;
  }

  bool noise_enabled() const { return noise_.has_value(); }
  double noise_scale() const { return noise_ ? noise_->scale() : 0.0; }
  const RngStream& stream() const { return stream_; }

 private:
  HypercubePartition partition_;
  std::optional<LaplaceParams> noise_;
  RngStream stream_;
};

// Everything the platform retains. Built from privatized vectors only.
struct LppqState {
  std::vector<PriceGrid> grids;
  std::vector<double> sums;       // r_{j,k}(t), index j * 5 + (k - 1)
  std::vector<double> snapshots;  // r_{j,k}(pointer_j)
  std::int64_t last_t = 0;

  bool operator==(const LppqState& o) const {
    if (last_t != o.last_t || sums != o.sums || snapshots != o.snapshots) return false;
    if (grids.size() != o.grids.size()) return false;
    for (std::size_t j = 0; j < grids.size(); ++j) {
      if (grids[j].rho != o.grids[j].rho || grids[j].epoch != o.grids[j].epoch ||
          grids[j].pointer != o.grids[j].pointer) {
        return false;
      }
    }
    return true;
  }
};

class Lppq {
 public:
  Lppq(const LppqConfig& config, int d, double p_lo, double p_hi,
       double revenue_bound, const RngStream& noise_root)
      : config_(config),
        partition_(build_partition(d, (config.validate(), config.J_request))),
        recorder_(partition_, config.eps,
                  config.sensitivity == SensitivityMode::kSensitivityCorrect ? revenue_bound : 1.0,
                  noise_root.child("recorder")) {
    const auto J = static_cast<std::size_t>(partition_.J);
    state_.grids.assign(J, init_price_grid(p_lo, p_hi));
    state_.sums.assign(J * 5, 0.0);
    state_.snapshots.assign(J * 5, 0.0);
    z_.assign(J, 0.0);
    shrinks_.assign(J, 0);
  }

  double choose_price(std::span<const double> x, std::int64_t t) const {
    if (t < 1 || t > config_.T) {
      throw ProtocolError("period " + std::to_string(t) + " outside [1, T]");
    }
    const std::int64_t j = cube_index(partition_, x);
    return state_.grids[static_cast<std::size_t>(j)].price(phase_index(t));
  }

  // Runs the recorder on the raw record and absorbs the result. Returns the
  // privatized vector z_t, valid until the next call.
  std::span<const double> record(std::span<const double> x, double p, double y,
                                 std::int64_t t) {
    if (t != state_.last_t + 1) {
      throw ProtocolError("expected period " + std::to_string(state_.last_t + 1) +
                          ", got " + std::to_string(t));
    }
    if (p != choose_price(x, t)) {
      throw ProtocolError("price " + std::to_string(p) +
                          " was not offered by this policy at period " + std::to_string(t));
    }
    recorder_.privatize(x, p, y, z_);
    absorb(z_, t);
    return z_;
  }

  // Platform-side update from a privatized vector.
  void absorb(std::span<const double> z, std::int64_t t) {
    if (t != state_.last_t + 1) {
      throw ProtocolError("expected period " + std::to_string(state_.last_t + 1) +
                          ", got " + std::to_string(t));
    }
    if (z.size() != state_.grids.size()) {
      throw ProtocolError("privatized vector has wrong length");
    }
    const auto k = static_cast<std::size_t>(phase_index(t) - 1);
    for (std::size_t j = 0; j < z.size(); ++j) state_.sums[j * 5 + k] += z[j];
    state_.last_t = t;
  }

  std::vector<ShrinkEvent> maybe_shrink(std::int64_t t) {
    if (t != state_.last_t) {
      throw ProtocolError("shrink check must follow the record for period " +
                          std::to_string(t));
    }
    std::vector<ShrinkEvent> events;
    for (std::size_t j = 0; j < state_.grids.size(); ++j) {
      if (auto dir = evaluate_cut(j, t)) {
        PriceGrid& g = state_.grids[j];
        g = shrink_grid(g, *dir, t);
        for (std::size_t k = 0; k < 5; ++k) {
          state_.snapshots[j * 5 + k] = state_.sums[j * 5 + k];
        }
        ++shrinks_[j];
        events.push_back({static_cast<std::int64_t>(j), *dir, t});
      }
    }
    return events;
  }

  void observe(std::span<const double> x, double p, double y, std::int64_t t) {
    record(x, p, y, t);
    maybe_shrink(t);
  }

  const LppqConfig& config() const { return config_; }
  const HypercubePartition& partition() const { return partition_; }
  std::int64_t cube_count() const { return partition_.J; }
  int dimension() const { return partition_.d; }
  const LppqState& state() const { return state_; }
  const LppqRecorder& recorder() const { return recorder_; }
  const PriceGrid& grid(std::int64_t j) const {
    return state_.grids[static_cast<std::size_t>(j)];
  }
  double running_sum(std::int64_t j, int k) const {
    return state_.sums[static_cast<std::size_t>(j) * 5 + static_cast<std::size_t>(k - 1)];
  }
  // r_hat_{j,k}: running sum since the cube's last reset.
  double epoch_sum(std::int64_t j, int k) const {
    const std::size_t idx = static_cast<std::size_t>(j) * 5 + static_cast<std::size_t>(k - 1);
    return state_.sums[idx] - state_.snapshots[idx];
  }
  std::int64_t shrinks(std::int64_t j) const { return shrinks_[static_cast<std::size_t>(j)]; }
  std::int64_t shrinks_total() const {
    std::int64_t s = 0;
    for (auto v : shrinks_) s += v;
    return s;
  }
  std::vector<std::int64_t> shrink_counts() const { return shrinks_; }

 private:
  std::optional<CutDirection> evaluate_cut(std::size_t j, std::int64_t t) const {
    const PriceGrid& g = state_.grids[j];
    const auto n = static_cast<double>(t - g.pointer);
    if (n < 1.0 || !(n >= config_.kappa2) || !can_shrink(g)) return std::nullopt;
    std::array<double, 5> r{};
    for (std::size_t k = 0; k < 5; ++k) {
      r[k] = state_.sums[j * 5 + k] - state_.snapshots[j * 5 + k];
    }
    const double vol = partition_.cube_volume();
    // kappa1 / eps absorbs the demand-sampling error only while eps <= 1.
    // Without privacy noise the width is kept at its eps = 1 value instead of
    // collapsing to zero.
    const double eps_width = std::isfinite(config_.eps) ? config_.eps : 1.0;
    const double threshold = 3.0 * config_.kappa1 / (eps_width * vol * std::sqrt(n));
    const double scale = 5.0 * vol * n;
    if (std::min(r[1] - r[0], r[2] - r[1]) / scale > threshold) return CutDirection::kLeft;
    if (std::min(r[2] - r[3], r[3] - r[4]) / scale > threshold) return CutDirection::kRight;
    return std::nullopt;
  }

  LppqConfig config_;
  HypercubePartition partition_;
  LppqRecorder recorder_;
  LppqState state_;
  std::vector<double> z_;
  std::vector<std::int64_t> shrinks_;
};

static_assert(PricingPolicy<Lppq>);

}  // namespace privbandit

#endif  // PRIVBANDIT_LPPQ_HPP_
