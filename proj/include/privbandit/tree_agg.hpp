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

// Binary-tree private counter for continual release of running sums.
//
// The aggregator keeps one exact partial sum per level l = 0..L, with
// L = floor(log2 T), and a noisy copy of each. The n-th update (n counts this
// aggregator's own updates, starting at 1) rebuilds level l_min(n), the lowest
// set bit of n, from every level below it plus the new item, clears the lower
// levels, and re-noises only the rebuilt level. The released running sum is the
// sum of the noisy levels selected by the bits of n. Every item therefore
// enters at most L+1 noisy partials over the whole horizon, and each noisy
// partial carries Lap(2 * sensitivity * (L+1) / eps_branch).

#ifndef PRIVBANDIT_TREE_AGG_HPP_
#define PRIVBANDIT_TREE_AGG_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/prng.hpp"

namespace privbandit {

class TreeAggregator {
 public:
  // `eps_branch` may be +infinity, which disables noise. `sensitivity` scales
  // the noise for items whose magnitude can exceed one.
  TreeAggregator(double eps_branch, std::int64_t capacity, RngStream stream,
                 double sensitivity = 1.0)
      : capacity_(capacity), stream_(std::move(stream)) {
    if (capacity < 1) throw ParameterError("aggregator capacity must be >= 1");
    if (std::isnan(eps_branch) || !(eps_branch > 0.0)) {
      throw ParameterError("aggregator budget must be positive or infinite");
    }
    if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
      throw ParameterError("aggregator sensitivity must be positive and finite");
    }
    levels_ = std::bit_width(static_cast<std::uint64_t>(capacity)) - 1;
    alpha_.assign(static_cast<std::size_t>(levels_ + 1), 0.0);
    alpha_hat_.assign(static_cast<std::size_t>(levels_ + 1), 0.0);
    if (std::isfinite(eps_branch)) {
      noise_.emplace(2.0 * sensitivity * static_cast<double>(levels_ + 1) /
                     eps_branch);
    }
  }

  double update(double u) {
    if (n_ >= capacity_) {
      throw CapacityError("aggregator capacity " + std::to_string(capacity_) +
                          " exhausted");
    }
    ++n_;
    const auto un = static_cast<std::uint64_t>(n_);
    const int lmin = std::countr_zero(un);
    double rebuilt = u;
    for (int l = 0; l < lmin; ++l) {
      rebuilt += alpha_[l];
      alpha_[l] = 0.0;
      alpha_hat_[l] = 0.0;
    }
    alpha_[lmin] = rebuilt;
    alpha_hat_[lmin] = noise_ ? rebuilt + laplace_sample(stream_, *noise_) : rebuilt;

    double release = 0.0;
    for (std::uint64_t bits = un; bits != 0; bits &= bits - 1) {
      release += alpha_hat_[std::countr_zero(bits)];
    }
    last_release_ = release;
    return release;
  }

  // Most recent release; 0 before the first update.
  double snapshot() const { return last_release_; }

  std::int64_t count() const { return n_; }
  std::int64_t capacity() const { return capacity_; }
  // L = floor(log2 capacity).
  int top_level() const { return levels_; }
  bool noise_enabled() const { return noise_.has_value(); }
  // Laplace scale b per noisy partial, or 0 with noise disabled.
  double noise_scale() const { return noise_ ? noise_->scale() : 0.0; }

  std::span<const double> exact_partials() const { return alpha_; }
  std::span<const double> noisy_partials() const { return alpha_hat_; }

 private:
  std::int64_t capacity_;
  int levels_ = 0;
  std::int64_t n_ = 0;
  std::vector<double> alpha_;
  std::vector<double> alpha_hat_;
  std::optional<LaplaceParams> noise_;
  RngStream stream_;
  double last_release_ = 0.0;
};

inline TreeAggregator new_aggregator(double eps_branch, std::int64_t capacity,
                                     RngStream stream) {
  return TreeAggregator(eps_branch, capacity, std::move(stream));
}

}  // namespace privbandit

#endif  // PRIVBANDIT_TREE_AGG_HPP_
