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

// Deterministic labelled random streams and the samplers built on them.
//
// A stream is identified by (root_seed, label). The pair is hashed into a
// SplitMix64 state, so any worker can rebuild the stream for replication
// "rep/7" without coordinating with the others. Streams are not
// cryptographically secure and the Laplace sampler is the textbook
// floating-point inverse CDF; neither is hardened against floating-point
// side channels.

#ifndef PRIVBANDIT_PRNG_HPP_
#define PRIVBANDIT_PRNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "privbandit/errors.hpp"

namespace privbandit {

namespace internal {

inline constexpr std::uint64_t SplitMix64Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a over the label bytes.
inline constexpr std::uint64_t HashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace internal

// One deterministic random stream. Satisfies UniformRandomBitGenerator so it
// can also feed <random> distributions in tests.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t root_seed, std::string label)
      : root_seed_(root_seed), label_(std::move(label)) {
    state_ = internal::SplitMix64Mix(root_seed_ ^ 0x6a09e667f3bcc909ULL) ^
             internal::SplitMix64Mix(internal::HashLabel(label_));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    ++draws_;
    state_ += 0x9e3779b97f4a7c15ULL;
    return internal::SplitMix64Mix(state_);
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double next_open_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Child stream with label "<label>/<suffix>".
  RngStream child(std::string_view suffix) const {
    std::string l = label_;
    l.push_back('/');
    l.append(suffix);
    return RngStream(root_seed_, std::move(l));
  }

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t root_seed_;
  std::string label_;
  std::uint64_t state_ = 0;
  std::uint64_t draws_ = 0;
};

inline RngStream derive_stream(std::uint64_t root_seed, std::string label) {
  return RngStream(root_seed, std::move(label));
}

// Scale b of the density (1/2b) exp(-|x|/b).
class LaplaceParams {
 public:
  explicit LaplaceParams(double scale) : scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw ParameterError("Laplace scale must be positive and finite, got " +
                           std::to_string(scale));
    }
  }
  double scale() const { return scale_; }

 private:
  double scale_;
};

// Inverse CDF of Lap(0, b) evaluated at u in (0, 1).
inline double laplace_inverse_cdf(double u, const LaplaceParams& params) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -params.scale() * sign * std::log1p(-2.0 * std::fabs(centered));
}

inline double laplace_sample(RngStream& stream, const LaplaceParams& params) {
  return laplace_inverse_cdf(stream.next_open_unit(), params);
}

// Affine map of u in [0, 1) onto [lo, hi).
inline double uniform_from_unit(double u, double lo, double hi) {
  if (!(lo < hi)) {
    throw ParameterError("uniform range requires lo < hi");
  }
  return lo + u * (hi - lo);
}

inline double uniform_sample(RngStream& stream, double lo, double hi) {
  if (!(lo < hi)) {
    throw ParameterError("uniform range requires lo < hi");
  }
  const double v = lo + stream.next_unit() * (hi - lo);
  // Rounding can land exactly on hi for wide ranges.
  return v < hi ? v : std::nextafter(hi, lo);
}

}  // namespace privbandit

#endif  // PRIVBANDIT_PRNG_HPP_
