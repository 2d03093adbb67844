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

// Context-space partition into congruent hypercubes and the five-point
// quadrisection price grid kept per cube.

#ifndef PRIVBANDIT_PARTITION_HPP_
#define PRIVBANDIT_PARTITION_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "privbandit/errors.hpp"

namespace privbandit {

// Equal partition of [0,1]^d into m^d axis-aligned cubes of side h = 1/m.
// Cube ids are the row-major base-m expansion of the per-axis cell digits,
// first coordinate most significant.
struct HypercubePartition {
  int d = 1;
  std::int64_t m = 1;
  std::int64_t J = 1;
  double h = 1.0;

  // Volume h^d of one cube; equals 1/J.
  double cube_volume() const { return 1.0 / static_cast<double>(J); }
};

namespace internal {

// base^exp, or -1 when it overflows int64.
inline std::int64_t CheckedPow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / base) return -1;
    r *= base;
  }
  return r;
}

}  // namespace internal

// Smallest m with m^d >= J_request; J is then m^d.
inline HypercubePartition build_partition(int d, std::int64_t J_request) {
  if (d < 1) throw ParameterError("partition dimension must be >= 1");
  if (J_request < 1) throw ParameterError("requested cube count must be >= 1");
  auto m = static_cast<std::int64_t>(
      std::llround(std::pow(static_cast<double>(J_request), 1.0 / d)));
  if (m < 1) m = 1;
  // pow() is inexact; walk to the exact ceiling.
  while (m > 1) {
    const std::int64_t below = internal::CheckedPow(m - 1, d);
    if (below >= 0 && below >= J_request) {
      --m;
    } else {
      break;
    }
  }
  for (;;) {
    const std::int64_t p = internal::CheckedPow(m, d);
    if (p < 0) {
      throw ParameterError("partition size m^d overflows for J_request=" +
                           std::to_string(J_request));
    }
    if (p >= J_request) break;
    ++m;
  }
  HypercubePartition part;
  part.d = d;
  part.m = m;
  part.J = internal::CheckedPow(m, d);
  part.h = 1.0 / static_cast<double>(m);
  return part;
}

// Per-axis cell digit of a coordinate; 1.0 clamps into the top cell.
inline std::int64_t axis_cell(const HypercubePartition& part, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw InputError("context coordinate outside [0,1]: " + std::to_string(xi));
  }
  auto c = static_cast<std::int64_t>(std::floor(xi * static_cast<double>(part.m)));
  return c < part.m - 1 ? c : part.m - 1;
}

inline std::int64_t cube_index(const HypercubePartition& part,
                               std::span<const double> x) {
  if (static_cast<int>(x.size()) != part.d) {
    throw InputError("context has dimension " + std::to_string(x.size()) +
                     ", partition expects " + std::to_string(part.d));
  }
  std::int64_t j = 0;
  for (double xi : x) j = j * part.m + axis_cell(part, xi);
  return j;
}

// Lower corner digit of cube j along axis i.
inline std::int64_t cube_digit(const HypercubePartition& part, std::int64_t j,
                               int axis) {
  for (int i = part.d - 1; i > axis; --i) j /= part.m;
  return j % part.m;
}

struct AxisInterval {
  double lo;
  double hi;
};

inline AxisInterval cube_axis_bounds(const HypercubePartition& part,
                                     std::int64_t j, int axis) {
  const auto c = static_cast<double>(cube_digit(part, j, axis));
  const auto m = static_cast<double>(part.m);
  return {c / m, (c + 1.0) / m};
}

enum class CutDirection {
  kLeft,   // keep [rho_2, rho_5]
  kRight,  // keep [rho_1, rho_4]
};

inline const char* to_string(CutDirection dir) {
  return dir == CutDirection::kLeft ? "left" : "right";
}

// Five ascending, equally spaced prices over the cube's current interval.
// `epoch` counts shrinks plus one; `pointer` is the period of the last reset.
struct PriceGrid {
  std::array<double, 5> rho{};
  int epoch = 1;
  std::int64_t pointer = 0;

  double lo() const { return rho[0]; }
  double hi() const { return rho[4]; }
  double width() const { return rho[4] - rho[0]; }
  // Price for phase k in 1..5.
  double price(int k) const { return rho[static_cast<std::size_t>(k - 1)]; }
};

namespace internal {

inline std::array<double, 5> Quartiles(double lo, double hi) {
  const double w = hi - lo;
  return {lo, lo + 0.25 * w, lo + 0.5 * w, lo + 0.75 * w, hi};
}

inline bool StrictlyAscending(const std::array<double, 5>& r) {
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    if (!(r[k] < r[k + 1])) return false;
  }
  return true;
}

}  // namespace internal

inline PriceGrid init_price_grid(double p_lo, double p_hi) {
  if (!(p_lo < p_hi)) throw ParameterError("price grid requires p_lo < p_hi");
  PriceGrid g;
  g.rho = internal::Quartiles(p_lo, p_hi);
  if (!internal::StrictlyAscending(g.rho)) {
    throw ParameterError("price interval too narrow to hold five distinct prices");
  }
  return g;
}

// True when a further cut still yields five distinct prices.
inline bool can_shrink(const PriceGrid& grid) {
  const auto left = internal::Quartiles(grid.rho[1], grid.rho[4]);
  const auto right = internal::Quartiles(grid.rho[0], grid.rho[3]);
  return internal::StrictlyAscending(left) && internal::StrictlyAscending(right);
}

inline PriceGrid shrink_grid(const PriceGrid& grid, CutDirection dir,
                             std::int64_t now) {
  PriceGrid out;
  out.rho = dir == CutDirection::kLeft
                ? internal::Quartiles(grid.rho[1], grid.rho[4])
                : internal::Quartiles(grid.rho[0], grid.rho[3]);
  out.epoch = grid.epoch + 1;
  out.pointer = now;
  return out;
}

// Phase k_t in 1..5 for period t >= 1.
inline int phase_index(std::int64_t t) {
  if (t < 1) throw InputError("period index must be >= 1");
  return static_cast<int>((t - 1) % 5) + 1;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_PARTITION_HPP_
