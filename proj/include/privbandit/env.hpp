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

// Synthetic demand environments. Each environment fixes a mean demand
// lambda(p, x), the expected revenue f(p, x) = p * lambda(p, x), the
// clairvoyant price p*(x) = argmax_p f(p, x), and how contexts and demands
// are drawn.

#ifndef PRIVBANDIT_ENV_HPP_
#define PRIVBANDIT_ENV_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privbandit/errors.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/prng.hpp"

namespace privbandit {

template <class E>
concept DemandEnvironment =
    requires(const E& env, double p, std::span<const double> x,
             std::span<double> out, RngStream& stream) {
      { env.dimension() } -> std::convertible_to<int>;
      { env.price_lo() } -> std::convertible_to<double>;
      { env.price_hi() } -> std::convertible_to<double>;
      // Upper bound on |p * y| over the whole domain.
      { env.revenue_bound() } -> std::convertible_to<double>;
      { env.name() } -> std::convertible_to<std::string>;
      env.sample_context(stream, out);
      { env.mean_demand(p, x) } -> std::convertible_to<double>;
      { env.mean_revenue(p, x) } -> std::convertible_to<double>;
      { env.realize_demand(p, x, stream) } -> std::convertible_to<double>;
      { env.oracle_price(x) } -> std::convertible_to<double>;
    };

namespace internal {

inline void CheckUnitContext(std::span<const double> x, int d) {
  if (static_cast<int>(x.size()) != d) {
    throw InputError("context has dimension " + std::to_string(x.size()) +
                     ", environment expects " + std::to_string(d));
  }
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
      throw InputError("context coordinate outside [0,1]: " + std::to_string(xi));
    }
  }
}

inline void CheckPrice(double p, double lo, double hi) {
  if (!(p >= lo && p <= hi)) {
    throw InputError("price " + std::to_string(p) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

inline void SampleUnitCube(RngStream& stream, std::span<double> out) {
  for (double& xi : out) xi = stream.next_unit();
}

}  // namespace internal

// Linear demand in two context features with additive uniform noise:
//   y = theta0 + theta1 x1 + theta2 x2 + theta3 p + nu,  nu ~ U[-w, w].
// Demand is not clipped, so revenue can leave [0, 1].
class LinearDemandEnv {
 public:
  using Theta = std::array<double, 4>;
  static constexpr Theta kDefaultTheta = {0.4, 0.6, 0.6, -0.2};

  explicit LinearDemandEnv(Theta theta = kDefaultTheta, double p_lo = 0.5,
                           double p_hi = 4.5, double noise_half_width = 0.1)
      : theta_(theta), p_lo_(p_lo), p_hi_(p_hi), noise_half_width_(noise_half_width) {
    if (!(p_lo < p_hi)) throw ParameterError("price bounds require p_lo < p_hi");
    if (!(noise_half_width >= 0.0)) {
      throw ParameterError("noise half-width must be non-negative");
    }
    if (theta_[3] == 0.0) throw ModelError("theta3 = 0: revenue has no maximizer");
    if (!(theta_[3] < 0.0)) throw ModelError("theta3 must be negative");
    for (double x1 : {0.0, 1.0}) {
      for (double x2 : {0.0, 1.0}) {
        const double p = unconstrained_maximizer(x1, x2);
        if (!(p > p_lo_ && p < p_hi_)) {
          throw ModelError("revenue maximizer at corner (" + std::to_string(x1) +
                           "," + std::to_string(x2) + ") is not interior");
        }
      }
    }
    double max_abs = 0.0;
    for (double x1 : {0.0, 1.0}) {
      for (double x2 : {0.0, 1.0}) {
        for (double p : {p_lo_, p_hi_}) {
          max_abs = std::max(max_abs, std::fabs(linear_part(x1, x2) + theta_[3] * p));
        }
      }
    }
    revenue_bound_ = p_hi_ * (max_abs + noise_half_width_);
  }

  int dimension() const { return 2; }
  double price_lo() const { return p_lo_; }
  double price_hi() const { return p_hi_; }
  double revenue_bound() const { return revenue_bound_; }
  std::string name() const { return "linear"; }
  const Theta& theta() const { return theta_; }
  double noise_half_width() const { return noise_half_width_; }

  void sample_context(RngStream& stream, std::span<double> out) const {
    internal::SampleUnitCube(stream, out);
  }

  double mean_demand(double p, std::span<const double> x) const {
    internal::CheckUnitContext(x, 2);
    internal::CheckPrice(p, p_lo_, p_hi_);
    return linear_part(x[0], x[1]) + theta_[3] * p;
  }

  double mean_revenue(double p, std::span<const double> x) const {
    return p * mean_demand(p, x);
  }

  // Demand with an explicit noise value instead of a draw.
  double demand_with_noise(double p, std::span<const double> x, double noise) const {
    return mean_demand(p, x) + noise;
  }

  double realize_demand(double p, std::span<const double> x, RngStream& stream) const {
    const double mean = mean_demand(p, x);
    if (noise_half_width_ == 0.0) return mean;
    return mean + uniform_sample(stream, -noise_half_width_, noise_half_width_);
  }

  double oracle_price(std::span<const double> x) const {
    internal::CheckUnitContext(x, 2);
    return std::clamp(unconstrained_maximizer(x[0], x[1]), p_lo_, p_hi_);
  }

 private:
  double linear_part(double x1, double x2) const {
    return theta_[0] + theta_[1] * x1 + theta_[2] * x2;
  }
  double unconstrained_maximizer(double x1, double x2) const {
    return -linear_part(x1, x2) / (2.0 * theta_[3]);
  }

  Theta theta_;
  double p_lo_;
  double p_hi_;
  double noise_half_width_;
  double revenue_bound_ = 0.0;
};

// Euclidean distance from x to the boundary of the cube containing it. Inside
// an axis-aligned box this is the smallest per-axis face distance.
inline double boundary_distance(const HypercubePartition& part,
                                std::span<const double> x) {
  const std::int64_t j = cube_index(part, x);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < part.d; ++i) {
    const AxisInterval b = cube_axis_bounds(part, j, i);
    const double xi = x[static_cast<std::size_t>(i)];
    best = std::min({best, xi - b.lo, b.hi - xi});
  }
  return std::max(best, 0.0);
}

// Bernoulli demand family indexed by nu in {0,1}^J:
//   lambda(p, x) = 2/3 - p/2 + nu_j(x) (1/3 - p/2) dist(x, boundary of B_j(x)).
// Prices live in [0, 1] and contexts are uniform on [0,1]^d.
class AdversarialEnv {
 public:
  AdversarialEnv(HypercubePartition partition, std::vector<std::uint8_t> nu)
      : partition_(partition), nu_(std::move(nu)) {
    if (static_cast<std::int64_t>(nu_.size()) != partition_.J) {
      throw ParameterError("nu has " + std::to_string(nu_.size()) +
                           " entries, partition has " + std::to_string(partition_.J) +
                           " cubes");
    }
    for (auto b : nu_) {
      if (b > 1) throw ParameterError("nu entries must be 0 or 1");
    }
  }

  // nu drawn as fair coin flips from `stream`.
  static AdversarialEnv random(HypercubePartition partition, RngStream& stream) {
    std::vector<std::uint8_t> nu(static_cast<std::size_t>(partition.J));
    for (auto& b : nu) b = static_cast<std::uint8_t>(stream.next_u64() >> 63);
    return AdversarialEnv(partition, std::move(nu));
  }

  int dimension() const { return partition_.d; }
  double price_lo() const { return 0.0; }
  double price_hi() const { return 1.0; }
  double revenue_bound() const { return 1.0; }
  std::string name() const { return "adversarial"; }
  const HypercubePartition& partition() const { return partition_; }
  const std::vector<std::uint8_t>& nu() const { return nu_; }

  void sample_context(RngStream& stream, std::span<double> out) const {
    internal::SampleUnitCube(stream, out);
  }

  double mean_demand(double p, std::span<const double> x) const {
    internal::CheckUnitContext(x, partition_.d);
    internal::CheckPrice(p, 0.0, 1.0);
    const std::int64_t j = cube_index(partition_, x);
    const double base = 2.0 / 3.0 - p / 2.0;
    if (nu_[static_cast<std::size_t>(j)] == 0) return base;
    return base + (1.0 / 3.0 - p / 2.0) * boundary_distance(partition_, x);
  }

  double lambda_nu(double p, std::span<const double> x) const {
    return mean_demand(p, x);
  }

  double mean_revenue(double p, std::span<const double> x) const {
    return p * mean_demand(p, x);
  }

  double realize_demand(double p, std::span<const double> x, RngStream& stream) const {
    return stream.next_unit() < mean_demand(p, x) ? 1.0 : 0.0;
  }

  double oracle_price(std::span<const double> x) const {
    internal::CheckUnitContext(x, partition_.d);
    const std::int64_t j = cube_index(partition_, x);
    if (nu_[static_cast<std::size_t>(j)] == 0) return 2.0 / 3.0;
    const double m = boundary_distance(partition_, x);
    return 2.0 / 3.0 - m / (3.0 * (1.0 + m));
  }

 private:
  HypercubePartition partition_;
  std::vector<std::uint8_t> nu_;
};

static_assert(DemandEnvironment<LinearDemandEnv>);
static_assert(DemandEnvironment<AdversarialEnv>);

struct AssumptionReport {
  // Strong concavity: sigma_H^2 <= -f_B'' <= C_H^2 on the price grid.
  bool concavity_pass = false;
  double min_neg_curvature = 0.0;  // measured sigma_H^2
  double max_neg_curvature = 0.0;  // measured C_H^2
  // Cube-averaged maximizer strictly inside the price range.
  bool interior_maximizer_pass = false;
  // Lipschitz constant estimate of f in (p, x).
  double lipschitz_estimate = 0.0;
};

// Finite-difference audit of the regularity conditions the quadrisection
// policies rely on. f_B is approximated per cube of a `cubes_per_axis`^d
// partition by averaging over `samples_per_cube` contexts drawn in the cube.
template <DemandEnvironment Env>
AssumptionReport check_assumptions(const Env& env, int grid_resolution,
                                   RngStream& stream, int cubes_per_axis = 2,
                                   int samples_per_cube = 64) {
  if (grid_resolution < 4) throw ParameterError("grid_resolution must be >= 4");
  const int d = env.dimension();
  std::int64_t cubes = 1;
  for (int i = 0; i < d; ++i) cubes *= cubes_per_axis;
  const HypercubePartition part = build_partition(d, cubes);

  const double lo = env.price_lo();
  const double hi = env.price_hi();
  const double step = (hi - lo) / grid_resolution;

  AssumptionReport report;
  report.min_neg_curvature = std::numeric_limits<double>::infinity();
  report.max_neg_curvature = -std::numeric_limits<double>::infinity();
  report.interior_maximizer_pass = true;

  std::vector<double> ctx(static_cast<std::size_t>(d));
  std::vector<std::vector<double>> samples;
  std::vector<double> fb(static_cast<std::size_t>(grid_resolution + 1));
  for (std::int64_t j = 0; j < part.J; ++j) {
    samples.clear();
    for (int s = 0; s < samples_per_cube; ++s) {
      for (int i = 0; i < d; ++i) {
        const AxisInterval b = cube_axis_bounds(part, j, i);
        ctx[static_cast<std::size_t>(i)] = b.lo + stream.next_unit() * (b.hi - b.lo);
      }
      samples.push_back(ctx);
    }
    for (int g = 0; g <= grid_resolution; ++g) {
      const double p = g == grid_resolution ? hi : lo + g * step;
      double acc = 0.0;
      for (const auto& x : samples) acc += env.mean_revenue(p, x);
      fb[static_cast<std::size_t>(g)] = acc / samples_per_cube;
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < fb.size(); ++g) {
      if (fb[g] > fb[best]) best = g;
    }
    if (best == 0 || best + 1 == fb.size()) report.interior_maximizer_pass = false;
    for (std::size_t g = 1; g + 1 < fb.size(); ++g) {
      const double second = (fb[g + 1] - 2.0 * fb[g] + fb[g - 1]) / (step * step);
      report.min_neg_curvature = std::min(report.min_neg_curvature, -second);
      report.max_neg_curvature = std::max(report.max_neg_curvature, -second);
    }
  }
  // Curvature below this is indistinguishable from zero in double arithmetic.
  report.concavity_pass = report.min_neg_curvature > 1e-6;

  // Lipschitz: random pairs of (p, x).
  std::vector<double> x1(static_cast<std::size_t>(d)), x2(static_cast<std::size_t>(d));
  double lip = 0.0;
  for (int s = 0; s < 4096; ++s) {
    env.sample_context(stream, x1);
    env.sample_context(stream, x2);
    const double p1 = lo + stream.next_unit() * (hi - lo);
    const double p2 = lo + stream.next_unit() * (hi - lo);
    double dx = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = x1[static_cast<std::size_t>(i)] - x2[static_cast<std::size_t>(i)];
      dx += diff * diff;
    }
    const double denom = std::fabs(p1 - p2) + std::sqrt(dx);
    if (denom < 1e-12) continue;
    lip = std::max(lip, std::fabs(env.mean_revenue(p1, x1) - env.mean_revenue(p2, x2)) / denom);
  }
  report.lipschitz_estimate = lip;
  return report;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_ENV_HPP_
