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

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "privbandit/partition.hpp"
#include "privbandit/prng.hpp"

namespace pb = privbandit;

namespace {

void ExpectGrid(const pb::PriceGrid& g, std::array<double, 5> want) {
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(g.rho[k], want[k], 1e-12) << "k=" << k;
}

TEST(BuildPartition, PerfectSquare) {
  const auto p = pb::build_partition(2, 4);
  EXPECT_EQ(p.m, 2);
  EXPECT_EQ(p.J, 4);
  EXPECT_DOUBLE_EQ(p.h, 0.5);
}

TEST(BuildPartition, RoundsCubesPerAxisUp) {
  const auto p = pb::build_partition(2, 40);
  EXPECT_EQ(p.m, 7);
  EXPECT_EQ(p.J, 49);
  EXPECT_DOUBLE_EQ(p.h, 1.0 / 7.0);
}

TEST(BuildPartition, OneDimensionIsIdentity) {
  const auto p = pb::build_partition(1, 5);
  EXPECT_EQ(p.m, 5);
  EXPECT_EQ(p.J, 5);
  EXPECT_DOUBLE_EQ(p.h, 0.2);
}

TEST(BuildPartition, ExactPowersAreNotInflated) {
  EXPECT_EQ(pb::build_partition(3, 27).m, 3);
  EXPECT_EQ(pb::build_partition(2, 49).m, 7);
  EXPECT_EQ(pb::build_partition(2, 50).m, 8);
  EXPECT_EQ(pb::build_partition(4, 1).J, 1);
}

TEST(BuildPartition, RejectsBadArguments) {
  EXPECT_THROW(pb::build_partition(0, 4), pb::ParameterError);
  EXPECT_THROW(pb::build_partition(2, 0), pb::ParameterError);
  EXPECT_THROW(pb::build_partition(64, 1LL << 62), pb::ParameterError);
}

TEST(CubeIndex, RowMajorFirstCoordinateMostSignificant) {
  const auto p = pb::build_partition(2, 4);
  const std::array<double, 2> x{0.1, 0.9};
  EXPECT_EQ(pb::cube_index(p, x), 1);
}

TEST(CubeIndex, UpperFaceClampsIntoLastCell) {
  const auto p = pb::build_partition(2, 4);
  const std::array<double, 2> x{1.0, 1.0};
  EXPECT_EQ(pb::cube_index(p, x), 3);
}

TEST(CubeIndex, SevenBySevenCentre) {
  const auto p = pb::build_partition(2, 49);
  const std::array<double, 2> x{0.5, 0.5};
  EXPECT_EQ(pb::cube_index(p, x), 24);
}

TEST(CubeIndex, RejectsOutOfDomain) {
  const auto p = pb::build_partition(2, 4);
  const std::array<double, 2> neg{-0.01, 0.5};
  const std::array<double, 2> big{0.5, 1.0000001};
  const std::array<double, 2> nan{std::nan(""), 0.5};
  const std::array<double, 3> wrong_d{0.1, 0.1, 0.1};
  EXPECT_THROW(pb::cube_index(p, neg), pb::InputError);
  EXPECT_THROW(pb::cube_index(p, big), pb::InputError);
  EXPECT_THROW(pb::cube_index(p, nan), pb::InputError);
  EXPECT_THROW(pb::cube_index(p, wrong_d), pb::InputError);
}

TEST(CubeIndex, PartitionCoversUnitCube) {
  pb::RngStream s(7, "cover");
  for (int d : {1, 2, 3}) {
    const auto p = pb::build_partition(d, d == 1 ? 5 : 10);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int i = 0; i < 100000 / 3; ++i) {
      for (auto& xi : x) xi = s.next_unit();
      if (i % 97 == 0) x[0] = 1.0;
      const auto j = pb::cube_index(p, x);
      ASSERT_GE(j, 0);
      ASSERT_LT(j, p.J);
      for (int a = 0; a < d; ++a) {
        const auto b = pb::cube_axis_bounds(p, j, a);
        const double xi = x[static_cast<std::size_t>(a)];
        ASSERT_GE(xi, b.lo);
        if (xi < 1.0) {
          ASSERT_LT(xi, b.hi);
        } else {
          ASSERT_DOUBLE_EQ(b.hi, 1.0);
        }
      }
    }
  }
}

TEST(InitPriceGrid, SimulationRange) { ExpectGrid(pb::init_price_grid(0.5, 4.5), {0.5, 1.5, 2.5, 3.5, 4.5}); }

TEST(InitPriceGrid, UnitInterval) { ExpectGrid(pb::init_price_grid(0.0, 1.0), {0.0, 0.25, 0.5, 0.75, 1.0}); }

TEST(InitPriceGrid, TinyWidthStillAscending) {
  const double w = 4e-9;
  const auto g = pb::init_price_grid(2.0, 2.0 + w);
  for (std::size_t k = 0; k + 1 < 5; ++k) {
    EXPECT_LT(g.rho[k], g.rho[k + 1]);
    EXPECT_NEAR(g.rho[k + 1] - g.rho[k], w / 4.0, w * 1e-6);
  }
  EXPECT_EQ(g.epoch, 1);
  EXPECT_EQ(g.pointer, 0);
}

TEST(InitPriceGrid, RejectsEmptyInterval) {
  EXPECT_THROW(pb::init_price_grid(1.0, 1.0), pb::ParameterError);
  EXPECT_THROW(pb::init_price_grid(2.0, 1.0), pb::ParameterError);
}

TEST(ShrinkGrid, LeftCutKeepsUpperThreeQuarters) {
  const auto g = pb::shrink_grid(pb::init_price_grid(0.5, 4.5), pb::CutDirection::kLeft, 17);
  ExpectGrid(g, {1.5, 2.25, 3.0, 3.75, 4.5});
  EXPECT_EQ(g.epoch, 2);
  EXPECT_EQ(g.pointer, 17);
}

TEST(ShrinkGrid, RightCutKeepsLowerThreeQuarters) {
  const auto g = pb::shrink_grid(pb::init_price_grid(0.5, 4.5), pb::CutDirection::kRight, 3);
  ExpectGrid(g, {0.5, 1.25, 2.0, 2.75, 3.5});
  EXPECT_EQ(g.epoch, 2);
  EXPECT_EQ(g.pointer, 3);
}

TEST(ShrinkGrid, TwoCutsScaleWidthByNineSixteenths) {
  auto g = pb::init_price_grid(0.5, 4.5);
  g = pb::shrink_grid(g, pb::CutDirection::kLeft, 1);
  g = pb::shrink_grid(g, pb::CutDirection::kRight, 2);
  EXPECT_NEAR(g.width(), 4.0 * 9.0 / 16.0, 1e-12);
}

TEST(ShrinkGrid, WidthAfterManyCutsAndStaysInBounds) {
  pb::RngStream s(11, "cuts");
  for (int trial = 0; trial < 200; ++trial) {
    auto g = pb::init_price_grid(0.5, 4.5);
    for (int n = 1; n <= 40; ++n) {
      const auto dir = s.next_u64() & 1 ? pb::CutDirection::kLeft : pb::CutDirection::kRight;
      g = pb::shrink_grid(g, dir, n);
      const double want = 4.0 * std::pow(0.75, n);
      ASSERT_NEAR(g.width(), want, 1e-9 * want);
      ASSERT_EQ(g.epoch, n + 1);
      for (std::size_t k = 0; k < 5; ++k) {
        ASSERT_GE(g.rho[k], 0.5);
        ASSERT_LE(g.rho[k], 4.5);
      }
      for (std::size_t k = 0; k + 1 < 5; ++k) {
        ASSERT_NEAR(g.rho[k + 1] - g.rho[k], g.width() / 4.0, 1e-12 * 4.0);
      }
    }
  }
}

TEST(ShrinkGrid, CutRulesNeverDiscardQuadraticMaximizer) {
  // f(p) = -(p - p*)^2: brute force over maximizers and grid positions.
  for (int lo_i = 0; lo_i < 20; ++lo_i) {
    for (int w_i = 1; w_i <= 20; ++w_i) {
      const double lo = 0.1 * lo_i, hi = lo + 0.13 * w_i;
      const auto g = pb::init_price_grid(lo, hi);
      for (int s = 0; s <= 200; ++s) {
        const double star = lo + (hi - lo) * s / 200.0;
        auto f = [&](double p) { return -(p - star) * (p - star); };
        if (f(g.rho[0]) <= f(g.rho[1]) && f(g.rho[1]) <= f(g.rho[2])) {
          ASSERT_GE(star, g.rho[1] - 1e-12);
        }
        if (f(g.rho[4]) <= f(g.rho[3]) && f(g.rho[3]) <= f(g.rho[2])) {
          ASSERT_LE(star, g.rho[3] + 1e-12);
        }
      }
    }
  }
}

TEST(CanShrink, FalseOnceQuartilesCollapse) {
  auto g = pb::init_price_grid(0.5, 4.5);
  int cuts = 0;
  while (pb::can_shrink(g) && cuts < 1000) {
    g = pb::shrink_grid(g, pb::CutDirection::kLeft, cuts);
    ++cuts;
  }
  EXPECT_LT(cuts, 1000);
  EXPECT_GT(cuts, 100);
  for (std::size_t k = 0; k + 1 < 5; ++k) EXPECT_LT(g.rho[k], g.rho[k + 1]);
}

TEST(PhaseIndex, Examples) {
  EXPECT_EQ(pb::phase_index(1), 1);
  EXPECT_EQ(pb::phase_index(5), 5);
  EXPECT_EQ(pb::phase_index(12), 2);
}

TEST(PhaseIndex, CyclesAndRejectsZero) {
  for (std::int64_t t = 1; t <= 50; ++t) EXPECT_EQ(pb::phase_index(t), (t - 1) % 5 + 1);
  EXPECT_THROW(pb::phase_index(0), pb::InputError);
}

}  // namespace
