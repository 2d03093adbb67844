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

// Drives both private pricing policies by hand on the linear demand model
// and prints their percentage regret next to the noise-free baseline.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <vector>

#include "privbandit/privbandit.hpp"

namespace pb = privbandit;

int main() {
  const pb::LinearDemandEnv env;
  const std::int64_t T = 12500;
  const std::uint64_t seed = 2026;

  // One explicit loop, to show the policy protocol.
  {
    pb::EpisodeStreams s = pb::episode_streams(seed, 0);
    pb::Lppq policy(pb::LppqConfig::experiment(T, 1.0, env.dimension()), env.dimension(),
                    env.price_lo(), env.price_hi(), env.revenue_bound(), s.noise);
    std::vector<double> x(2);
    double regret = 0.0, best_total = 0.0;
    for (std::int64_t t = 1; t <= T; ++t) {
      env.sample_context(s.context, x);
      const double p = policy.choose_price(x, t);
      const double y = env.realize_demand(p, x, s.demand);
      policy.observe(x, p, y, t);
      const double best = env.mean_revenue(env.oracle_price(x), x);
      best_total += best;
      regret += best - env.mean_revenue(p, x);
    }
    std::cout << "hand-driven LPPQ, eps=1: " << std::fixed << std::setprecision(2)
              << 100.0 * regret / best_total << "% regret, " << policy.shrinks_total()
              << " grid cuts over " << policy.cube_count() << " cubes\n";
  }

  // The same through the harness, for a few privacy levels.
  for (double eps : {pb::kInfiniteEpsilon, 10.0, 1.0, 0.1}) {
    const pb::RunRecord cppq = pb::cppq_run(pb::CppqConfig::experiment(T, eps, 2), env, seed);
    std::cout << std::left << std::setw(12) << pb::epsilon_label(eps) << " CPPQ "
              << std::right << std::setw(6) << pb::percentage_regret(cppq) << "%";
    if (std::isfinite(eps)) {
      const pb::RunRecord lppq = pb::lppq_run(pb::LppqConfig::experiment(T, eps, 2), env, seed);
      std::cout << "   LPPQ " << std::setw(6) << pb::percentage_regret(lppq) << "%";
    }
    std::cout << "\n";
  }
  return 0;
}
