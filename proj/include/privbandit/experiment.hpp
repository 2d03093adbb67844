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

#ifndef PRIVBANDIT_EXPERIMENT_HPP_
#define PRIVBANDIT_EXPERIMENT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "privbandit/config.hpp"
#include "privbandit/harness.hpp"

namespace privbandit {

// One (policy, eps, T) cell of an experiment grid.
struct CellResult {
  PolicyKind kind;
  double eps;
  std::int64_t T;
  ReplicationResult result;
};

// Runs every (eps, T, rep) of the grid. Cells come back in eps-major,
// then T, order as listed in the config; runs inside a cell by rep index.
// All tasks share one worker pool, and the output does not depend on `jobs`.
inline std::vector<CellResult> run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                                              int jobs) {
  config.validate();
  const AnyEnvironment env = make_environment(config.env);
  std::vector<CellResult> cells;
  for (double e : config.eps) {
    for (auto T : config.T) {
      CellResult c{effective_kind(config.policy.kind, e), e, T, {}};
      c.result.runs.resize(static_cast<std::size_t>(config.reps));
      cells.push_back(std::move(c));
    }
  }
  const auto reps = config.reps;
  parallel_for(static_cast<std::int64_t>(cells.size()) * reps, jobs, [&](std::int64_t task) {
    CellResult& c = cells[static_cast<std::size_t>(task / reps)];
    const std::int64_t rep = task % reps;
    c.result.runs[static_cast<std::size_t>(rep)] = run_cell(config.policy, env, c.T, c.eps, seed, rep);
  });
  for (auto& c : cells) c.result.aggregate = aggregate(c.result.runs);
  return cells;
}

inline std::vector<RunRecord> flatten_runs(std::span<const CellResult> cells) {
  std::vector<RunRecord> out;
  for (const auto& c : cells) out.insert(out.end(), c.result.runs.begin(), c.result.runs.end());
  return out;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_EXPERIMENT_HPP_
