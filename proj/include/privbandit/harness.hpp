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

// Simulation driver and regret accounting.
//
// Regret accumulates expected-revenue gaps f(p*(x_t), x_t) - f(p_t, x_t);
// realized demand only drives the policy's learning. Replication i of an
// experiment draws contexts from "rep/i/context", demands from
// "rep/i/demand" and privacy noise from "rep/i/noise", so results do not
// depend on how replications are scheduled across workers.

#ifndef PRIVBANDIT_HARNESS_HPP_
#define PRIVBANDIT_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "privbandit/cppq.hpp"
#include "privbandit/env.hpp"
#include "privbandit/errors.hpp"
#include "privbandit/lppq.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/policy.hpp"
#include "privbandit/prng.hpp"

namespace privbandit {

struct RunRecord {
  std::string policy;
  std::string env;
  std::int64_t T = 0;
  double eps = kInfiniteEpsilon;
  std::int64_t J = 0;
  std::int64_t rep = 0;
  std::uint64_t seed = 0;
  double cumulative_regret = 0.0;
  double oracle_revenue = 0.0;
  double realized_expected_revenue = 0.0;
  std::vector<std::int64_t> shrink_counts;

  std::int64_t shrinks_total() const {
    std::int64_t s = 0;
    for (auto v : shrink_counts) s += v;
    return s;
  }
};

inline double percentage_regret(const RunRecord& rec) {
  if (!(rec.oracle_revenue > 0.0)) {
    throw ArithmeticError("percentage regret needs positive oracle revenue");
  }
  return 100.0 * rec.cumulative_regret / rec.oracle_revenue;
}

// Always offers the clairvoyant price.
template <DemandEnvironment Env>
class OraclePolicy {
 public:
  explicit OraclePolicy(const Env& env) : env_(&env) {}
  double choose_price(std::span<const double> x, std::int64_t) const {
    return env_->oracle_price(x);
  }
  void observe(std::span<const double>, double, double, std::int64_t) {}
  std::int64_t shrinks_total() const { return 0; }
  std::int64_t cube_count() const { return 1; }
  int dimension() const { return env_->dimension(); }

 private:
  const Env* env_;
};

class FixedPricePolicy {
 public:
  FixedPricePolicy(double price, int d) : price_(price), d_(d) {}
  double choose_price(std::span<const double>, std::int64_t) const { return price_; }
  void observe(std::span<const double>, double, double, std::int64_t) {}
  std::int64_t shrinks_total() const { return 0; }
  std::int64_t cube_count() const { return 1; }
  int dimension() const { return d_; }

 private:
  double price_;
  int d_;
};

// Per-period callback, mostly for tests: (t, x_t, p_t, y_t, step regret).
using StepObserver =
    std::function<void(std::int64_t, std::span<const double>, double, double, double)>;

template <PricingPolicy Policy, DemandEnvironment Env>
RunRecord run_episode(Policy& policy, const Env& env, std::int64_t T,
                      RngStream context_stream, RngStream demand_stream,
                      const StepObserver& on_step = {}) {
  if (policy.dimension() != env.dimension()) {
    throw ConfigError("policy dimension " + std::to_string(policy.dimension()) +
                      " does not match environment dimension " +
                      std::to_string(env.dimension()));
  }
  if (T < 1) throw ConfigError("horizon T must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(env.dimension()));
  RunRecord rec;
  rec.env = env.name();
  rec.T = T;
  rec.J = policy.cube_count();
  for (std::int64_t t = 1; t <= T; ++t) {
    env.sample_context(context_stream, x);
    const double p = policy.choose_price(x, t);
    const double y = env.realize_demand(p, x, demand_stream);
    policy.observe(x, p, y, t);
    const double best = env.mean_revenue(env.oracle_price(x), x);
    const double got = env.mean_revenue(p, x);
    rec.oracle_revenue += best;
    rec.realized_expected_revenue += got;
    rec.cumulative_regret += best - got;
    if (on_step) on_step(t, x, p, y, best - got);
  }
  return rec;
}

// Streams for replication `rep` of an experiment rooted at `root_seed`.
struct EpisodeStreams {
  RngStream context;
  RngStream demand;
  RngStream noise;
};

inline EpisodeStreams episode_streams(std::uint64_t root_seed, std::int64_t rep) {
  const RngStream base = derive_stream(root_seed, "rep/" + std::to_string(rep));
  return {base.child("context"), base.child("demand"), base.child("noise")};
}

template <DemandEnvironment Env>
RunRecord cppq_run(const CppqConfig& config, const Env& env, std::uint64_t seed,
                   std::int64_t rep = 0) {
  EpisodeStreams s = episode_streams(seed, rep);
  Cppq policy(config, env.dimension(), env.price_lo(), env.price_hi(),
              env.revenue_bound(), s.noise);
  RunRecord rec = run_episode(policy, env, config.T, std::move(s.context), std::move(s.demand));
  rec.policy = std::isfinite(config.eps) ? "cppq" : "nonprivate";
  rec.eps = config.eps;
  rec.rep = rep;
  rec.seed = seed;
  rec.shrink_counts = policy.shrink_counts();
  return rec;
}

template <DemandEnvironment Env>
RunRecord lppq_run(const LppqConfig& config, const Env& env, std::uint64_t seed,
                   std::int64_t rep = 0) {
  EpisodeStreams s = episode_streams(seed, rep);
  Lppq policy(config, env.dimension(), env.price_lo(), env.price_hi(),
              env.revenue_bound(), s.noise);
  RunRecord rec = run_episode(policy, env, config.T, std::move(s.context), std::move(s.demand));
  rec.policy = "lppq";
  rec.eps = config.eps;
  rec.rep = rep;
  rec.seed = seed;
  rec.shrink_counts = policy.shrink_counts();
  return rec;
}

// ---------------------------------------------------------------------------
// Experiment cells: policy and environment described as data.

enum class PolicyKind { kCppq, kLppq, kNonPrivate };

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kCppq: return "cppq";
    case PolicyKind::kLppq: return "lppq";
    case PolicyKind::kNonPrivate: return "nonprivate";
  }
  return "cppq";
}

inline PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "cppq") return PolicyKind::kCppq;
  if (s == "lppq") return PolicyKind::kLppq;
  if (s == "nonprivate") return PolicyKind::kNonPrivate;
  throw ParameterError("unknown policy '" + std::string(s) + "'");
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::kLppq;
  Preset preset = Preset::kExperiment;
  std::optional<std::int64_t> J;
  std::optional<double> c1;
  std::optional<double> c1_prime;
  std::optional<double> c2;
  std::optional<double> kappa1;
  std::optional<double> kappa2;
  SensitivityMode sensitivity = SensitivityMode::kUnitRevenue;
  std::optional<AggregatorBudget> budget;  // cppq only; preset default if empty
};

enum class EnvKind { kLinear, kAdversarial };

struct EnvSpec {
  EnvKind kind = EnvKind::kLinear;
  LinearDemandEnv::Theta theta = LinearDemandEnv::kDefaultTheta;
  int d = 2;                          // adversarial only
  std::int64_t m = 2;                 // adversarial cubes per axis
  std::vector<std::uint8_t> nu;       // adversarial; empty means draw from nu_seed
  std::uint64_t nu_seed = 0;
};

using AnyEnvironment = std::variant<LinearDemandEnv, AdversarialEnv>;

inline AnyEnvironment make_environment(const EnvSpec& spec) {
  if (spec.kind == EnvKind::kLinear) return LinearDemandEnv(spec.theta);
  std::int64_t J = 1;
  for (int i = 0; i < spec.d; ++i) J *= spec.m;
  const HypercubePartition part = build_partition(spec.d, J);
  if (!spec.nu.empty()) return AdversarialEnv(part, spec.nu);
  RngStream s = derive_stream(spec.nu_seed, "env/nu");
  return AdversarialEnv::random(part, s);
}

// The policy actually run for a cell; eps = inf always means the noise-free
// quadrisection baseline.
inline PolicyKind effective_kind(PolicyKind kind, double eps) {
  return std::isfinite(eps) ? kind : PolicyKind::kNonPrivate;
}

inline CppqConfig make_cppq_config(const PolicySpec& spec, std::int64_t T, double eps, int d) {
  CppqConfig c;
  if (spec.preset == Preset::kCustom) {
    if (!spec.J || !spec.c1 || !spec.c1_prime || !spec.c2) {
      throw ConfigError("custom cppq preset needs J, c1, c1_prime and c2");
    }
    c.T = T;
    c.eps = eps;
    c.preset = Preset::kCustom;
  } else {
    c = spec.preset == Preset::kTheorem ? CppqConfig::theorem(T, eps, d)
                                        : CppqConfig::experiment(T, eps, d);
  }
  if (spec.J) c.J_request = *spec.J;
  if (spec.c1) c.c1 = *spec.c1;
  if (spec.c1_prime) c.c1_prime = *spec.c1_prime;
  if (spec.c2) c.c2 = *spec.c2;
  if (spec.budget) c.budget = *spec.budget;
  c.sensitivity = spec.sensitivity;
  c.validate();
  return c;
}

inline LppqConfig make_lppq_config(const PolicySpec& spec, std::int64_t T, double eps, int d) {
  LppqConfig c;
  if (spec.preset == Preset::kCustom) {
    if (!spec.J || !spec.kappa1 || !spec.kappa2) {
      throw ConfigError("custom lppq preset needs J, kappa1 and kappa2");
    }
    c.T = T;
    c.eps = eps;
    c.preset = Preset::kCustom;
  } else if (!std::isfinite(eps) && spec.J) {
    // Theorem J is undefined at eps = inf; build around the explicit J.
    c = spec.preset == Preset::kTheorem ? LppqConfig::theorem(T, 1.0, d)
                                        : LppqConfig::experiment(T, 1.0, d);
    c.eps = eps;
  } else {
    c = spec.preset == Preset::kTheorem ? LppqConfig::theorem(T, eps, d)
                                        : LppqConfig::experiment(T, eps, d);
  }
  if (spec.J) c.J_request = *spec.J;
  if (spec.kappa1) c.kappa1 = *spec.kappa1;
  if (spec.kappa2) c.kappa2 = *spec.kappa2;
  c.sensitivity = spec.sensitivity;
  c.validate();
  return c;
}

template <DemandEnvironment Env>
RunRecord run_cell(const PolicySpec& spec, const Env& env, std::int64_t T, double eps,
                   std::uint64_t root_seed, std::int64_t rep) {
  const int d = env.dimension();
  switch (effective_kind(spec.kind, eps)) {
    case PolicyKind::kLppq:
      return lppq_run(make_lppq_config(spec, T, eps, d), env, root_seed, rep);
    case PolicyKind::kCppq:
      return cppq_run(make_cppq_config(spec, T, eps, d), env, root_seed, rep);
    case PolicyKind::kNonPrivate: {
      // CPPQ without noise. LPPQ constants do not carry over to it.
      PolicySpec base;
      if (spec.kind != PolicyKind::kLppq) base = spec;
      base.kind = PolicyKind::kCppq;
      return cppq_run(make_cppq_config(base, T, kInfiniteEpsilon, d), env, root_seed, rep);
    }
  }
  throw ConfigError("unreachable policy kind");
}

inline RunRecord run_cell(const PolicySpec& spec, const AnyEnvironment& env, std::int64_t T,
                          double eps, std::uint64_t root_seed, std::int64_t rep) {
  return std::visit(
      [&](const auto& e) { return run_cell(spec, e, T, eps, root_seed, rep); }, env);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown by any task is rethrown after all workers stop.
inline void parallel_for(std::int64_t n, int jobs, const std::function<void(std::int64_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(jobs, n));
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct AggregateResult {
  std::string policy;
  double eps = kInfiniteEpsilon;
  std::int64_t T = 0;
  std::int64_t reps = 0;
  double mean_regret = 0.0;
  std::optional<double> stderr_regret;  // empty when reps == 1
  double mean_pct_regret = 0.0;
  std::optional<double> stderr_pct_regret;
};

inline AggregateResult aggregate(std::span<const RunRecord> runs) {
  if (runs.empty()) throw ParameterError("cannot aggregate zero runs");
  AggregateResult a;
  a.policy = runs.front().policy;
  a.eps = runs.front().eps;
  a.T = runs.front().T;
  a.reps = static_cast<std::int64_t>(runs.size());
  const auto n = static_cast<double>(runs.size());
  double sr = 0.0, sp = 0.0;
  for (const auto& r : runs) {
    sr += r.cumulative_regret;
    sp += percentage_regret(r);
  }
  a.mean_regret = sr / n;
  a.mean_pct_regret = sp / n;
  if (runs.size() > 1) {
    double vr = 0.0, vp = 0.0;
    for (const auto& r : runs) {
      vr += (r.cumulative_regret - a.mean_regret) * (r.cumulative_regret - a.mean_regret);
      const double p = percentage_regret(r);
      vp += (p - a.mean_pct_regret) * (p - a.mean_pct_regret);
    }
    a.stderr_regret = std::sqrt(vr / (n - 1.0)) / std::sqrt(n);
    a.stderr_pct_regret = std::sqrt(vp / (n - 1.0)) / std::sqrt(n);
  }
  return a;
}

struct ReplicationResult {
  std::vector<RunRecord> runs;  // ordered by rep index
  AggregateResult aggregate;
};

inline ReplicationResult replicate(const PolicySpec& spec, const AnyEnvironment& env,
                                   std::int64_t T, double eps, std::int64_t reps,
                                   std::uint64_t root_seed, int jobs = 1) {
  if (reps < 1) throw ParameterError("reps must be >= 1");
  ReplicationResult out;
  out.runs.resize(static_cast<std::size_t>(reps));
  parallel_for(reps, jobs, [&](std::int64_t i) {
    out.runs[static_cast<std::size_t>(i)] = run_cell(spec, env, T, eps, root_seed, i);
  });
  out.aggregate = aggregate(out.runs);
  return out;
}

// Least-squares slope of ln(regret / ln T) against ln T.
inline double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InputError("slope fit needs at least two points");
  std::vector<double> xs, ys;
  for (const auto& [T, regret] : points) {
    if (!(T > 1.0)) throw InputError("slope fit needs T > 1");
    if (!(regret > 0.0)) throw InputError("slope fit needs positive regret");
    xs.push_back(std::log(T));
    ys.push_back(std::log(regret / std::log(T)));
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InputError("slope fit needs at least two distinct T values");
  return sxy / sxx;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_HARNESS_HPP_
