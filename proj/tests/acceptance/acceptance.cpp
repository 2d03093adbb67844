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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance --cli PATH_TO_PRIVBANDIT --workdir DIR [--seed N] [--jobs N]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "privbandit/privbandit.hpp"

namespace pb = privbandit;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = pb::kInfiniteEpsilon;
constexpr std::array<std::int64_t, 4> kHorizons = {500, 2500, 12500, 62500};
constexpr std::array<double, 4> kEpsilons = {10.0, 1.0, 0.1, 0.01};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fixed(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Mean percentage regret keyed by (eps, T).
using Grid = std::map<std::pair<double, std::int64_t>, double>;

Grid RunGrid(pb::PolicyKind kind, std::vector<double> eps, std::uint64_t seed, int jobs,
             std::map<std::pair<double, std::int64_t>, double>* mean_regret = nullptr) {
  pb::ExperimentConfig cfg;
  cfg.policy.kind = kind;
  cfg.T.assign(kHorizons.begin(), kHorizons.end());
  cfg.eps = std::move(eps);
  cfg.reps = 30;
  const auto start = std::chrono::steady_clock::now();
  const auto cells = pb::run_experiment(cfg, seed, jobs);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "  ran " << to_string(kind) << " grid (" << cells.size() << " cells x 30 reps) in "
            << Fixed(secs, 1) << " s\n";
  Grid g;
  for (const auto& c : cells) {
    g[{c.eps, c.T}] = c.result.aggregate.mean_pct_regret;
    if (mean_regret) (*mean_regret)[{c.eps, c.T}] = c.result.aggregate.mean_regret;
  }
  return g;
}

Outcome NonPrivateBaseline(const Grid& np) {
  const std::array<double, 4> reference = {15.79, 7.40, 3.33, 1.76};
  Outcome o{true, ""};
  for (std::size_t i = 0; i < kHorizons.size(); ++i) {
    const double got = np.at({kInf, kHorizons[i]});
    const double ref = reference[i];
    const bool ok = std::abs(got - ref) <= 0.4 * ref || std::abs(got - ref) <= 4.0;
    o.pass = o.pass && ok;
    o.detail += "T=" + std::to_string(kHorizons[i]) + ": " + Fixed(got) + " vs " + Fixed(ref) +
                (ok ? "" : " (out of tolerance)") + "; ";
  }
  return o;
}

Outcome LppqTrends(const Grid& lp) {
  Outcome o{true, ""};
  for (double e : kEpsilons) {
    int violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < kHorizons.size(); ++i) {
      const double rise = lp.at({e, kHorizons[i + 1]}) - lp.at({e, kHorizons[i]});
      if (rise > 0.0) {
        ++violations;
        worst = std::max(worst, rise);
      }
    }
    if (violations > 1 || worst > 2.0) {
      o.pass = false;
      o.detail += "(a) eps=" + Fixed(e, 2) + " rises " + std::to_string(violations) +
                  " times, worst +" + Fixed(worst) + "pp; ";
    }
    const double last = lp.at({e, 62500});
    if (!(last >= 8.0 && last <= 25.0)) {
      o.pass = false;
      o.detail += "(b) eps=" + Fixed(e, 2) + " at T=62500 is " + Fixed(last) + "%; ";
    }
  }
  for (auto T : kHorizons) {
    const double lo = lp.at({0.01, T}), hi = lp.at({10.0, T});
    if (!(lo >= hi - 2.0)) {
      o.pass = false;
      o.detail += "(c) T=" + std::to_string(T) + ": eps=0.01 " + Fixed(lo) + " < eps=10 " +
                  Fixed(hi) + " - 2; ";
    }
  }
  o.detail += "T=62500 row:";
  for (double e : kEpsilons) o.detail += " " + Fixed(lp.at({e, 62500}));
  return o;
}

Outcome LppqSlopes(const Grid& mean_regret) {
  Outcome o{true, "slopes"};
  for (double e : kEpsilons) {
    std::vector<std::pair<double, double>> pts;
    for (auto T : kHorizons) pts.emplace_back(static_cast<double>(T), mean_regret.at({e, T}));
    const double s = pb::fit_loglog_slope(pts);
    const bool ok = s >= 0.65 && s <= 0.90;
    o.pass = o.pass && ok;
    o.detail += " eps=" + Fixed(e, 2) + ":" + Fixed(s, 3) + (ok ? "" : "(out)");
  }
  o.detail += " (target [0.65, 0.90])";
  return o;
}

double Spread(const Grid& g, std::int64_t T) {
  double lo = INFINITY, hi = -INFINITY;
  for (double e : kEpsilons) {
    lo = std::min(lo, g.at({e, T}));
    hi = std::max(hi, g.at({e, T}));
  }
  return hi - lo;
}

Outcome CppqSensitivity(const Grid& cp, const Grid& lp) {
  const double gap = cp.at({0.01, 62500}) - cp.at({10.0, 62500});
  const double cs = Spread(cp, 62500), ls = Spread(lp, 62500);
  Outcome o;
  o.pass = gap >= 10.0 && cs - ls >= 5.0;
  o.detail = "CPPQ eps=0.01 minus eps=10 at T=62500: " + Fixed(gap) +
             "pp (need >= 10); spread CPPQ " + Fixed(cs) + "pp vs LPPQ " + Fixed(ls) +
             "pp (need margin >= 5)";
  return o;
}

Outcome TreePrefixSums(std::uint64_t seed) {
  for (int stream = 0; stream < 100; ++stream) {
    pb::RngStream items = pb::derive_stream(seed, "acceptance/tree/" + std::to_string(stream));
    auto agg = pb::new_aggregator(kInf, 1024, pb::RngStream(seed, "unused"));
    std::int64_t prefix = 0;
    for (int n = 1; n <= 1024; ++n) {
      const auto u = static_cast<std::int64_t>(items.next_u64() % 2001) - 1000;
      prefix += u;
      const double got = agg.update(static_cast<double>(u));
      if (got != static_cast<double>(prefix)) {
        return {false, "stream " + std::to_string(stream) + " n=" + std::to_string(n) +
                           ": released " + std::to_string(got) + ", exact " +
                           std::to_string(prefix)};
      }
    }
  }
  return {true, "100 streams x 1024 prefixes exact"};
}

Outcome QuadrisectionBrackets(std::uint64_t seed) {
  const double lo = 0.5, hi = 4.5;
  const std::int64_t T = 3000;
  const std::array<double, 1> x{0.5};
  pb::RngStream s = pb::derive_stream(seed, "acceptance/quadratics");
  std::int64_t total_cuts = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double star = pb::uniform_sample(s, lo, hi);
    const double curvature = pb::uniform_sample(s, 0.1, 2.0);
    pb::CppqConfig cfg;
    cfg.T = T;
    cfg.eps = kInf;
    cfg.J_request = 1;
    pb::Cppq policy(cfg, 1, lo, hi, 10.0, pb::RngStream(seed, "unused"));
    for (std::int64_t t = 1; t <= T; ++t) {
      const double p = policy.choose_price(x, t);
      const double revenue = 5.0 - curvature * (p - star) * (p - star);
      if (policy.update(x, p, revenue / p, t).empty()) continue;
      const auto& g = policy.grid(0);
      const int e = static_cast<int>(policy.shrinks(0));
      // Grid endpoints carry rounding of a few ulps of the price scale.
      const double bound = (hi - lo) * std::pow(0.75, e) +
                           4.0 * std::numeric_limits<double>::epsilon() * hi;
      if (!(g.lo() <= star && star <= g.hi()) || g.width() > bound) {
        return {false, "trial " + std::to_string(trial) + " t=" + std::to_string(t) + ": [" +
                           pb::format_double(g.lo()) + ", " + pb::format_double(g.hi()) +
                           "] vs p*=" + pb::format_double(star) + ", width " +
                           pb::format_double(g.width()) + " after " + std::to_string(e) +
                           " cuts"};
      }
    }
    total_cuts += policy.shrinks_total();
  }
  return {total_cuts > 0, "1000 quadratics, " + std::to_string(total_cuts) +
                              " cuts, maximizer always kept and width (3/4)^e"};
}

Outcome LocalPrivacy(std::uint64_t seed) {
  const auto r = pb::privacy_check(1.0, 10000, seed);
  return {r.max_log_ratio - r.eps <= 1e-9,
          "eps=1, 10^4 neighbour pairs, max log-ratio " + Fixed(r.max_log_ratio, 6)};
}

template <class Env>
bool OracleMatchesGrid(const Env& env, pb::RngStream& contexts, std::string& detail) {
  const int grid = 10000;
  const double lo = env.price_lo(), hi = env.price_hi();
  const double spacing = (hi - lo) / (grid - 1);
  std::vector<double> x(static_cast<std::size_t>(env.dimension()));
  for (int c = 0; c < 100; ++c) {
    env.sample_context(contexts, x);
    double best_p = lo, best = -INFINITY;
    for (int i = 0; i < grid; ++i) {
      const double p = lo + spacing * i;
      const double f = env.mean_revenue(p, x);
      if (f > best) {
        best = f;
        best_p = p;
      }
    }
    const double oracle = env.oracle_price(x);
    if (std::abs(oracle - best_p) > spacing) {
      detail += env.name() + " context " + std::to_string(c) + ": oracle " +
                std::to_string(oracle) + " vs grid " + std::to_string(best_p) + "; ";
      return false;
    }
  }
  return true;
}

Outcome OracleCorrectness(std::uint64_t seed) {
  std::string detail;
  pb::RngStream contexts = pb::derive_stream(seed, "acceptance/oracle");
  bool ok = OracleMatchesGrid(pb::LinearDemandEnv(), contexts, detail);
  pb::RngStream nu = pb::derive_stream(seed, "acceptance/nu");
  const auto adv = pb::AdversarialEnv::random(pb::build_partition(2, 16), nu);
  ok = OracleMatchesGrid(adv, contexts, detail) && ok;
  std::array<double, 2> x{};
  for (int c = 0; c < 100; ++c) {
    adv.sample_context(contexts, x);
    const auto j = static_cast<std::size_t>(pb::cube_index(adv.partition(), x));
    const double m = pb::boundary_distance(adv.partition(), x);
    const double closed = adv.nu()[j] ? 2.0 / 3.0 - m / (3.0 * (1.0 + m)) : 2.0 / 3.0;
    if (std::abs(adv.oracle_price(x) - closed) > 1e-12) {
      ok = false;
      detail += "closed form mismatch at context " + std::to_string(c) + "; ";
    }
  }
  if (ok) detail = "linear and adversarial oracles within one grid step on 100 contexts each";
  return {ok, detail};
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Outcome CliDeterminism(const std::string& cli, const fs::path& workdir) {
  fs::create_directories(workdir);
  const fs::path config = workdir / "determinism.json";
  std::ofstream(config) << R"({
  "policy": "lppq",
  "env": "linear",
  "T": [500, 2500],
  "eps": ["inf", 1, 0.1],
  "reps": 8
}
)";
  auto run = [&](const std::string& tag, int jobs) -> std::string {
    const fs::path out = workdir / tag;
    const std::string cmd = Quote(cli) + " simulate --config " + Quote(config.string()) +
                            " --seed 20260101 --jobs " + std::to_string(jobs) + " --out " +
                            Quote(out.string()) + " > " + Quote((workdir / (tag + ".log")).string()) +
                            " 2>&1";
    if (std::system(cmd.c_str()) != 0) return "";
    return ReadFile(out / "runs.csv");
  };
  const std::string a = run("run-a", 1), b = run("run-b", 1), c = run("run-c", 8);
  if (a.empty() || b.empty() || c.empty()) return {false, "simulate failed; see logs in " + workdir.string()};
  const bool same = a == b && a == c;
  const auto rows = std::count(a.begin(), a.end(), '\n') - 1;
  return {same, std::to_string(rows) + "-row CSV " +
                    (same ? "identical" : "differs") + " across two runs and --jobs 1 vs 8"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privbandit acceptance checks"};
  std::string cli, workdir;
  std::uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--cli", cli, "privbandit executable")->required();
  app.add_option("--workdir", workdir, "Scratch directory")->required();
  app.add_option("--seed", seed, "Root seed for the simulation grids");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));
  CLI11_PARSE(app, argc, argv);

  std::cout << "simulation grids, seed " << seed << ", " << jobs << " worker(s)\n";
  const Grid np = RunGrid(pb::PolicyKind::kCppq, {kInf}, seed, jobs);
  Grid lppq_regret;
  const Grid lp = RunGrid(pb::PolicyKind::kLppq, {kEpsilons.begin(), kEpsilons.end()}, seed,
                          jobs, &lppq_regret);
  const Grid cp = RunGrid(pb::PolicyKind::kCppq, {kEpsilons.begin(), kEpsilons.end()}, seed, jobs);

  const std::vector<std::pair<std::string, Outcome>> results = {
      {"1 non-private baseline percentage regret", NonPrivateBaseline(np)},
      {"2 LPPQ regret trends", LppqTrends(lp)},
      {"3 LPPQ log-log slopes", LppqSlopes(lppq_regret)},
      {"4 CPPQ privacy sensitivity", CppqSensitivity(cp, lp)},
      {"5 tree aggregator prefix sums", TreePrefixSums(seed)},
      {"6 quadrisection keeps the maximizer", QuadrisectionBrackets(seed)},
      {"7 local privacy density ratio", LocalPrivacy(seed)},
      {"8 environment oracles", OracleCorrectness(seed)},
      {"9 CLI determinism", CliDeterminism(cli, workdir)},
  };
  int failures = 0;
  for (const auto& [name, o] : results) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << "\n";
    failures += !o.pass;
  }
  std::cout << (results.size() - failures) << "/" << results.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
