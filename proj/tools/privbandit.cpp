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

// privbandit command line.
//
//   privbandit simulate --config FILE [--seed N] [--jobs N] [--out DIR]
//   privbandit reproduce {table-cppq|table-lppq|slope-lppq} [--reps N] [--seed N]
//   privbandit privacy-check --eps E [--trials N]
//
// Exit codes: 0 success, 1 failed check, 2 configuration error, 3 I/O error.
// PRIVBANDIT_SEED supplies the seed when neither a flag nor the config does.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "privbandit/privbandit.hpp"

namespace pb = privbandit;
namespace fs = std::filesystem;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::optional<std::uint64_t> parse_seed_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return pb::parse_seed(s);
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw pb::IoError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pb::IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw pb::IoError("error while writing " + path.string());
}

void write_outputs(const fs::path& dir, const pb::ExperimentConfig& config, std::uint64_t seed,
                   const std::vector<pb::CellResult>& cells) {
  const std::vector<pb::RunRecord> runs = pb::flatten_runs(cells);
  std::ostringstream csv;
  pb::write_csv(csv, runs);
  write_file(dir / "runs.csv", csv.str());
  write_file(dir / "summary.json", pb::summary_json(config, seed, cells).dump(2) + "\n");
}

int cmd_simulate(const std::string& config_path, const std::string& seed_flag,
                 std::optional<int> jobs_flag, const std::string& out_flag) {
  pb::ExperimentConfig config = pb::load_config(config_path);
  const std::uint64_t seed =
      pb::resolve_seed(parse_seed_flag(seed_flag), config.seed, std::getenv("PRIVBANDIT_SEED"));
  if (jobs_flag) config.jobs = *jobs_flag;
  if (!out_flag.empty()) config.out = out_flag;
  config.validate();
  const auto cells = pb::run_experiment(config, seed, config.jobs);
  write_outputs(config.out, config, seed, cells);
  std::cout << "wrote " << config.row_count() << " runs to " << (fs::path(config.out) / "runs.csv")
            << "\n";
  for (const auto& c : cells) {
    const auto& a = c.result.aggregate;
    std::cout << a.policy << " eps=" << pb::format_double(c.eps) << " T=" << c.T
              << " mean pct regret " << std::fixed << std::setprecision(2) << a.mean_pct_regret;
    if (a.stderr_pct_regret) std::cout << " (se " << *a.stderr_pct_regret << ")";
    std::cout << std::defaultfloat << "\n";
  }
  return 0;
}

int cmd_reproduce(const std::string& which, std::optional<std::int64_t> reps,
                  const std::string& seed_flag, int jobs, const std::string& out_dir) {
  pb::ExperimentConfig config = pb::preset_config(which);
  if (reps) config.reps = *reps;
  const std::uint64_t seed =
      pb::resolve_seed(parse_seed_flag(seed_flag), std::nullopt, std::getenv("PRIVBANDIT_SEED"));
  config.jobs = jobs;
  config.validate();
  std::vector<pb::CellResult> cells = pb::run_experiment(config, seed, jobs);
  const fs::path dir = fs::path(out_dir) / which;

  if (which == "table-cppq") {
    write_outputs(dir, config, seed, cells);
    std::cout << pb::format_regret_table("Percentage regret (%) for CPPQ", cells);
    return 0;
  }
  if (which == "table-lppq") {
    pb::ExperimentConfig base = config;
    base.eps = {pb::kInfiniteEpsilon};
    std::vector<pb::CellResult> all = pb::run_experiment(base, seed, jobs);
    all.insert(all.end(), cells.begin(), cells.end());
    write_outputs(dir, config, seed, cells);
    std::cout << pb::format_regret_table("Percentage regret (%) for LPPQ", all);
    return 0;
  }
  // slope-lppq
  write_outputs(dir, config, seed, cells);
  std::vector<pb::RegretSeries> series;
  for (double e : config.eps) {
    pb::RegretSeries s;
    s.label = pb::epsilon_label(e);
    for (const auto& c : cells) {
      if (c.eps == e) s.points.emplace_back(static_cast<double>(c.T), c.result.aggregate.mean_regret);
    }
    series.push_back(std::move(s));
  }
  std::cout << "Fitted slopes of ln(regret / ln T) against ln T (LPPQ)\n";
  for (const auto& s : series) {
    std::cout << std::left << std::setw(10) << s.label << std::right << std::fixed
              << std::setprecision(3) << pb::fit_loglog_slope(s.points) << "\n";
  }
  const fs::path svg = dir / "slope-lppq.svg";
  write_file(svg, pb::render_loglog_svg("LPPQ: ln(regret / ln T) against ln T", series));
  std::cout << "chart written to " << svg << "\n";
  return 0;
}

int cmd_privacy_check(double eps, std::int64_t trials, double max_revenue,
                      const std::string& mode, const std::string& seed_flag) {
  const std::uint64_t seed =
      pb::resolve_seed(parse_seed_flag(seed_flag), std::nullopt, std::getenv("PRIVBANDIT_SEED"));
  pb::SensitivityMode m;
  try {
    m = pb::parse_sensitivity_mode(mode);
  } catch (const pb::ParameterError& e) {
    throw pb::ConfigError(e.what());
  }
  const pb::PrivacyCheckReport r = pb::privacy_check(eps, trials, seed, max_revenue, m);
  std::cout << std::setprecision(12);
  std::cout << "eps            " << r.eps << "\n";
  std::cout << "trials         " << r.trials << "\n";
  std::cout << "max revenue    " << r.max_revenue << "\n";
  std::cout << "max log-ratio  " << r.max_log_ratio << "\n";
  std::cout << "analytic bound " << r.bound << "\n";
  if (!r.warning.empty()) std::cout << r.warning << "\n";
  const bool ok = r.max_log_ratio <= r.bound + 1e-9;
  if (r.within_eps) {
    std::cout << "PASS: max log-ratio <= eps\n";
  } else if (ok) {
    std::cout << "max log-ratio exceeds eps but stays within the analytic bound\n";
  } else {
    std::cout << "FAIL: max log-ratio exceeds the analytic bound\n";
  }
  return ok ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private personalized pricing simulator"};
  app.require_subcommand(1);

  std::string config_path, seed_flag, out_flag;
  std::optional<int> jobs_flag;
  auto* sim = app.add_subcommand("simulate", "Run the grid described by a JSON config");
  sim->add_option("--config", config_path, "Configuration file")->required();
  sim->add_option("--seed", seed_flag, "Root seed (decimal 64-bit)");
  sim->add_option("--jobs", jobs_flag, "Worker threads")->check(CLI::Range(1, 1024));
  sim->add_option("--out", out_flag, "Output directory");

  std::string which;
  std::optional<std::int64_t> reps;
  int rep_jobs = 1;
  std::string rep_out = "privbandit-out";
  auto* rep = app.add_subcommand("reproduce", "Run a simulation-study preset");
  rep->add_option("which", which, "table-cppq, table-lppq or slope-lppq")
      ->required()
      ->check(CLI::IsMember(pb::preset_names()));
  rep->add_option("--reps", reps, "Replications per cell")->check(CLI::PositiveNumber);
  rep->add_option("--seed", seed_flag, "Root seed (decimal 64-bit)");
  rep->add_option("--jobs", rep_jobs, "Worker threads")->check(CLI::Range(1, 1024));
  rep->add_option("--out", rep_out, "Output directory");

  double eps = 1.0;
  std::int64_t trials = 10000;
  double max_revenue = 1.0;
  std::string mode = "unit-revenue";
  auto* priv = app.add_subcommand("privacy-check", "Check the local mechanism's density ratio");
  priv->add_option("--eps", eps, "Privacy parameter")->required()->check(CLI::PositiveNumber);
  priv->add_option("--trials", trials, "Random neighbour pairs")->check(CLI::PositiveNumber);
  priv->add_option("--max-revenue", max_revenue, "Largest p * y fed to the recorder")
      ->check(CLI::PositiveNumber);
  priv->add_option("--mode", mode, "unit-revenue or sensitivity-correct");
  priv->add_option("--seed", seed_flag, "Root seed (decimal 64-bit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config_path, seed_flag, jobs_flag, out_flag);
    if (*rep) return cmd_reproduce(which, reps, seed_flag, rep_jobs, rep_out);
    return cmd_privacy_check(eps, trials, max_revenue, mode, seed_flag);
  } catch (const pb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const pb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
}
