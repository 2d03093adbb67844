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

// Experiment configuration as a JSON document.
//
//   {
//     "preset": "table-lppq",            optional; later keys override it
//     "policy": "lppq" | {"kind": "cppq", "preset": "theorem", "J": 16, ...},
//     "env": "linear" | {"kind": "adversarial", "d": 2, "m": 3, "nu_seed": 5},
//     "T": [500, 2500],
//     "eps": [1, 0.1, "inf"],
//     "reps": 30, "seed": 7, "jobs": 4, "out": "results",
//     "sensitivity": "unit-revenue" | "sensitivity-correct"
//   }
//
// Unknown keys are rejected. Errors carry the line of the offending key.

#ifndef PRIVBANDIT_CONFIG_HPP_
#define PRIVBANDIT_CONFIG_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "privbandit/cppq.hpp"
#include "privbandit/env.hpp"
#include "privbandit/errors.hpp"
#include "privbandit/harness.hpp"
#include "privbandit/lppq.hpp"
#include "privbandit/policy.hpp"

namespace privbandit {

struct ExperimentConfig {
  std::string preset;  // named grid the document started from, if any
  PolicySpec policy;
  EnvSpec env;
  std::vector<std::int64_t> T;
  std::vector<double> eps;
  std::int64_t reps = 1;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out = "privbandit-out";

  std::int64_t row_count() const {
    return static_cast<std::int64_t>(T.size() * eps.size()) * reps;
  }

  // Throws ConfigError on empty grids, bad counts, or policy constants that
  // cannot be built for some (T, eps) cell.
  void validate() const {
    if (T.empty()) throw ConfigError("T list must not be empty");
    if (eps.empty()) throw ConfigError("eps list must not be empty");
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    for (auto t : T) {
      if (t < 1) throw ConfigError("T entries must be >= 1");
    }
    for (double e : eps) {
      if (std::isnan(e) || !(e > 0.0)) {
        throw ConfigError("eps entries must be > 0 or \"inf\"");
      }
    }
    int d = 0;
    try {
      const AnyEnvironment e = make_environment(env);
      d = std::visit([](const auto& v) { return v.dimension(); }, e);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("env: ") + ex.what());
    }
    for (auto t : T) {
      for (double e : eps) {
        try {
          switch (effective_kind(policy.kind, e)) {
            case PolicyKind::kLppq: (void)make_lppq_config(policy, t, e, d); break;
            case PolicyKind::kCppq: (void)make_cppq_config(policy, t, e, d); break;
            case PolicyKind::kNonPrivate: break;
          }
        } catch (const std::invalid_argument& ex) {
          throw ConfigError("policy: " + std::string(ex.what()));
        }
      }
    }
  }
};

inline constexpr std::int64_t kStudyHorizons[] = {500, 2500, 12500, 62500};
inline constexpr double kStudyEpsilons[] = {10.0, 1.0, 0.1, 0.01};

inline std::vector<std::string> preset_names() {
  return {"table-cppq", "table-lppq", "slope-lppq"};
}

// The simulation-study grids: linear environment, experiment constants,
// 30 replications. table-cppq includes the noise-free row (eps = inf).
inline ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  c.preset = std::string(name);
  c.T.assign(std::begin(kStudyHorizons), std::end(kStudyHorizons));
  c.eps.assign(std::begin(kStudyEpsilons), std::end(kStudyEpsilons));
  c.reps = 30;
  if (name == "table-cppq") {
    c.policy.kind = PolicyKind::kCppq;
    c.eps.insert(c.eps.begin(), kInfiniteEpsilon);
  } else if (name == "table-lppq" || name == "slope-lppq") {
    c.policy.kind = PolicyKind::kLppq;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

namespace internal {

using nlohmann::json;

// Maps keys back to source lines for error messages.
class SourceLocator {
 public:
  explicit SourceLocator(std::string_view text) : text_(text) {}

  static std::pair<std::size_t, std::size_t> LineColumn(std::string_view text,
                                                        std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  // Line of the first occurrence of "key" as a JSON member name.
  std::string where(std::string_view key) const {
    const std::string quoted = "\"" + std::string(key) + "\"";
    std::size_t pos = 0;
    while ((pos = text_.find(quoted, pos)) != std::string_view::npos) {
      std::size_t after = pos + quoted.size();
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) {
        ++after;
      }
      if (after < text_.size() && text_[after] == ':') {
        return "line " + std::to_string(LineColumn(text_, pos).first) + ": ";
      }
      pos = after;
    }
    return "";
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw ConfigError(where(key) + std::string(key) + ": " + message);
  }

 private:
  std::string_view text_;
};

inline void CheckKeys(const json& obj, std::initializer_list<std::string_view> allowed,
                      std::string_view context, const SourceLocator& loc) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) loc.fail(it.key(), "unknown key in " + std::string(context));
  }
}

inline std::int64_t GetInt(const json& v, std::string_view key, std::int64_t min,
                           const SourceLocator& loc) {
  if (!v.is_number_integer()) loc.fail(key, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    loc.fail(key, "integer out of range");
  }
  const auto x = v.get<std::int64_t>();
  if (x < min) loc.fail(key, "must be >= " + std::to_string(min));
  return x;
}

inline double GetNonNegative(const json& v, std::string_view key, const SourceLocator& loc) {
  if (!v.is_number()) loc.fail(key, "expected a number");
  const double x = v.get<double>();
  if (!(x >= 0.0) || !std::isfinite(x)) loc.fail(key, "must be a finite number >= 0");
  return x;
}

inline std::string GetString(const json& v, std::string_view key, const SourceLocator& loc) {
  if (!v.is_string()) loc.fail(key, "expected a string");
  return v.get<std::string>();
}

inline double GetEpsilon(const json& v, std::size_t i, const SourceLocator& loc) {
  const std::string label = "eps[" + std::to_string(i) + "]";
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfiniteEpsilon;
    loc.fail("eps", label + " must be a number or \"inf\"");
  }
  if (!v.is_number()) loc.fail("eps", label + " must be a number or \"inf\"");
  const double e = v.get<double>();
  if (!(e > 0.0)) loc.fail("eps", label + " must be > 0 or \"inf\"");
  return e;
}

template <class Parse>
void WithLocation(std::string_view key, const SourceLocator& loc, Parse&& parse) {
  try {
    parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    loc.fail(key, ex.what());
  }
}

inline PolicySpec ParsePolicy(const json& v, const SourceLocator& loc) {
  PolicySpec spec;
  if (v.is_string()) {
    WithLocation("policy", loc, [&] { spec.kind = parse_policy_kind(v.get<std::string>()); });
    return spec;
  }
  if (!v.is_object()) loc.fail("policy", "expected a string or an object");
  CheckKeys(v, {"kind", "preset", "J", "c1", "c1_prime", "c2", "kappa1", "kappa2", "budget"},
            "policy", loc);
  if (!v.contains("kind")) loc.fail("policy", "missing \"kind\"");
  WithLocation("kind", loc, [&] { spec.kind = parse_policy_kind(GetString(v["kind"], "kind", loc)); });
  if (v.contains("preset")) {
    WithLocation("preset", loc,
                 [&] { spec.preset = parse_preset(GetString(v["preset"], "preset", loc)); });
  }
  const bool cppq_like = spec.kind != PolicyKind::kLppq;
  auto constant = [&](const char* key, std::optional<double>& slot, bool allowed) {
    if (!v.contains(key)) return;
    if (!allowed) {
      loc.fail(key, std::string("not a parameter of ") + std::string(to_string(spec.kind)));
    }
    slot = GetNonNegative(v[key], key, loc);
  };
  constant("c1", spec.c1, cppq_like);
  constant("c1_prime", spec.c1_prime, cppq_like);
  constant("c2", spec.c2, cppq_like);
  constant("kappa1", spec.kappa1, !cppq_like);
  constant("kappa2", spec.kappa2, !cppq_like);
  if (v.contains("J")) spec.J = GetInt(v["J"], "J", 1, loc);
  if (v.contains("budget")) {
    if (!cppq_like) loc.fail("budget", "not a parameter of lppq");
    WithLocation("budget", loc, [&] {
      spec.budget = parse_aggregator_budget(GetString(v["budget"], "budget", loc));
    });
  }
  return spec;
}

inline EnvSpec ParseEnv(const json& v, const SourceLocator& loc) {
  EnvSpec spec;
  auto kind_of = [&](const std::string& s) {
    if (s == "linear") return EnvKind::kLinear;
    if (s == "adversarial") return EnvKind::kAdversarial;
    loc.fail("env", "unknown environment '" + s + "'");
  };
  if (v.is_string()) {
    spec.kind = kind_of(v.get<std::string>());
    return spec;
  }
  if (!v.is_object()) loc.fail("env", "expected a string or an object");
  if (!v.contains("kind")) loc.fail("env", "missing \"kind\"");
  spec.kind = kind_of(GetString(v["kind"], "kind", loc));
  if (spec.kind == EnvKind::kLinear) {
    CheckKeys(v, {"kind", "theta"}, "linear env", loc);
    if (v.contains("theta")) {
      const json& th = v["theta"];
      if (!th.is_array() || th.size() != 4) loc.fail("theta", "expected 4 numbers");
      for (std::size_t i = 0; i < 4; ++i) {
        if (!th[i].is_number()) loc.fail("theta", "expected 4 numbers");
        spec.theta[i] = th[i].get<double>();
      }
    }
  } else {
    CheckKeys(v, {"kind", "d", "m", "nu", "nu_seed"}, "adversarial env", loc);
    if (v.contains("d")) spec.d = static_cast<int>(GetInt(v["d"], "d", 1, loc));
    if (spec.d > 16) loc.fail("d", "must be <= 16");
    if (v.contains("m")) spec.m = GetInt(v["m"], "m", 1, loc);
    if (v.contains("nu_seed")) {
      if (!v["nu_seed"].is_number_unsigned()) loc.fail("nu_seed", "expected an unsigned integer");
      spec.nu_seed = v["nu_seed"].get<std::uint64_t>();
    }
    if (v.contains("nu")) {
      if (!v["nu"].is_array()) loc.fail("nu", "expected an array of 0/1");
      for (const auto& b : v["nu"]) {
        if (!b.is_number_integer() || (b.get<std::int64_t>() != 0 && b.get<std::int64_t>() != 1)) {
          loc.fail("nu", "entries must be 0 or 1");
        }
        spec.nu.push_back(static_cast<std::uint8_t>(b.get<std::int64_t>()));
      }
    }
  }
  return spec;
}

}  // namespace internal

// Parses and validates a configuration document.
inline ExperimentConfig parse_config(std::string_view text) {
  using internal::json;
  const internal::SourceLocator loc(text);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& ex) {
    const auto [line, col] = internal::SourceLocator::LineColumn(
        text, ex.byte > 0 ? static_cast<std::size_t>(ex.byte - 1) : 0);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": malformed JSON");
  }
  if (!doc.is_object()) throw ConfigError("line 1: configuration must be a JSON object");
  internal::CheckKeys(doc,
                      {"preset", "policy", "env", "T", "eps", "reps", "seed", "jobs", "out",
                       "sensitivity"},
                      "configuration", loc);

  ExperimentConfig c;
  if (doc.contains("preset")) {
    const std::string name = internal::GetString(doc["preset"], "preset", loc);
    internal::WithLocation("preset", loc, [&] { c = preset_config(name); });
  }
  if (doc.contains("policy")) c.policy = internal::ParsePolicy(doc["policy"], loc);
  if (doc.contains("env")) c.env = internal::ParseEnv(doc["env"], loc);
  if (doc.contains("T")) {
    const json& v = doc["T"];
    c.T.clear();
    if (v.is_array()) {
      for (const auto& t : v) c.T.push_back(internal::GetInt(t, "T", 1, loc));
    } else {
      c.T.push_back(internal::GetInt(v, "T", 1, loc));
    }
    if (c.T.empty()) loc.fail("T", "list must not be empty");
  }
  if (doc.contains("eps")) {
    const json& v = doc["eps"];
    c.eps.clear();
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) c.eps.push_back(internal::GetEpsilon(v[i], i, loc));
    } else {
      c.eps.push_back(internal::GetEpsilon(v, 0, loc));
    }
    if (c.eps.empty()) loc.fail("eps", "list must not be empty");
  }
  if (doc.contains("reps")) c.reps = internal::GetInt(doc["reps"], "reps", 1, loc);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) loc.fail("seed", "expected an unsigned integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("jobs")) {
    c.jobs = static_cast<int>(std::min<std::int64_t>(internal::GetInt(doc["jobs"], "jobs", 1, loc), 1024));
  }
  if (doc.contains("out")) c.out = internal::GetString(doc["out"], "out", loc);
  if (doc.contains("sensitivity")) {
    internal::WithLocation("sensitivity", loc, [&] {
      c.policy.sensitivity =
          parse_sensitivity_mode(internal::GetString(doc["sensitivity"], "sensitivity", loc));
    });
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return parse_config(buf.str());
}

// Decimal 64-bit seed, as accepted on the command line and in PRIVBANDIT_SEED.
inline std::uint64_t parse_seed(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("seed must be a decimal 64-bit unsigned integer, got '" + std::string(s) + "'");
  }
  return v;
}

// Precedence: explicit flag, then the config document, then the environment
// variable value (may be null), then 0.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag,
                                  std::optional<std::uint64_t> from_config,
                                  const char* env_value) {
  if (flag) return *flag;
  if (from_config) return *from_config;
  if (env_value != nullptr) return parse_seed(env_value);
  return 0;
}

}  // namespace privbandit

#endif  // PRIVBANDIT_CONFIG_HPP_
