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


#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "privbandit/config.hpp"

namespace pb = privbandit;

namespace {

// Message of the ConfigError thrown by parsing `text`, or "" if none.
std::string ParseError(const std::string& text) {
  try {
    pb::parse_config(text);
  } catch (const pb::ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, MinimalDocument) {
  const auto c = pb::parse_config(R"({"policy": "lppq", "T": 500, "eps": 1.0})");
  EXPECT_EQ(c.policy.kind, pb::PolicyKind::kLppq);
  EXPECT_EQ(c.T, (std::vector<std::int64_t>{500}));
  EXPECT_EQ(c.eps, (std::vector<double>{1.0}));
  EXPECT_EQ(c.reps, 1);
  EXPECT_EQ(c.jobs, 1);
  EXPECT_FALSE(c.seed.has_value());
  EXPECT_EQ(c.row_count(), 1);
}

TEST(ParseConfig, ListsInfinityAndSeed) {
  const auto c = pb::parse_config(R"({
    "policy": {"kind": "cppq", "preset": "theorem", "budget": "full"},
    "env": {"kind": "adversarial", "d": 2, "m": 3, "nu_seed": 4},
    "T": [100, 200], "eps": ["inf", 0.5], "reps": 3, "seed": 18446744073709551615,
    "jobs": 2, "out": "x", "sensitivity": "sensitivity-correct"})");
  EXPECT_EQ(c.policy.kind, pb::PolicyKind::kCppq);
  EXPECT_EQ(c.policy.preset, pb::Preset::kTheorem);
  EXPECT_EQ(c.policy.budget, pb::AggregatorBudget::kFull);
  EXPECT_EQ(c.env.kind, pb::EnvKind::kAdversarial);
  EXPECT_TRUE(std::isinf(c.eps[0]));
  EXPECT_EQ(*c.seed, 18446744073709551615ull);
  EXPECT_EQ(c.policy.sensitivity, pb::SensitivityMode::kSensitivityCorrect);
  EXPECT_EQ(c.row_count(), 12);
}

TEST(ParseConfig, NegativeEpsilonRejectedWithLine) {
  const std::string msg = ParseError("{\n  \"policy\": \"lppq\",\n  \"T\": 500,\n  \"eps\": -1\n}");
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("eps"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownKeyRejectedWithLine) {
  const std::string msg = ParseError("{\n  \"T\": 500,\n  \"eps\": 1,\n  \"horizon\": 3\n}");
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("horizon"), std::string::npos) << msg;
}

TEST(ParseConfig, MalformedJsonReportsPosition) {
  const std::string msg = ParseError("{\n  \"T\": 500,\n  \"eps\": [1, \n}");
  EXPECT_NE(msg.find("line"), std::string::npos) << msg;
  EXPECT_NE(msg.find("malformed JSON"), std::string::npos) << msg;
}

TEST(ParseConfig, RejectsInvalidValues) {
  EXPECT_NE(ParseError(R"({"T": 0, "eps": 1})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 0})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": "big"})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "reps": 0})"), "");
  EXPECT_NE(ParseError(R"({"T": [], "eps": 1})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "policy": "ucb"})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "policy": {"kind": "lppq", "c2": 3}})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "policy": {"kind": "cppq", "kappa1": 3}})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "env": {"kind": "linear", "theta": [0.4, 0.6, 0.6, 0.2]}})"), "");
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "seed": -4})"), "");
  EXPECT_NE(ParseError("[1, 2]"), "");
}

TEST(ParseConfig, CustomPresetNeedsConstants) {
  EXPECT_NE(ParseError(R"({"T": 10, "eps": 1, "policy": {"kind": "lppq", "preset": "custom"}})"), "");
  EXPECT_EQ(ParseError(R"({"T": 10, "eps": 1,
      "policy": {"kind": "lppq", "preset": "custom", "J": 4, "kappa1": 0.1, "kappa2": 2}})"), "");
}

TEST(Presets, TableLppqHas480Rows) {
  const auto c = pb::preset_config("table-lppq");
  EXPECT_EQ(c.row_count(), 480);
  EXPECT_EQ(c.policy.kind, pb::PolicyKind::kLppq);
  EXPECT_NO_THROW(c.validate());
}

TEST(Presets, TableCppqIncludesNoiseFreeRow) {
  const auto c = pb::preset_config("table-cppq");
  ASSERT_EQ(c.eps.size(), 5u);
  EXPECT_TRUE(std::isinf(c.eps[0]));
  EXPECT_EQ(c.row_count(), 600);
  EXPECT_THROW(pb::preset_config("table-ucb"), pb::ConfigError);
}

TEST(Presets, DocumentCanOverridePreset) {
  const auto c = pb::parse_config(R"({"preset": "slope-lppq", "reps": 2, "T": [500, 2500]})");
  EXPECT_EQ(c.row_count(), 16);
}

TEST(Seed, ParseAndPrecedence) {
  EXPECT_EQ(pb::parse_seed("42"), 42u);
  EXPECT_THROW(pb::parse_seed("-1"), pb::ConfigError);
  EXPECT_THROW(pb::parse_seed("12x"), pb::ConfigError);
  EXPECT_THROW(pb::parse_seed(""), pb::ConfigError);
  EXPECT_EQ(pb::resolve_seed(1, 2, "3"), 1u);
  EXPECT_EQ(pb::resolve_seed(std::nullopt, 2, "3"), 2u);
  EXPECT_EQ(pb::resolve_seed(std::nullopt, std::nullopt, "3"), 3u);
  EXPECT_EQ(pb::resolve_seed(std::nullopt, std::nullopt, nullptr), 0u);
}

TEST(LoadConfig, MissingFileIsIoError) {
  EXPECT_THROW(pb::load_config("/nonexistent/privbandit.json"), pb::IoError);
}

}  // namespace
