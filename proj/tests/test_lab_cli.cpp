// Copyright 2026 The shallowlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lab.hpp"

using namespace shallowlab::lab;

namespace {

Config with(const std::map<std::string, std::string>& sets) {
  Config c;
  for (const auto& [k, v] : sets) c.set(k, v);
  return c;
}

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(SHALLOWLAB_TEST_DATA) + "/golden/" + name + ".csv");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GoldenCase {
  std::string experiment;
  std::map<std::string, std::string> sets;
};

// Small configurations whose CSV output is pinned byte for byte.
const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases{
      {"tableau-fuzz", {{"circuits", "20"}}},
      {"audit", {{"section", "constants"}}},
      {"mbqc-check", {{"words", "10"}}},
      {"noise-sweep", {{"trials", "200"}}},
      {"half-rand-audit", {{"det_max_n", "4"}, {"randomize_trials", "100"}, {"efrak_random", "20"}}},
      {"pentagram-dist", {{"runs", "200"}, {"f_values", "2"}}},
      {"solve-parityl", {{"n", "3"}, {"instances", "3"}, {"k", "3"}}},
      {"nc1-estimate", {{"reps", "5"}, {"samples", "2000"}}},
  };
  return cases;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  Config c = Config::parse("# sweep\nd = 3,5\n\n  p=1e-3   # low\ntrials = 10\n");
  EXPECT_EQ(c.values().at("d"), "3,5");
  EXPECT_EQ(c.values().at("p"), "1e-3");
  EXPECT_EQ(c.values().at("trials"), "10");
  EXPECT_EQ(c.values().size(), 3u);
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(Config::parse("d 3\n"), ConfigError);
  EXPECT_THROW(Config::parse("= 3\n"), ConfigError);
  EXPECT_THROW(Config::parse("d = 3\nd = 5\n"), ConfigError);
}

TEST(Params, UnknownKeyRejected) {
  EXPECT_THROW(run_experiment("noise-sweep", with({{"distance", "3"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("no-such-experiment", Config(), 1), ConfigError);
}

TEST(Params, RangesAndChoicesValidated) {
  EXPECT_THROW(run_experiment("noise-sweep", with({{"d", "4"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("noise-sweep", with({{"p", "1.5"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("noise-sweep", with({{"trials", "-3"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("noise-sweep", with({{"trials", "10x"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("noise-sweep", with({{"mode", "bulk"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("solve-parityl", with({{"n", "40"}}), 1), ConfigError);
  EXPECT_THROW(run_experiment("nc1-estimate", with({{"epsilon", "0.1"}}), 1), ConfigError);
}

TEST(Params, EveryExperimentRunsWithDefaultsDeclared) {
  for (const auto& e : experiments()) {
    EXPECT_FALSE(e.keys.empty()) << e.name;
    Config c;
    for (const auto& k : e.keys) c.set(k.name, k.fallback);
    EXPECT_NO_THROW(Params(c, e.keys)) << e.name;
  }
}

TEST(NoiseSweep, EmitsOneRowPerDistanceAndRate) {
  Table t = run_experiment("noise-sweep", with({{"d", "3,5"}, {"p", "1e-3,3e-3,1e-2"}, {"trials", "50"}}), 7);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.csv().substr(0, t.csv().find('\n')), "d,p,trials,failures,seed");
  for (const auto& r : t.rows) EXPECT_LE(std::stoull(r[3]), std::stoull(r[2]));
  EXPECT_EQ(t.rows[0][0], "3");
  EXPECT_EQ(t.rows[5][0], "5");
  EXPECT_EQ(t.rows[2][1], "0.01");
}

TEST(Determinism, SameSeedSameBytes) {
  for (const auto& g : golden_cases()) {
    std::string a = run_experiment(g.experiment, with(g.sets), 99).csv();
    EXPECT_EQ(a, run_experiment(g.experiment, with(g.sets), 99).csv()) << g.experiment;
    EXPECT_EQ(a, run_experiment(g.experiment, with(g.sets), 99, 3).csv()) << g.experiment << " with 3 jobs";
  }
}

TEST(Determinism, SeedChangesRandomOutput) {
  Config c = with({{"circuits", "20"}});
  EXPECT_NE(run_experiment("tableau-fuzz", c, 1).csv(), run_experiment("tableau-fuzz", c, 2).csv());
}

TEST(Determinism, SolverInstancePrefixMatches) {
  Config all = with({{"n", "3"}, {"instances", "4"}, {"k", "3"}});
  Config tail = with({{"n", "3"}, {"instances", "2"}, {"k", "3"}, {"first_instance", "2"}});
  Table a = run_experiment("solve-parityl", all, 5), b = run_experiment("solve-parityl", tail, 5);
  ASSERT_EQ(b.rows.size(), 2u);
  EXPECT_EQ(b.rows[0], a.rows[2]);
  EXPECT_EQ(b.rows[1], a.rows[3]);
}

TEST(Golden, CsvOutputsUnchanged) {
  for (const auto& g : golden_cases()) {
    std::string golden = read_golden(g.experiment);
    ASSERT_FALSE(golden.empty()) << "missing golden file for " << g.experiment;
    EXPECT_EQ(run_experiment(g.experiment, with(g.sets), 1).csv(), golden) << g.experiment;
  }
}

TEST(Stats, ChiSquareTail) {
  EXPECT_NEAR(chi2_upper_tail(3.841, 1), 0.05, 0.01);
  EXPECT_NEAR(chi2_upper_tail(18.307, 10), 0.05, 0.005);
  EXPECT_NEAR(chi2_upper_tail(10, 10), 0.44, 0.01);
}
