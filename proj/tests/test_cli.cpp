// Copyright 2026 The gcensus Authors
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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "gcensus/cli.hpp"

namespace gcensus {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    v.push_back(line);
  }
  return v;
}

std::filesystem::path temp_path(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("gcensus-test-" + name);
}

TEST(Cli, CensusCsvHeader) {
  const auto r = run({"census", "--k", "15", "--l", "15", "--samples", "100000", "--seed", "1", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto v = lines(r.out);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], "k,l,samples,accepted,separable,classical,prob_sep,prob_classical,seed");
  EXPECT_EQ(v[1].substr(0, 13), "15,15,100000,");
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, CensusJsonParses) {
  const auto r = run({"census", "--samples", "20000", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  for (const char *key : {"k", "l", "samples", "accepted", "separable", "classical", "prob_sep", "prob_classical",
                          "seed"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
  EXPECT_EQ(j[0]["samples"].get<int>(), 20000);
}

TEST(Cli, Table1ScaledRows) {
  const auto a = run({"table1", "--scale", "0.002", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto v = lines(a.out);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v[1].substr(0, 10), "10,5,1000,");
  EXPECT_EQ(v[2].substr(0, 13), "500,250,3800,");
  EXPECT_EQ(run({"table1", "--scale", "0.002", "--seed", "7"}).out, a.out);
  const auto j = run({"table1", "--scale", "0.002", "--seed", "7", "--format", "json"});
  ASSERT_EQ(j.code, kExitOk);
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 5u);
}

TEST(Cli, ByteIdenticalAcrossWorkers) {
  const std::vector<std::string> base{"census", "--k", "10", "--l", "5", "--samples", "30000", "--seed", "3"};
  auto with = [&](const char *w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w, "--chunk-size", "1000"});
    return run(args).out;
  };
  const auto one = with("1");
  EXPECT_EQ(one, with("4"));
  EXPECT_EQ(one, with("16"));
}

TEST(Cli, BuresRunsSeveralMetricsOnOneStream) {
  const auto r = run({"bures", "--samples", "20000", "--metric", "bures", "--metric", "kubo-mori", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 5u);
  EXPECT_EQ(j[0]["measure"], "fisher");
  EXPECT_EQ(j[3]["measure"], "kubo-mori/median");
  EXPECT_EQ(j[1]["accepted"], j[3]["accepted"]);
  EXPECT_EQ(j[1]["surviving"], j[3]["surviving"]);
}

TEST(Cli, BuresRobustSelection) {
  const auto r = run({"bures", "--samples", "5000", "--robust", "median"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto v = lines(r.out);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NE(v[2].find("bures/median"), std::string::npos);
  const auto raw = run({"bures", "--samples", "5000", "--robust", "none", "--grid-size", "3"});
  ASSERT_EQ(raw.code, kExitOk) << raw.err;
  EXPECT_NE(raw.out.find("bures/raw"), std::string::npos);
}

TEST(Cli, OneModeAndEntropyAndFidelity) {
  const auto om = run({"one-mode", "--samples", "20000", "--k-schedule", "10", "--k-schedule", "100"});
  ASSERT_EQ(om.code, kExitOk) << om.err;
  EXPECT_EQ(lines(om.out).size(), 3u);
  const auto en = run({"entropy", "--k", "10", "--l", "5", "--samples", "20000", "--format", "json"});
  ASSERT_EQ(en.code, kExitOk) << en.err;
  EXPECT_TRUE(nlohmann::json::parse(en.out)[0].contains("violations"));
  const auto fc = run({"fidelity-check", "--format", "json"});
  ASSERT_EQ(fc.code, kExitOk) << fc.err;
  EXPECT_LT(nlohmann::json::parse(fc.out)[0]["relative_spread"].get<double>(), 1e-3);
}

TEST(Cli, TableFormat) {
  const auto r = run({"census", "--samples", "1000", "--format", "table"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("prob_sep"), std::string::npos);
}

TEST(Cli, InvalidConfigExits64) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"census", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"census", "--k", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"bures", "--grid", "regular", "--grid-size", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"census", "--metric", "bures"}).code, kExitUsage);
  EXPECT_EQ(run({"nonsense"}).code, kExitUsage);
  const auto r = run({"census", "--workers", "0"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("census"), std::string::npos);
}

TEST(Cli, UnwritableOutputExits1) {
  const auto r = run({"census", "--samples", "100", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, kExitIo);
}

TEST(Cli, OutFileMatchesStdout) {
  const auto path = temp_path("out.csv");
  const auto a = run({"census", "--samples", "2000", "--out", path.string()});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_TRUE(a.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), run({"census", "--samples", "2000"}).out);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
  const auto path = temp_path("config.ini");
  {
    std::ofstream cfg(path);
    cfg << "k=10\nl=5\nsamples=3000\nseed=9\n";
  }
  const auto from_file = run({"census", "--config", path.string()});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(lines(from_file.out)[1].substr(0, 10), "10,5,3000,");
  EXPECT_EQ(from_file.out, run({"census", "--k", "10", "--l", "5", "--samples", "3000", "--seed", "9"}).out);
  const auto flag = run({"census", "--config", path.string(), "--samples", "4000"});
  ASSERT_EQ(flag.code, kExitOk);
  EXPECT_EQ(lines(flag.out)[1].substr(0, 10), "10,5,4000,");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace gcensus
