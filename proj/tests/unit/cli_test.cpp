//------------------------------------------------------------------------------
//
//   Copyright 2026 The spotsel Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spotsel/cli.hpp"

namespace spotsel::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spotsel_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  for (auto& l : lines_of(text)) {
    if (!l.empty() && l[0] != '#') {
      out.push_back(l);
    }
  }
  return out;
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"attack", "--help"}).code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"attack", "--no-such-flag"}).code, 2);
  EXPECT_EQ(run_cli({"attack", "--strategy", "sideways"}).code, 2);
  EXPECT_EQ(run_cli({"--format", "xml", "select"}).code, 2);
}

TEST(Cli, InvalidParametersNameTheField) {
  const Result k = run_cli({"select", "--k", "0"});
  EXPECT_EQ(k.code, 2);
  EXPECT_NE(k.err.find("k"), std::string::npos);
  const Result alpha = run_cli({"select", "--alpha", "0.5"});
  EXPECT_EQ(alpha.code, 2);
  EXPECT_NE(alpha.err.find("alpha"), std::string::npos);
  EXPECT_EQ(run_cli({"attack", "--N", "100", "--m", "150", "--accounting", "within"}).code, 2);
  EXPECT_EQ(run_cli({"table1", "--gammas", "0"}).code, 2);
  EXPECT_EQ(run_cli({"select", "--bits", "8", "--N", "1000"}).code, 2);
}

TEST(Cli, SelectPrintsCommittee) {
  const Result r = run_cli({"--seed", "7", "select", "--N", "1000", "--gamma", "3", "--shard", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) {
    std::istringstream in(rows[j]);
    std::string i, round, idx, center;
    std::getline(in, i, ',');
    std::getline(in, round, ',');
    std::getline(in, idx, ',');
    std::getline(in, center, ',');
    EXPECT_EQ(i, "2");
    EXPECT_EQ(round, "0");
    EXPECT_EQ(idx, std::to_string(j + 1));
    EXPECT_EQ(center.size(), 16u);
  }
  EXPECT_NE(r.out.find("# master_seed=7"), std::string::npos);
}

TEST(Cli, SelectJson) {
  const Result r = run_cli({"--format", "json", "select", "--gamma", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["spots"].size(), 2u);
  EXPECT_EQ(doc["spots"][1]["j"], 2);
  EXPECT_LE(doc["spots"][0]["members"].size(), 10u);
  EXPECT_TRUE(doc["config"].is_object());
}

TEST(Cli, AttackCsvColumns) {
  const Result r = run_cli({"attack", "--N", "1000", "--gamma", "2", "--trials", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0],
            "N,K,k,alpha,gamma,rho,m,k_bar,strategy,trials,bad_rounds,p_hat,ci_low,ci_high,"
            "undersized_rate,mean_size,master_seed");
  EXPECT_EQ(rows[1].rfind("1000,25,20,3,2,0.9,200,14,stratified,20,", 0), 0u);
}

TEST(Cli, NoAdversaryMeansNoBadRounds) {
  const Result r = run_cli({"--format", "json", "attack", "--m", "0", "--gamma", "5", "--trials", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 1u);
  EXPECT_EQ(doc["rows"][0]["bad_rounds"], 0);
  EXPECT_EQ(doc["rows"][0]["p_hat"], 0.0);
}

TEST(Cli, StrategyComparisonRows) {
  const Result r = run_cli({"attack", "--strategy", "all", "--trials", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[1].find(",even,"), std::string::npos);
  EXPECT_NE(rows[2].find(",stratified,"), std::string::npos);
  EXPECT_NE(rows[3].find(",uniform,"), std::string::npos);
}

TEST(Cli, BoundsTarget) {
  const Result r = run_cli({"bounds", "--N", "3000", "--gammas", "1,5", "--target", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out).size(), 3u);
  EXPECT_NE(r.out.find("required_gamma=13"), std::string::npos);
  const Result none = run_cli({"bounds", "--N", "1000", "--target", "0.01"});
  ASSERT_EQ(none.code, 0) << none.err;
  EXPECT_NE(none.out.find("required_gamma=none"), std::string::npos);
}

TEST(Cli, RouteRows) {
  const Result r = run_cli({"route", "--N", "300,600", "--samples", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].substr(0, 8), "N,gamma,");
  EXPECT_EQ(rows[1].substr(0, 4), "300,");
}

TEST(Cli, Table1WritesGridToStderr) {
  const Result r = run_cli({"table1", "--ns", "1000", "--gammas", "1,2", "--trial-multiplier", "0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out).size(), 3u);
  EXPECT_NE(r.err.find("1000"), std::string::npos);
}

TEST(Cli, OutputFileMatchesStdout) {
  const fs::path path = scratch("attack.csv");
  const std::vector<std::string> base = {"attack", "--trials", "15", "--gamma", "3"};
  std::vector<std::string> to_file = {"--out", path.string()};
  to_file.insert(to_file.end(), base.begin(), base.end());
  ASSERT_EQ(run_cli(to_file).code, 0);
  EXPECT_EQ(slurp(path), run_cli(base).out);
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
  const std::vector<std::string> cmd = {"table1", "--ns", "1000", "--gammas", "1,2", "--trial-multiplier", "0.3"};
  std::vector<std::string> one = {"--workers", "1"};
  std::vector<std::string> three = {"--workers", "3"};
  one.insert(one.end(), cmd.begin(), cmd.end());
  three.insert(three.end(), cmd.begin(), cmd.end());
  EXPECT_EQ(run_cli(one).out, run_cli(three).out);
  std::vector<std::string> other_seed = {"--seed", "43"};
  other_seed.insert(other_seed.end(), cmd.begin(), cmd.end());
  EXPECT_NE(run_cli(one).out, run_cli(other_seed).out);
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# experiment\n\nN = 2000\ngamma = 2\ntrials = 12\nseed = 5\nsamples = 9\n";
  }
  const Result from_file = run_cli({"--config", cfg.string(), "attack"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const Result explicit_flags = run_cli({"--seed", "5", "attack", "--N", "2000", "--gamma", "2", "--trials", "12"});
  EXPECT_EQ(from_file.out, explicit_flags.out);

  const Result overridden = run_cli({"--config", cfg.string(), "attack", "--gamma", "3"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(data_lines(overridden.out)[1].find(",3,0.9,"), std::string::npos);
}

TEST(Cli, ConfigFileErrors) {
  const fs::path bad = scratch("bad.cfg");
  {
    std::ofstream f(bad);
    f << "N = 1000\nthis line has no equals\n";
  }
  const Result r = run_cli({"--config", bad.string(), "attack"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2"), std::string::npos);
  EXPECT_THROW(read_config_file(bad.string()), std::runtime_error);

  const fs::path unknown = scratch("unknown.cfg");
  {
    std::ofstream f(unknown);
    f << "colour = blue\n";
  }
  EXPECT_EQ(run_cli({"--config", unknown.string(), "attack"}).code, 2);
  EXPECT_EQ(run_cli({"--config", scratch("missing.cfg").string(), "attack"}).code, 2);
}

TEST(Cli, DumpCommitteesAndUniverse) {
  const fs::path committees = scratch("committees.txt");
  const fs::path universe = scratch("universe.txt");
  const Result r = run_cli({"attack", "--N", "1000", "--gamma", "2", "--trials", "3", "--dump-committees",
                            committees.string(), "--dump-universe", universe.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto spots = data_lines(slurp(committees));
  ASSERT_EQ(spots.size(), 25u * 2u);
  EXPECT_EQ(spots[0].rfind("0,", 0), 0u);
  EXPECT_EQ(data_lines(slurp(universe)).size(), 1200u);
}

TEST(Cli, ReadConfigFileParsesPairs) {
  const fs::path cfg = scratch("pairs.cfg");
  {
    std::ofstream f(cfg);
    f << "  a = 1 \n# note\nb=two words\n";
  }
  const auto kv = read_config_file(cfg.string());
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");
}

}  // namespace
}  // namespace spotsel::cli
