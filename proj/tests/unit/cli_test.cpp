// Copyright 2026 The photonet Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "photonet/cli.hpp"
#include "photonet/serialize.hpp"

namespace photonet::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.find("timestamp") == std::string::npos) kept += line + "\n";
  }
  return kept;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// CSV body lines (no comment lines).
std::vector<std::string> rows_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("photonet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(Validation, BadValuesExitTwoWithMachineReadableError) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"dist", "--t", "1.5"},
           {"dist", "--bogus"},
           {"dist", "--variant", "mystery"},
           {"lp-scan", "--precision", "-1"},
           {"ring", "--parties", "2"},
           {"fit", "--restarts", "0"},
           {"dist", "--variant", "projective", "--impurity", "0.01"},
           {"nonsense"},
       }) {
    const Outcome o = invoke(args);
    EXPECT_EQ(o.code, kExitValidation) << args[0] << " " << (args.size() > 1 ? args[1] : "");
    const Json error = Json::parse(o.err);
    EXPECT_EQ(error.at("error"), "validation");
    EXPECT_TRUE(o.out.empty());
  }
}

TEST(Validation, ConfigDocumentRejectsUnknownAndMisplacedKeys) {
  EXPECT_THROW(parse_run_config(R"({"command":"dist","t":0.5,"colour":"red"})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"command":"herald","t_grid":[0.1]})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"command":"dist","t":"half"})"), ConfigError);
  EXPECT_THROW(parse_run_config("not json"), ConfigError);
  const RunConfig c = parse_run_config(R"({"command":"lp-scan","t_grid":{"start":0.1,"stop":0.3,"step":0.1}})");
  EXPECT_EQ(c.t_grid, (std::vector<double>{0.1, 0.2, 0.3}));
}

TEST(Validation, CanonicalConfigRoundTrips) {
  const RunConfig c = parse_run_config(R"({"command":"fit","t_grid":[0.5,1.0],"visibilities":[1.0],"training":{"steps":7}})");
  EXPECT_EQ(c.training.steps, 7);
  const std::string canonical = run_config_to_json(c);
  EXPECT_EQ(run_config_to_json(parse_run_config(canonical)), canonical);
}

TEST_F(TempDir, ConfigFileAndFlagsCombine) {
  const fs::path config = dir_ / "config.json";
  std::ofstream(config) << R"({"command":"dist","t":0.3,"variant":"number_resolved"})";
  const Outcome o = invoke({"dist", "--config", config.string(), "--t", "0.6", "--format", "kv"});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const Json doc = Json::parse(o.out);
  EXPECT_EQ(doc.at("metadata").at("transmissivity"), 0.6);
  EXPECT_EQ(doc.at("metadata").at("variant"), "number_resolved");
}

TEST_F(TempDir, DistDocumentReparses) {
  const fs::path out = dir_ / "p.json";
  const Outcome o = invoke({"dist", "--t", "0.85", "--phases", "0.1,0.2,0.3", "--format", "kv", "--output", out.string()});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const Json doc = Json::parse(read_file(out));
  EXPECT_TRUE(doc.contains("provenance"));
  Json plain = doc;
  plain.erase("provenance");
  plain["format"] = "photonet.distribution";
  const OutcomeDistribution back = distribution_from_json(plain.dump());
  const OutcomeDistribution direct = triangle_distribution(0.85, {0.1, 0.2, 0.3});
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back.at(i), direct.at(i), 1e-15 * std::max(1.0, direct.at(i)));
}

TEST(Dist, RowsCarryProvenanceAndAllOutcomes) {
  const Outcome o = invoke({"dist", "--t", "0.5"});
  ASSERT_EQ(o.code, kExitSuccess);
  EXPECT_NE(o.out.find("# photonet "), std::string::npos);
  EXPECT_NE(o.out.find("# config: "), std::string::npos);
  const auto rows = rows_of(o.out);
  ASSERT_EQ(rows.size(), 65U);
  EXPECT_EQ(rows[0], "outcome,probability");
  const auto lll = std::find_if(rows.begin(), rows.end(), [](const std::string& r) { return r.starts_with("LLL,"); });
  ASSERT_NE(lll, rows.end());
  EXPECT_NEAR(std::stod(lll->substr(4)), 0.0625, 1e-15);
}

TEST(Determinism, IdenticalConfigsGiveIdenticalOutput) {
  const std::vector<std::string> args{"fit", "--t-grid", "0.5", "--visibilities", "1.0", "--steps", "5", "--batch", "64",
                                      "--restarts", "2", "--eval-samples", "500", "--seed", "9"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.code, kExitSuccess) << a.err;
  EXPECT_EQ(without_timestamp(a.out), without_timestamp(b.out));
  EXPECT_NE(a.out.find("# seeds: "), std::string::npos);
  std::vector<std::string> reseeded = args;
  reseeded.back() = "10";
  EXPECT_NE(without_timestamp(invoke(reseeded).out), without_timestamp(a.out));
}

TEST(LpScan, DefaultGridVerdicts) {
  const Outcome o = invoke({"lp-scan", "--format", "kv", "--precision", "0.005"});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const Json doc = Json::parse(o.out);
  int rows = 0;
  for (const auto& row : doc.at("points")) {
    const double t = row.at("t").get<double>();
    const bool expected_infeasible = t < 0.215 || t > 0.785;
    EXPECT_EQ(row.at("verdict"), expected_infeasible ? "infeasible" : "feasible") << "t=" << t;
    EXPECT_TRUE(row.at("certificate_verified").get<bool>());
    ++rows;
  }
  EXPECT_EQ(rows, 19);
  const auto& boundaries = doc.at("boundary").at("brackets");
  ASSERT_EQ(boundaries.size(), 2U);
  EXPECT_NEAR(boundaries[0].at("estimate").get<double>(), 0.215, 0.005);
  EXPECT_NEAR(boundaries[1].at("estimate").get<double>(), 0.785, 0.005);
  EXPECT_EQ(doc.at("manifest").at("status"), "complete");
}

TEST_F(TempDir, LpScanExportsCertificates) {
  const Outcome o = invoke({"lp-scan", "--t-grid", "0.1,0.5", "--certificates", dir_.string()});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const Json infeasible = Json::parse(read_file(dir_ / "certificate_t0.1.json"));
  EXPECT_EQ(infeasible.at("verdict"), "infeasible");
  EXPECT_TRUE(infeasible.contains("dual_certificate"));
  const Json feasible = Json::parse(read_file(dir_ / "certificate_t0.5.json"));
  EXPECT_TRUE(feasible.contains("witness"));
}

TEST(Herald, ReferenceValues) {
  const Outcome o = invoke({"herald", "--format", "kv"});
  ASSERT_EQ(o.code, kExitSuccess);
  const Json doc = Json::parse(o.out);
  EXPECT_EQ(doc.at("impurity_number_resolving").get<double>(), 0.006875);
  EXPECT_DOUBLE_EQ(doc.at("impurity_non_number_resolving").get<double>(), 0.013);
  const double rate = doc.at("repetition_rate_hz").get<double>();
  EXPECT_GT(rate, 0.3);
  EXPECT_LT(rate, 30.0);
}

TEST(Ring, VerdictsAndSingleClickWeight) {
  const Outcome o = invoke({"ring", "--parties", "3,4", "--t-grid", "0.3,0.9,1.0", "--format", "kv"});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const Json doc = Json::parse(o.out);
  for (const auto& row : doc.at("points")) {
    const int n = row.at("N").get<int>();
    const double t = row.at("t").get<double>();
    if (n == 3 && t == 0.3) EXPECT_EQ(row.at("verdict"), "feasible");
    if (n == 3 && t == 0.9) EXPECT_EQ(row.at("verdict"), "infeasible");
    if (n == 4 && t == 1.0) EXPECT_NEAR(row.at("all_single").get<double>(), 0.125, 1e-12);
  }
}

TEST_F(TempDir, PartialFailureWritesManifestAndCheckpoint) {
  const fs::path out = dir_ / "ring.csv";
  const Outcome o = invoke({"ring", "--parties", "3,10", "--t-grid", "0.3", "--output", out.string()});
  EXPECT_EQ(o.code, kExitPartial);
  const std::string text = read_file(out);
  EXPECT_NE(text.find("# status: partial"), std::string::npos);
  EXPECT_NE(text.find("# failed: N=10,t=0.3"), std::string::npos);
  EXPECT_NE(text.find("# resume:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "ring.csv.checkpoint"));

  const fs::path kv = dir_ / "ring.json";
  EXPECT_EQ(invoke({"ring", "--parties", "3,10", "--t-grid", "0.3", "--output", kv.string(), "--format", "kv"}).code,
            kExitPartial);
  const Json manifest = Json::parse(read_file(kv)).at("manifest");
  EXPECT_EQ(manifest.at("status"), "partial");
  ASSERT_EQ(manifest.at("failed").size(), 1U);
  EXPECT_EQ(manifest.at("failed")[0].at("point"), "N=10,t=0.3");
  EXPECT_TRUE(manifest.contains("resume"));
}

TEST_F(TempDir, ResumeReusesCheckpointedPoints) {
  const fs::path out = dir_ / "ring.csv";
  const fs::path checkpoint = dir_ / "ring.csv.checkpoint";
  const std::vector<std::string> args{"ring", "--parties", "3,10", "--t-grid", "0.3", "--output", out.string()};
  ASSERT_EQ(invoke(args).code, kExitPartial);

  // Tamper with the stored N=3 result; a resumed run must report it verbatim.
  std::istringstream lines(read_file(checkpoint));
  std::string line, edited;
  while (std::getline(lines, line)) {
    Json entry = Json::parse(line);
    if (entry.contains("point") && entry.at("point") == "N=3,t=0.3") entry["result"]["violation"] = 0.125;
    edited += entry.dump() + "\n";
  }
  std::ofstream(checkpoint) << edited;

  std::vector<std::string> resumed = args;
  resumed.push_back("--resume");
  EXPECT_EQ(invoke(resumed).code, kExitPartial);
  EXPECT_NE(read_file(out).find("3,0.3,feasible,0.125,"), std::string::npos);

  // A checkpoint written for a different config is refused.
  std::vector<std::string> other{"ring", "--parties", "3,10", "--t-grid", "0.4", "--output", out.string(), "--resume"};
  EXPECT_EQ(invoke(other).code, kExitValidation);
}

TEST_F(TempDir, SuccessfulRunRemovesCheckpoint) {
  const fs::path out = dir_ / "ring.csv";
  EXPECT_EQ(invoke({"ring", "--parties", "3", "--t-grid", "0.3", "--output", out.string()}).code, kExitSuccess);
  EXPECT_FALSE(fs::exists(dir_ / "ring.csv.checkpoint"));
  EXPECT_NE(read_file(out).find("# status: complete"), std::string::npos);
}

TEST(NoiseSweep, TableLayout) {
  const Outcome o = invoke({"noise-sweep", "--transmissivity-grid", "0.98,1.0", "--efficiency-grid", "0.99,1.0",
                            "--steps", "3", "--batch", "64", "--restarts", "1", "--eval-samples", "200"});
  ASSERT_EQ(o.code, kExitSuccess) << o.err;
  const auto rows = rows_of(o.out);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[0], "T,nu=0.99,nu=1");
  EXPECT_EQ(rows[1].rfind("0.98,", 0), 0U);
}

TEST(Help, ListsFlags) {
  const Outcome o = invoke({"fit", "--help"});
  EXPECT_EQ(o.code, kExitSuccess);
  EXPECT_NE(o.out.find("--visibilities"), std::string::npos);
}

}  // namespace
}  // namespace photonet::cli
