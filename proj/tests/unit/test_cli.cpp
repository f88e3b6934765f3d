// Copyright 2026 The omlab Authors
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

// End-to-end checks of the omlab binary: exit codes and file outputs.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "omlab/json_io.hpp"

namespace omlab {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("omlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the binary with `args`; stdout and stderr land in out.txt / err.txt.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + OMLAB_CLI_PATH + "\" " + args + " > \"" + path("out.txt") +
                            "\" 2> \"" + path("err.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, GenIsByteStable) {
  ASSERT_EQ(run("gen --family random-bipartite --n 5 --m 4 --seed 3 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen --family random-bipartite --n 5 --m 4 --seed 3 --out " + path("b.json")), 0);
  EXPECT_EQ(read("a.json"), read("b.json"));
  EXPECT_EQ(Json::parse(read("a.json")).at("schema"), kInstanceSchema);
}

TEST_F(Cli, UnknownFamilyIsUsageError) { EXPECT_EQ(run("gen --family nope"), 2); }

TEST_F(Cli, RunThenReplay) {
  ASSERT_EQ(run("gen --family upper-triangular --n 10 --out " + path("ut.json")), 0);
  ASSERT_EQ(run("run --instance " + path("ut.json") + " --algorithm perturbed --trials 200 --seed 4 --out " +
                path("rep.json")),
            0);
  EXPECT_EQ(run("report --replay " + path("rep.json")), 0);
  EXPECT_EQ(run("report --in " + path("rep.json") + " --format csv --out " + path("rep.csv")), 0);
  EXPECT_EQ(read("rep.csv").rfind("schema_version,algorithm,instance_hash,trial,seed,gain,opt,ratio\n", 0), 0u);

  Json j = Json::parse(read("rep.json"));
  j["per_trial"][3]["gain"] = -1.0;
  write("bad.json", j.dump());
  EXPECT_EQ(run("report --replay " + path("bad.json")), 1);
}

TEST_F(Cli, RunFromFamilyAndCsv) {
  EXPECT_EQ(run("run --family greedy-gadget --eps 0.01 --algorithm greedy --trials 3 --format csv"), 0);
  EXPECT_NE(read("out.txt").find("greedy"), std::string::npos);
  EXPECT_EQ(run("run --family upper-triangular --n 3 --algorithm perturbed-discrete --trials 3"), 2);
  EXPECT_EQ(run("run --family upper-triangular --n 3 --algorithm msvv --trials 3"), 2);
}

TEST_F(Cli, VerifyPassesAndMutantFails) {
  ASSERT_EQ(run("gen --family upper-triangular --n 2 --out " + path("h.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("h.json") + " --k 3 --out " + path("v.json")), 0);
  const Json v = Json::parse(read("v.json"));
  EXPECT_EQ(v.at("schema"), kVerifierSchema);
  EXPECT_TRUE(v.at("passed").get<bool>());
  EXPECT_EQ(run("verify --instance " + path("h.json") + " --k 3 --mutant"), 1);
  EXPECT_NE(read("err.txt").find("partner_displacement"), std::string::npos);
  EXPECT_EQ(run("verify --instance " + path("h.json") + " --warmup"), 0);
}

TEST_F(Cli, VerifyTrivialInstance) {
  ASSERT_EQ(run("gen --family upper-triangular --n 1 --out " + path("one.json")), 0);
  EXPECT_EQ(run("verify --instance " + path("one.json") + " --k 2"), 0);
}

TEST_F(Cli, VerifyFallsBackToStatistical) {
  EXPECT_EQ(run("verify --family upper-triangular --n 6 --k 4 --guard 100 --samples 2000"), 0);
  EXPECT_NE(read("err.txt").find("statistical"), std::string::npos);
}

TEST_F(Cli, ReduceAllocation) {
  write("alloc.json", R"({"schema": "omlab.allocation/1",
    "agents": [{"id": 0, "budget": 10, "bid": 3, "interest": [0, 1, 2, 3]},
               {"id": 1, "budget": 6, "bid": 3, "interest": [1]}],
    "items": [0, 1, 2, 3]})");
  ASSERT_EQ(run("reduce --instance " + path("alloc.json") + " --out " + path("img.json") + " --map " +
                path("map.json")),
            0) << read("err.txt");
  const Json img = Json::parse(read("img.json"));
  std::vector<double> w;
  for (const auto& o : img.at("offline")) w.push_back(o.at("weight").get<double>());
  EXPECT_EQ(w, (std::vector<double>{3, 3, 3, 1, 3, 3}));
  EXPECT_EQ(Json::parse(read("map.json")).at("schema"), kReductionMapSchema);
  EXPECT_EQ(run("run --instance " + path("alloc.json") + " --algorithm msvv --trials 1"), 0);
}

TEST_F(Cli, BadInputsExitTwo) {
  write("dangling.json", R"({"schema": "omlab.instance/1", "offline": [{"id": 0, "weight": 1, "capacity": 1}],
    "online": [{"id": 0}], "edges": [[0, 4]], "arrival": [0]})");
  EXPECT_EQ(run("verify --instance " + path("dangling.json") + " --k 2"), 2);
  EXPECT_NE(read("err.txt").find("dangling"), std::string::npos);
  write("garbage.json", "{ not json");
  EXPECT_EQ(run("run --instance " + path("garbage.json")), 2);
  EXPECT_EQ(run("run --instance " + path("missing.json")), 2);
  EXPECT_EQ(run("verify --family upper-triangular --n 2 --k 0"), 2);
}

TEST_F(Cli, AnalysisSubcommands) {
  EXPECT_EQ(run("analyze-2x2 --alpha 1,2"), 0);
  const Json two = Json::parse(read("out.txt"));
  EXPECT_FALSE(two.empty());
  EXPECT_EQ(run("stopping-rules --family edge-weight-hard --n 10 --D 100"), 0);
  EXPECT_EQ(run("msvv-compare --agents 4 --bid 1 --ladder 1,5 --seeds 20 --format csv"), 0);
  EXPECT_NE(read("out.txt").find("schema_version,capacity"), std::string::npos);
}

}  // namespace
}  // namespace omlab
