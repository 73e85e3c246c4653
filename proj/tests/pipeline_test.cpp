// Copyright 2026 The HBR Authors.
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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "hbr/datasets.hpp"
#include "hbr/parallel.hpp"
#include "hbr/pipeline.hpp"

namespace hbr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hbr_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs the CLI with stdout sent to `out`; returns the exit status.
  int cli(const std::string& args, const std::string& out) const {
    const std::string cmd = std::string(HBR_CLI) + " " + args + " > " + out + " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  RunConfig blocks_config() const {
    const LabeledGraph lg = gen_blocks({8, 12, 10}, 4);
    write_adjacency_csv(lg.graph, path("adj.csv"));
    std::ofstream labels(path("labels.csv"));
    labels << "label\n";
    for (int l : lg.truth.labels) labels << l << '\n';
    RunConfig cfg;
    cfg.adjacency = path("adj.csv");
    cfg.labels_path = path("labels.csv");
    cfg.m = 3;
    cfg.seed = 5;
    return cfg;
  }

  fs::path dir_;
};

TEST_F(Pipeline, ClusterResultFields) {
  RunConfig cfg = blocks_config();
  for (const std::string algo : {"hbropt", "hbrenum", "kmeans", "oracle"}) {
    cfg.algo = algo;
    const json j = run_cluster(cfg);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["labels"].size(), 30u);
    EXPECT_EQ(j["accuracy"]["accuracy"], 1.0) << algo;
    EXPECT_EQ(j["cut_costs"]["cut"], 0.0);
    EXPECT_EQ(j["config"], to_json(cfg));
  }
}

TEST_F(Pipeline, DeterministicAcrossRunsAndThreads) {
  RunConfig cfg = blocks_config();
  cfg.contrast = "abs";
  std::string first;
  {
    ScopedThreadCount one(1);
    first = run_cluster(cfg).dump();
    EXPECT_EQ(run_cluster(cfg).dump(), first);
  }
  ScopedThreadCount eight(8);
  EXPECT_EQ(run_cluster(cfg).dump(), first);
}

TEST_F(Pipeline, ConfigJsonRoundTrip) {
  RunConfig cfg = blocks_config();
  cfg.contrast = "p:3.5";
  cfg.radius = 2.0;
  cfg.laplacian = LaplacianKind::kSymmetricNormalized;
  cfg.ignore_columns = {"id"};
  const json j = to_json(cfg);
  EXPECT_EQ(to_json(run_config_from_json(j)), j);
  json bad = j;
  bad["bogus"] = 1;
  EXPECT_THROW(run_config_from_json(bad), InputError);
}

TEST_F(Pipeline, StageErrors) {
  RunConfig cfg;
  cfg.input = path("missing.csv");
  try {
    run_cluster(cfg);
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "load_csv");
    EXPECT_EQ(exit_code(e.kind()), 2);
  }
  cfg = blocks_config();
  cfg.algo = "nope";
  EXPECT_THROW(run_cluster(cfg), StageError);
  cfg = blocks_config();
  cfg.m = 40;
  try {
    run_cluster(cfg);
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "embedding");
  }
  EXPECT_EQ(exit_code(ErrorKind::kNumerical), 3);
  EXPECT_EQ(exit_code(ErrorKind::kVerification), 4);
}

TEST_F(Pipeline, CliMissingInput) {
  const std::string out = path("out.json");
  EXPECT_EQ(cli("cluster --input " + path("missing.csv"), out), 2);
  const json j = json::parse(read(out));
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["stage"], "load_csv");
  EXPECT_EQ(j["kind"], "input");
}

TEST_F(Pipeline, CliClusterIsByteIdentical) {
  const RunConfig cfg = blocks_config();
  const std::string args = "cluster --adjacency " + cfg.adjacency + " --labels " + cfg.labels_path +
                           " --m 3 --algo hbropt --contrast sig --seed 3";
  ASSERT_EQ(cli(args, path("a.json")), 0);
  ASSERT_EQ(cli(args, path("b.json")), 0);
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));
  EXPECT_EQ(json::parse(read(path("a.json")))["accuracy"]["accuracy"], 1.0);
}

TEST_F(Pipeline, CliBench) {
  EXPECT_EQ(cli("bench --manifest " + write("empty.json", "[]"), path("empty.csv")), 0);
  std::stringstream header(read(path("empty.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(header, line)) ++lines;
  EXPECT_EQ(lines, 1);

  const RunConfig good = blocks_config();
  json bad = to_json(good);
  bad["m"] = 99;
  const json manifest = json::array({to_json(good), bad});
  ASSERT_EQ(cli("bench --runs 2 --manifest " + write("m.json", manifest.dump()), path("b.csv")), 0);
  std::stringstream table(read(path("b.csv")));
  std::vector<std::string> rows;
  while (std::getline(table, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find(",1,0,0,"), std::string::npos) << rows[1];
  EXPECT_NE(rows[2].find(",2,"), std::string::npos) << rows[2];
  EXPECT_EQ(cli("bench --manifest " + write("broken.json", "{"), path("x.csv")), 2);
}

TEST_F(Pipeline, CliVerifyTheory) {
  ASSERT_EQ(cli("verify-theory --check enumeration --m 3 --contrast abs", path("e.json")), 0);
  const json e = json::parse(read(path("e.json")));
  EXPECT_EQ(e["checks"][0]["signed_classes"], 6);
  EXPECT_EQ(e["checks"][0]["pass"], true);
  ASSERT_EQ(cli("verify-theory --check necessity-g2", path("g2.json")), 0);
  EXPECT_EQ(json::parse(read(path("g2.json")))["checks"][0]["pass"], true);
  EXPECT_EQ(cli("verify-theory --check bogus", path("bad.json")), 2);
}

TEST_F(Pipeline, CliGenerate) {
  ASSERT_EQ(cli("gen --gen circles --seed 2 --output " + path("c.csv"), path("o")), 0);
  const LabeledDataset ds = load_csv(path("c.csv"), CsvOptions{"label", true, {}});
  EXPECT_EQ(ds.size(), 1250);
  EXPECT_EQ(cli("gen --gen nope --output " + path("n.csv"), path("o")), 2);
}

}  // namespace
}  // namespace hbr
