// Copyright 2026 The scoring Authors
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
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scoring/scorecard.h"
#include "synthetic.h"

namespace scoring {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scoring_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
            "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "surgery.csv") << synthetic::surgery_like_csv(200, 7);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const std::string cmd = std::string(SCORING_CLI) + " " + args + " >" + (dir_ / "out").string() +
                            " 2>" + (dir_ / "err").string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(dir_ / "out");
    r.err = slurp(dir_ / "err");
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string data_flags() const {
    return "--data " + path("surgery.csv") + " --label Risk1Yr --positive T";
  }

  fs::path dir_;
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  const Result none = run("");
  EXPECT_NE(none.code, 0);
  EXPECT_NE(none.err.find("Usage"), std::string::npos);
  const Result unknown = run("train --bogus");
  EXPECT_NE(unknown.code, 0);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_NE(run("--tie-mode sideways render --card x.json").code, 0);
}

TEST_F(Cli, TrainSurgeryScorecard) {
  const Result r = run("--seed 3 train --method bauc-integer --M 2 --theta 6 --node-limit 2000 " +
                       data_flags() + " --json " + path("card.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| Question | Response | Points |"), std::string::npos);
  const Scorecard card = scorecard_from_json(nlohmann::json::parse(slurp(path("card.json"))));
  EXPECT_EQ(card.method, "bauc-integer");
  std::set<std::string> questions;
  for (const auto& e : card.entries) {
    EXPECT_LE(std::abs(e.points), 2);
    questions.insert(e.question);
  }
  EXPECT_LE(questions.size(), 6u);
}

TEST_F(Cli, TrainBaselinesWithHoldout) {
  for (const char* m : {"l1", "elastic-net", "forward", "backward", "bauc-rounding"}) {
    const Result r = run(std::string("train --method ") + m + " --M 1 --theta 3 --holdout 0.2 " +
                         data_flags());
    EXPECT_EQ(r.code, 0) << m << ": " << r.err;
    EXPECT_NE(r.err.find("holdout: n=40"), std::string::npos) << m;
  }
}

TEST_F(Cli, BinarizeEvaluateRender) {
  ASSERT_EQ(run("binarize " + data_flags() + " --out " + path("d.json")).code, 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(path("d.json")));
  const std::size_t p = doc["p"].get<std::size_t>();

  Scorecard zero = build_table(std::vector<int>(p, 0), 0.0);
  std::ofstream(path("zero.json")) << render(zero, RenderFormat::kJson);
  const Result e = run("evaluate --card " + path("zero.json") + " --data " + path("d.json"));
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(e.out)["auc"].get<double>(), 0.5);

  const Result md = run("render --card " + path("zero.json"));
  ASSERT_EQ(md.code, 0);
  EXPECT_NE(md.out.find("| Risk |"), std::string::npos);
  const Result js = run("render --format json --card " + path("zero.json"));
  EXPECT_EQ(scorecard_from_json(nlohmann::json::parse(js.out)), zero);

  Scorecard wrong = build_table(std::vector<int>(p + 1, 0), 0.0);
  std::ofstream(path("wrong.json")) << render(wrong, RenderFormat::kJson);
  EXPECT_EQ(run("evaluate --card " + path("wrong.json") + " --data " + path("d.json")).code, 2);
}

TEST_F(Cli, BenchmarkIsByteDeterministic) {
  std::ofstream(path("exp.cfg")) << "dataset = surgery.csv\nlabel = Risk1Yr\npositive = T\n"
                                    "methods = bauc-integer, elastic-net, forward\n"
                                    "M = 1\ntheta = 2\nreplications = 2\n"
                                    "bauc-integer.node_limit = 500\n";
  const Result a = run("benchmark --config " + path("exp.cfg") + " --out " + path("a"));
  ASSERT_EQ(a.code, 0) << a.err;
  const Result b = run("benchmark --config " + path("exp.cfg") + " --out " + path("b"));
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string csv = slurp(path("a/report.csv"));
  EXPECT_FALSE(csv.empty());
  EXPECT_EQ(csv, slurp(path("b/report.csv")));
  EXPECT_TRUE(fs::exists(path("a/report.md")));
  EXPECT_TRUE(fs::exists(path("a/scorecard_forward_1_2_1.json")));
}

TEST_F(Cli, ErrorCategories) {
  EXPECT_EQ(run("train --data " + path("nope.csv") + " --label y --positive 1").code, 2);
  std::ofstream(path("bad.cfg")) << "dataset = surgery.csv\nreplications = -1\n";
  const Result cfg = run("benchmark --config " + path("bad.cfg") + " --out " + path("o"));
  EXPECT_EQ(cfg.code, 3);
  EXPECT_NE(cfg.err.find("configuration error"), std::string::npos);
  EXPECT_EQ(run("train --theta 99 " + data_flags()).code, 3);
  EXPECT_EQ(run("render --card " + path("surgery.csv")).code, 2);
}

}  // namespace
}  // namespace scoring
