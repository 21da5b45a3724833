// Copyright 2026 The windramp Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <json.hpp>

#include "test_support.hpp"

namespace windramp {
namespace {

using testing::run_command;
using testing::TempDir;

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void expect_error_line(const testing::CommandResult& r, int code, const std::string& kind) {
  EXPECT_EQ(r.exit_code, code) << r.err;
  const auto line = r.err.substr(r.err.rfind('{', r.err.find("\"error\"")));
  const auto j = nlohmann::json::parse(line.substr(0, line.find('\n')));
  EXPECT_EQ(j.at("error").at("kind"), kind);
  EXPECT_EQ(j.at("error").at("exit_code"), code);
  EXPECT_FALSE(j.at("error").at("message").get<std::string>().empty());
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    csv_ = dir_ / "s.csv";
    auto r = run_command(testing::synth_path() + " --points 3000 --seed 4 -o " + q(csv_));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    testing::write_file(dir_ / "run.json", R"({
      "version": 1,
      "data": {"path": "s.csv", "rated_capacity_mw": 100},
      "threshold": {"fraction": 0.5},
      "horizons": [1, 2],
      "lag_count": 6,
      "hyperparams": {"n_estimators": 4, "max_depth": 2},
      "workers": 1,
      "output_dir": ")" + (dir_ / "out").string() + R"("
    })");
  }

  std::string cli(const std::string& args) { return testing::cli_path() + " " + args; }

  TempDir dir_;
  std::filesystem::path csv_;
};

TEST_F(Cli, FullRunThroughConfig) {
  const std::string cfg = "--config " + q(dir_ / "run.json");
  auto prep = run_command(cli("prepare " + cfg));
  ASSERT_EQ(prep.exit_code, 0) << prep.err;
  EXPECT_NE(prep.out.find("h2.csv"), std::string::npos);
  auto train = run_command(cli("train " + cfg));
  ASSERT_EQ(train.exit_code, 0) << train.err;
  auto eval = run_command(cli("evaluate " + cfg));
  ASSERT_EQ(eval.exit_code, 0) << eval.err;
  EXPECT_NE(eval.out.find("Persistence"), std::string::npos);
  EXPECT_NE(eval.out.find("Test time/example"), std::string::npos);

  auto pred = run_command("printf '1,2,3,4,5,6\\n6,5,4,3,2,1\\n' | " +
                          cli("predict --model " + q(dir_ / "out" / "models" / "h1.json")));
  ASSERT_EQ(pred.exit_code, 0) << pred.err;
  EXPECT_EQ(std::count(pred.out.begin(), pred.out.end(), '\n'), 2);
  EXPECT_EQ(std::count(pred.out.begin(), pred.out.end(), ','), 8);
}

TEST_F(Cli, FlagsOverrideConfig) {
  const std::string cfg = "--config " + q(dir_ / "run.json");
  auto r = run_command(cli("prepare " + cfg + " --horizons 3 --lags 5 --out " + q(dir_ / "o2")));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "o2" / "datasets" / "h3.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir_ / "o2" / "datasets" / "h1.csv"));
  const auto meta = nlohmann::json::parse(testing::read_file(dir_ / "o2" / "datasets" / "h3.meta.json"));
  EXPECT_EQ(meta.at("horizon").at("lag_count"), 5);
}

TEST_F(Cli, DistributionWithoutConfig) {
  auto r = run_command(cli("distribution --data " + q(csv_) + " --capacity-mw 100 --horizons 1,6"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("Number of examples"), std::string::npos);
  EXPECT_NE(r.out.find("Horizon S=6"), std::string::npos);
  auto j = run_command(cli("distribution --json --data " + q(csv_) + " --threshold-mw 30 --capacity-mw 100"));
  ASSERT_EQ(j.exit_code, 0) << j.err;
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc.at("thresholds").at("thresholds_mw")[0], 30.0);
  EXPECT_EQ(doc.at("horizons").size(), 6u);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  expect_error_line(run_command(cli("prepare --data " + q(csv_))), 2, "config");
  expect_error_line(run_command(cli("prepare --data " + q(csv_) + " --capacity-mw 100 --threshold-fraction 2")), 2,
                    "config");
  expect_error_line(run_command(cli("train --config " + q(dir_ / "missing.json"))), 2, "config");
  expect_error_line(run_command(cli("prepare --config " + q(dir_ / "run.json") + " --grid bogus")), 2, "config");
  expect_error_line(run_command(cli("frobnicate")), 2, "config");
}

TEST_F(Cli, DataErrorsExitThree) {
  testing::write_file(dir_ / "neg.csv", "timestamp,power_mw\n0,1\n600,-4\n");
  expect_error_line(run_command(cli("prepare --data " + q(dir_ / "neg.csv") + " --capacity-mw 10 --out " +
                                    q(dir_ / "x"))),
                    3, "data");
  expect_error_line(run_command(cli("evaluate --config " + q(dir_ / "run.json"))), 3, "data");
  testing::write_file(dir_ / "broken.json", "{\"format\": \"windramp-gbrt\", \"version\": 1");
  expect_error_line(run_command("echo 1,2 | " + cli("predict --model " + q(dir_ / "broken.json"))), 3, "data");
}

TEST_F(Cli, PredictWidthMismatchExitsThree) {
  const std::string cfg = "--config " + q(dir_ / "run.json");
  ASSERT_EQ(run_command(cli("prepare " + cfg)).exit_code, 0);
  ASSERT_EQ(run_command(cli("train " + cfg + " --horizons 1")).exit_code, 0);
  const std::string model = q(dir_ / "out" / "models" / "h1.json");
  expect_error_line(run_command("echo 1,2,3 | " + cli("predict --model " + model)), 3, "data");
  auto window = run_command("echo 0,0,0,1,2,3,4,5,6 | " + cli("predict --window --model " + model));
  EXPECT_EQ(window.exit_code, 0) << window.err;
}

}  // namespace
}  // namespace windramp
