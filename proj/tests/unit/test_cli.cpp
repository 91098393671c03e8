/*
 * Copyright 2026 The tvopf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "tvopf/report.hpp"
#include "tvopf_cli/cli.hpp"

namespace tvopf {
namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tvopf_cli_" + name);
}

TEST(Cli, ValidateAcceptsGoodCase) {
  const CliResult r = run({"validate", testing::case_path("two_bus.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2 buses"), std::string::npos);
}

TEST(Cli, ValidateRejectsBadCase) {
  const auto path = temp("bad.json");
  std::ofstream(path) << R"({"baseMVA": 100, "slack": {"rho0": 1, "theta0": 0},
    "buses": [{"id": 1, "vmin": 0.95, "vmax": 1.05, "regulated": true}],
    "lines": [{"from": 1, "to": 99, "r": 0.01, "x": 0.1, "b_shunt": 0}],
    "generators": []})";
  const CliResult r = run({"validate", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("99"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, FlopsPrintsClosedForm) {
  const CliResult r = run({"flops", "--N", "2", "--NG", "1", "--p", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("per_epoch 1144\n"), std::string::npos);
  EXPECT_NE(r.out.find("cubic_root_evaluations 18\n"), std::string::npos);
  const CliResult b = run({"flops", "--N", "2", "--NG", "1", "--p", "2", "--sigma-l", "2", "--sigma-p", "0.5",
                     "--drift", "0.1", "--error", "1.5"});
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("budget_flops "), std::string::npos);
  const CliResult bad = run({"flops", "--N", "2", "--NG", "1", "--p", "2", "--sigma-l", "0.5", "--sigma-p", "0.5",
                       "--drift", "0.1", "--error", "1.5"});
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", "--case", testing::case_path("two_bus.json"), "--mode", "fast"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainErrorsExitTwo) {
  EXPECT_EQ(run({"solve", "--case", testing::case_path("two_bus.json"), "--mu", "-1"}).code, 2);
  EXPECT_EQ(run({"solve", "--case", testing::case_path("two_bus.json"), "--L", "fast"}).code, 2);
}

TEST(Cli, SynthThenTrackWritesReport) {
  const auto scen = temp("scen.csv");
  const auto out = temp("report.csv");
  ASSERT_EQ(run({"synth", "--case", testing::case_path("five_bus_wide.json"), "--duration", "5", "--out",
                 scen.string()})
                .code,
            0);
  const CliResult r = run({"track", "--case", testing::case_path("five_bus_wide.json"), "--scenario", scen.string(),
                     "--budget", "50", "--out", out.string(), "--report-buses", "2,4"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  const TrackingReport rep = report_from_csv(buf.str());
  EXPECT_EQ(rep.header.vmin, 0.94);
  EXPECT_EQ(rep.header.vmax, 1.06);
  EXPECT_EQ(rep.records.size(), 5u);
  EXPECT_EQ(rep.header.reported_buses, (std::vector<int>{2, 4}));
  std::filesystem::remove(scen);
  std::filesystem::remove(out);
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  const auto cfg = temp("cfg.toml");
  std::ofstream(cfg) << "[solve]\nbudget = 7\nseed = 3\nformat = \"json\"\n";
  const CliResult a = run({"--config", cfg.string(), "solve", "--case", testing::case_path("two_bus.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  const TrackingReport ra = report_from_json(a.out);
  EXPECT_EQ(ra.header.budget, 7);
  EXPECT_EQ(ra.header.seed, 3u);
  const CliResult b = run({"--config", cfg.string(), "solve", "--case", testing::case_path("two_bus.json"), "--budget",
                     "9"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(report_from_json(b.out).header.budget, 9);
  std::filesystem::remove(cfg);
}

}  // namespace
}  // namespace tvopf
