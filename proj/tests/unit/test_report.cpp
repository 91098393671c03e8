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

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "tvopf/error.hpp"
#include "tvopf/report.hpp"

namespace tvopf {
namespace {

TrackingReport sample_report(int records) {
  TrackingReport r;
  r.header.mode = "prox";
  r.header.mu = 0.7;
  r.header.budget = 64;
  r.header.seed = 12345678901234ULL;
  r.header.solver_hz = 0.1;
  r.header.n = 5;
  r.header.ng = 2;
  r.header.p = 3;
  r.header.vmin = 0.94;
  r.header.vmax = 1.06;
  r.header.case_hash = "00ff";
  r.header.scenario_hash = "abcd";
  r.header.reported_buses = {2, 4};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < records; ++k) {
    r.records.push_back({k, k / 3.0, u(rng), std::abs(u(rng)) * 1e-7, 0.0, u(rng), 1000 * k, 1e-300 * u(rng),
                         {1.0 + u(rng) / 7, 1.0 / 3.0}});
  }
  r.failures.push_back({2, "univariate subproblem unbounded below"});
  return r;
}

TEST(Report, EmptyReportIsHeaderOnly) {
  TrackingReport r;
  r.header.reported_buses = {1, 2, 3};
  const std::string csv = report_to_csv(r);
  std::istringstream in(csv);
  std::string line, last;
  int data_lines = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++data_lines;
    last = line;
  }
  EXPECT_EQ(data_lines, 1);
  EXPECT_EQ(last, "k,timestamp,cost,T,Tprime,L,flops,drift,V_1,V_2,V_3");
  EXPECT_EQ(report_from_csv(csv), r);
}

TEST(Report, ColumnCountFollowsReportedBuses) {
  const TrackingReport r = sample_report(3);
  std::istringstream in(report_to_csv(r));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    EXPECT_EQ(std::count(line.begin(), line.end(), ',') + 1, 8 + 2);
  }
}

TEST(Report, CsvRoundTripIsLossless) {
  const TrackingReport r = sample_report(25);
  EXPECT_EQ(report_from_csv(report_to_csv(r)), r);
}

TEST(Report, JsonRoundTripIsLossless) {
  TrackingReport r = sample_report(25);
  r.records[3].lagrangian = std::numeric_limits<double>::infinity();
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(Report, EmitWritesFiles) {
  const TrackingReport r = sample_report(4);
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "tvopf_report_test.json";
  emit_outputs(r, ReportFormat::json, path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(report_from_json(buf.str()), r);
  std::filesystem::remove(path);
  EXPECT_THROW(emit_outputs(r, ReportFormat::csv, dir / "no_such_dir" / "x.csv"), std::runtime_error);
}

TEST(Report, FormatParsing) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::json);
  EXPECT_THROW(parse_report_format("xml"), ValidationError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    EXPECT_EQ(back, v);
  }
}

}  // namespace
}  // namespace tvopf
