/*
 * Copyright (C) 2026 The gmdd-test Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gmdd/dataset.hpp"
#include "gmdd/dgp.hpp"
#include "gmdd/error.hpp"
#include "gmdd/report.hpp"
#include "gmdd/run_config.hpp"

namespace gmdd {
namespace {

Dataset parse(const std::string &text, const std::vector<std::string> &req = {}) {
  std::istringstream in(text);
  return parse_csv(in, req, "inline");
}

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("gmdd_io_" + name)).string();
}

TEST(Csv, ParsesHeaderedNumbers) {
  const Dataset d = parse("a,b\n1,2\n3.5,-4\n1e-3,0\n");
  ASSERT_EQ(d.rows(), 3);
  ASSERT_EQ(d.cols(), 2);
  EXPECT_EQ(d.names()[1], "b");
  EXPECT_EQ(d.column("a")[1], 3.5);
  EXPECT_EQ(d.column("b")[1], -4.0);
  EXPECT_EQ(d.column("a")[2], 1e-3);
  EXPECT_EQ(d.dropped_rows, 0u);
}

TEST(Csv, DropsRowWithBadRequiredCell) {
  const Dataset d = parse("u,z,name\n1,2,x\nfoo,3,y\n4,5,z\n6,7,w\n", {"u", "z"});
  EXPECT_EQ(d.rows(), 3);
  EXPECT_EQ(d.dropped_rows, 1u);
  ASSERT_EQ(d.drop_notes.size(), 1u);
  EXPECT_EQ(d.cols(), 2);
  EXPECT_EQ(d.column("u")[1], 4.0);
}

TEST(Csv, QuotedFieldsAndErrors) {
  const auto cells = split_csv_line("1,\"a,b\",3");
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[1], "a,b");
  EXPECT_THROW(parse("a,b\n1,2\n3\n"), ValidationError);
  EXPECT_THROW(parse("a,b\n1,2\n3,4\n", {"c"}), ValidationError);
  EXPECT_THROW(parse("a\n1\n"), ValidationError);
  EXPECT_THROW(load_csv(temp_path("missing_file.csv")), IoError);
  double v = 0.0;
  EXPECT_FALSE(parse_double("1.5x", v));
  EXPECT_TRUE(parse_double(" 2.25 ", v));
  EXPECT_EQ(v, 2.25);
}

TEST(Report, SimCsvRoundTrip) {
  std::vector<SimRow> rows(2);
  rows[0] = {"LS1", "chi2", 200, 0.0, 0.05, 0.1 / 3.0, 0.006819090848492928};
  rows[1] = {"MI2", "gauss", 800, 0.7, 0.01, 0.123456789012345678, 1.0 / 7.0};
  std::stringstream ss;
  write_sim_csv(rows, ss);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kSimCsvHeader);
  const auto back = read_sim_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].dgp, rows[i].dgp);
    EXPECT_EQ(back[i].test, rows[i].test);
    EXPECT_EQ(back[i].n, rows[i].n);
    EXPECT_NEAR(back[i].gamma, rows[i].gamma, 1e-15);
    EXPECT_NEAR(back[i].rate, rows[i].rate, 1e-15);
    EXPECT_NEAR(back[i].mc_se, rows[i].mc_se, 1e-15);
  }
}

TEST(Report, MiJsonKeys) {
  MiTestResult r;
  r.statistic = 2.5;
  r.df = 2;
  r.p_value = 0.3;
  r.delta_hat = Vector::Constant(2, 0.1);
  r.spectrum = Vector::Constant(2, 1.0);
  r.retained_rank = 2;
  const Json j = to_json(r);
  for (const char *key : {"statistic", "df", "p_value", "delta_hat", "spectrum", "retained_rank"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["delta_hat"].size(), 2u);
  const std::string flat = json_to_field_csv(j);
  EXPECT_NE(flat.find("delta_hat[1]"), std::string::npos);
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(RunConfig, GridParsing) {
  const auto g = parse_grid("0:1:0.1");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 1.0, 1e-12);
  EXPECT_EQ(parse_grid("200,400").size(), 2u);
  EXPECT_THROW(parse_grid("0:1:0"), ValidationError);
  EXPECT_THROW(parse_grid("a,b"), ValidationError);
}

TEST(RunConfig, RejectsUnknownKeys) {
  EXPECT_THROW(run_config(R"({"command":"mi","data":"x.csv","u_col":"u","bogus":1})"),
               ValidationError);
  EXPECT_THROW(run_config(R"({"command":"nope"})"), ValidationError);
  EXPECT_THROW(run_config("{not json"), ValidationError);
  EXPECT_THROW(run_config(R"({"command":"simulate","reps":0})"), ValidationError);
}

TEST(RunConfig, MiEndToEnd) {
  const Dataset d = generate({DgpId::MI1, 120, 0.0, 3});
  const std::string path = temp_path("mi.csv");
  {
    std::ofstream out(path);
    out << "u,z1,z2\n";
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      out << format_real(d.column("u")[i]) << ',' << format_real(d.column("z1")[i]) << ','
          << format_real(d.column("z2")[i]) << '\n';
  }
  const RunOutput a = run_config(R"({"command":"mi","data":")" + path +
                                 R"(","u_col":"u","z_cols":"z1,z2"})");
  EXPECT_EQ(a.df, 1);
  EXPECT_GE(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
  const Json j = Json::parse(a.payload);
  EXPECT_TRUE(j.contains("statistic"));
  const RunOutput b = run_config(R"({"command":"mi","data":")" + path +
                                 R"(","u_col":"u","z_cols":"z1,z2","format":"csv"})");
  EXPECT_EQ(a.statistic, b.statistic);
  std::remove(path.c_str());
}

} // namespace
} // namespace gmdd
