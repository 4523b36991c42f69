#include <gtest/gtest.h>

#include "collatz/maps.hpp"
#include "collatz/report.hpp"
#include "collatz/stats.hpp"
#include "collatz/tag.hpp"
#include "collatz/trajectory.hpp"

using namespace collatz;

namespace {
const Natural kN0 = Natural::from_string("31415926535897932384626433832795028800");
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(report::csv_field("plain"), "plain");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(report::csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(report::csv_row({"a", "b,c"}), "a,\"b,c\"\r\n");
}

TEST(Report, GridMirrorsTable) {
  const BlockCensus c = block_census(kN0, 100);
  const std::string grid = report::render_table(c);
  std::istringstream in(grid);
  std::string line;
  std::getline(in, line);
  EXPECT_NE(line.find("10j + k"), std::string::npos);
  std::getline(in, line);  // column header
  std::getline(in, line);  // k=0
  EXPECT_EQ(line, "   k=0   529   529   529   678   529   529   846   529   846   846");
  std::string last;
  while (std::getline(in, line)) last = line;
  EXPECT_EQ(last.substr(last.size() - 3), "846");
}

TEST(Report, ShortCensusIsFlat) {
  const BlockCensus c = block_census(27, 5);
  const std::string flat = report::render_table(c);
  EXPECT_EQ(flat.find("j=0"), std::string::npos);
  EXPECT_NE(flat.find("70"), std::string::npos);
}

TEST(Report, RowsAndCsv) {
  const BlockCensus c = block_census(kN0, 100);
  const std::string rows = report::render_rows(c);
  EXPECT_NE(rows.find("0.48204"), std::string::npos);
  const std::string csv = report::census_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), "sigma_inf,frequency,one_ratio,odd_count\r\n");
  EXPECT_NE(csv.find("529,38,0.48204,255\r\n"), std::string::npos);
  const auto j = report::census_json(c);
  EXPECT_EQ(j["schema"], "collatz-lab/1");
  EXPECT_EQ(j["rows"].size(), 4u);
}

TEST(Report, TrajectoryEmitters) {
  const Trajectory t = iterate(t_map(), 3, {}, true);
  EXPECT_EQ(report::trajectory_csv(t), "step,value,parity\r\n0,3,1\r\n1,5,1\r\n2,8,0\r\n3,4,0\r\n4,2,0\r\n5,1,1\r\n");
  const auto j = report::trajectory_json(t, t_map());
  EXPECT_EQ(j["schema"], "collatz-lab/1");
  EXPECT_EQ(j["outcome"], "ReachedOne");
  EXPECT_EQ(j["values"][2], "8");
}

TEST(Report, SvgIsSelfContainedAndDeterministic) {
  const Trajectory t = iterate(t_map(), 649, {}, true);
  const std::string a = report::render_svg(t, report::Scale::kLinear);
  EXPECT_EQ(a, report::render_svg(t, report::Scale::kLinear));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("<polyline"), std::string::npos);
  EXPECT_EQ(a.find("href"), std::string::npos);
  EXPECT_EQ(a.find("<link"), std::string::npos);
  const Trajectory big = iterate(t_map(), kN0, {}, true);
  const std::string b = report::render_svg(big, report::Scale::kLog, report::Overlay::kSlope);
  EXPECT_NE(b.find("stroke-dasharray"), std::string::npos);
  const std::string e = report::render_svg(big, report::Scale::kLog, report::Overlay::kExtremal);
  EXPECT_NE(e.find("stroke-dasharray"), std::string::npos);
  const Trajectory one = iterate(t_map(), 1, {}, true);
  EXPECT_NE(report::render_svg(one, report::Scale::kLinear).find("<circle"), std::string::npos);
}

TEST(Report, StatsJsonUndefinedFields) {
  const auto j = report::stats_json(compute_stats(1));
  EXPECT_TRUE(j["rho"].is_null());
  EXPECT_TRUE(j["gamma"].is_null());
  EXPECT_EQ(j["sigma_inf"], 0);
}

TEST(Report, TagJson) {
  const auto c = tag::collatz_tag_check(3);
  const auto j = report::tag_run_json(tag::collatz_tag(), c.run);
  EXPECT_EQ(j["schema"], "collatz-lab/1");
  EXPECT_EQ(j["outcome"], tag::to_string(c.run.outcome));
}
