#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "aoi/errors.hpp"
#include "aoi/report.hpp"
#include "aoi/sweep.hpp"

namespace aoi {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

SweepSpec default_spec(std::uint64_t deliveries) {
  SweepSpec s;
  s.sim.seed = 77;
  s.sim.target_deliveries = deliveries;
  return s;
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 0.8028571428571429, 1e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.3), "0.3");
}

TEST(SweepGrid, DefaultLambda2Grid) {
  const std::vector<double> g = sweep_grid(default_spec(1));
  ASSERT_EQ(g.size(), 38u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i], 0.5 * static_cast<double>(i + 1));
  EXPECT_EQ(g.back(), 19.0);
}

TEST(SweepGrid, Validation) {
  SweepSpec s = default_spec(1);
  s.from = 5;
  s.to = 1;
  EXPECT_THROW(sweep_grid(s), Error);
  s.to = 5;
  EXPECT_THROW(sweep_grid(s), Error);
  s.points = 1;
  EXPECT_EQ(sweep_grid(s).size(), 1u);
  s.points = 0;
  EXPECT_THROW(sweep_grid(s), Error);
  s = default_spec(1);
  s.swept = SweptRate::kMu1;
  s.from = -1;
  s.to = 3;
  try {
    sweep_grid(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidRate);
  }
}

TEST(SweptRateNames, ParseAndPrint) {
  EXPECT_EQ(parse_swept_rate("l2"), SweptRate::kLambda2);
  EXPECT_EQ(parse_swept_rate("mu1"), SweptRate::kMu1);
  EXPECT_EQ(to_string(SweptRate::kMu2), "m2");
  EXPECT_THROW(parse_swept_rate("rho"), Error);
  EXPECT_EQ(with_rate(ModelParams{2, 5, 10, 5}, SweptRate::kLambda1, 3), (ModelParams{3, 5, 10, 5}));
}

TEST(SweepCsv, SchemaAndEmptySimColumns) {
  SweepSpec s = default_spec(1);
  s.simulate = false;
  s.to = 21;
  s.points = 42;
  std::ostringstream out;
  write_csv(out, run_sweep(s));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "swept_value,margin,pi0,e_n,peak_age_1,age_lb_1,age_u2,age_ref,sim_age_1,sim_peak_1,sim_age_2,"
            "sim_e_n,seed,deliveries,stable");
  std::size_t rows = 0, unstable = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line);
    ASSERT_EQ(cells.size(), kSweepColumns.size()) << line;
    for (std::size_t c = 8; c <= 13; ++c) EXPECT_TRUE(cells[c].empty()) << line;
    if (cells[14] == "false") {
      ++unstable;
      EXPECT_TRUE(cells[2].empty());
      EXPECT_TRUE(cells[5].empty());
      EXPECT_FALSE(cells[6].empty());
    } else {
      EXPECT_EQ(cells[14], "true");
      EXPECT_FALSE(cells[4].empty());
    }
    ++rows;
  }
  EXPECT_EQ(rows, 42u);
  EXPECT_EQ(unstable, 3u);  // 20, 20.5, 21
}

TEST(SweepCsv, ReferenceRowValues) {
  SweepSpec s = default_spec(1);
  s.simulate = false;
  const auto rows = run_sweep(s);
  const SweepRow& r = rows[9];
  EXPECT_EQ(r.swept_value, 5.0);
  EXPECT_DOUBLE_EQ(*r.pi0, 0.3);
  EXPECT_NEAR(*r.e_n, 1.0, 1e-14);
  EXPECT_NEAR(*r.peak_age_1, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(*r.age_u2, 0.4);
  EXPECT_FALSE(r.sim_age_1);
}

TEST(SweepCsv, ByteIdenticalAcrossThreadCounts) {
  SweepSpec one = default_spec(2'000);
  SweepSpec many = one;
  many.threads = 4;
  std::ostringstream a, b, c;
  write_csv(a, run_sweep(one));
  write_csv(b, run_sweep(many));
  write_csv(c, run_sweep(one));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
}

TEST(SweepRows, PerPointSeedsDiffer) {
  const auto rows = run_sweep(default_spec(500));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NE(*rows[i].seed, *rows[i - 1].seed);
  EXPECT_EQ(*rows[0].deliveries, 500u);
}

TEST(Analyze, ReportAndJson) {
  const AnalysisReport r = analyze({2, 5, 10, 5});
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(*r.pi0, 0.3);
  const nlohmann::json j = to_json(r);
  for (const char* key : {"margin", "pi0", "e_n", "peak_age_1", "age_lb_1", "age_u2", "age_ref", "mean_z", "rho",
                          "alpha1", "alpha2"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_NEAR(j["age_lb_1"].get<double>(), 0.80287, 1e-4);
  EXPECT_TRUE(j["stable"].get<bool>());
}

TEST(Analyze, UnstableStructuredReport) {
  const AnalysisReport r = analyze({2, 20, 10, 5});
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.pi0);
  EXPECT_TRUE(r.age_u2);
  const nlohmann::json j = to_json(r);
  EXPECT_FALSE(j["stable"].get<bool>());
  EXPECT_TRUE(j["pi0"].is_null());
  EXPECT_NE(j["error"].get<std::string>().find("UnstableSystem"), std::string::npos);
}

}  // namespace
}  // namespace aoi
