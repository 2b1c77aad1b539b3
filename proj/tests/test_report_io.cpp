#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "mmsv/catalog.hpp"
#include "mmsv/report_io.hpp"

using namespace mmsv;
namespace fs = std::filesystem;

namespace {

// tau ~ h^2, e^h pinned at round-off.
ConvergenceReport fixture() {
  ConvergenceReport r;
  r.case_id = "1d/x";
  r.problem = "1d";
  r.injection = "none";
  for (double h : {0.5, 0.25, 0.125}) {
    LevelResult l;
    l.level = static_cast<std::size_t>(std::lround(1.0 / h));
    l.h = h;
    l.n = l.level - 1;
    l.tau_inf = 3.0 * h * h;
    l.eh_inf = h == 0.5 ? 1.0 : 1e-17;
    l.rank = 1;
    r.levels.push_back(l);
  }
  r.orders[Metric::truncation] = observed_order(r.series(Metric::truncation), r.mesh_sizes());
  r.orders[Metric::discretization] = observed_order(r.series(Metric::discretization), r.mesh_sizes());
  r.predicted[Metric::truncation] = 2.0;
  r.predicted[Metric::discretization] = 2.0;
  r.verdicts = {make_verdict(Metric::truncation, r.orders[Metric::truncation]),
                make_verdict(Metric::discretization, r.orders[Metric::discretization])};
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<double> fields(const std::string& line, char sep) {
  std::vector<double> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, sep);)
    if (!f.empty()) out.push_back(std::stod(f));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Csv, HeaderAndEmptyDeviationFields) {
  std::ostringstream os;
  write_csv(os, fixture());
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "h,n,tau_inf,eh_inf,tau_dev_inf,eh_dev_inf,rank");
  EXPECT_NE(l[1].find(",,"), std::string::npos) << l[1];
  EXPECT_EQ(l[1].substr(0, 4), "0.5,");
}

TEST(Csv, NumbersRoundTrip) {
  std::ostringstream os;
  ConvergenceReport r = fixture();
  r.levels[2].tau_inf = 0.1 + 0.2;
  write_csv(os, r);
  const auto row = lines(os.str())[3];
  EXPECT_EQ(fields(row, ',')[2], 0.1 + 0.2);
}

TEST(PlotData, GuidesAnchoredAtTheCoarsestLevel) {
  std::ostringstream os;
  write_plot_data(os, fixture(), PlotFormat::csv);
  const auto l = lines(os.str());
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "# note: discretization omitted, at the round-off floor");
  EXPECT_EQ(l[1], "h,truncation,truncation_slope0,truncation_slope1,truncation_slope2");
  const double eps0 = 3.0 * 0.25;
  for (int k = 0; k < 3; ++k) {
    const auto v = fields(l[2 + k], ',');
    ASSERT_EQ(v.size(), 5u);
    const double h = v[0];
    EXPECT_DOUBLE_EQ(v[1], 3.0 * h * h);
    EXPECT_DOUBLE_EQ(v[2], eps0);
    EXPECT_DOUBLE_EQ(v[3], eps0 * h / 0.5);
    EXPECT_DOUBLE_EQ(v[4], eps0 * (h / 0.5) * (h / 0.5));
  }
}

TEST(PlotData, GnuplotHeaderIsAComment) {
  std::ostringstream os;
  write_plot_data(os, fixture(), PlotFormat::gnuplot);
  const auto l = lines(os.str());
  EXPECT_EQ(l[1].substr(0, 4), "# h ");
  EXPECT_EQ(fields(l[2], ' ').size(), 5u);
  EXPECT_EQ(plot_format_from_name("csv"), PlotFormat::csv);
  EXPECT_FALSE(plot_format_from_name("png"));
}

TEST(Json, CarriesOrdersAndVerdicts) {
  const nlohmann::json j = nlohmann::json::parse(report_json(fixture()));
  EXPECT_EQ(j["case"], "1d/x");
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_NEAR(j["orders"]["truncation"]["observed"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(j["orders"]["discretization"]["at_floor"].get<bool>());
  EXPECT_TRUE(j["orders"]["discretization"]["observed"].is_null());
  EXPECT_EQ(j["verdicts"].size(), 2u);
}

TEST(Summary, RowShowsObservedAndPredicted) {
  const std::string row = summary_row(fixture(), true);
  EXPECT_NE(row.find("1d/x"), std::string::npos);
  EXPECT_NE(row.find("2.000 (2)"), std::string::npos) << row;
  EXPECT_NE(row.find("floor"), std::string::npos) << row;
  EXPECT_NE(summary_header().find("match"), std::string::npos);
}

TEST(Outputs, RerunIsByteIdentical) {
  const fs::path base = fs::temp_directory_path() / ("mmsv_io_" + std::to_string(::getpid()));
  const CaseCatalogEntry& e = *find_case("1d/1c");
  RunOverrides o;
  o.levels = std::vector<std::size_t>{16, 32, 64, 128};
  for (const char* run : {"a", "b"}) write_case_outputs(run_case(e, o), base / run, PlotFormat::gnuplot);
  for (const char* name : {"1d_1c.csv", "1d_1c.json", "1d_1c.plot.dat"}) {
    ASSERT_TRUE(fs::exists(base / "a" / name)) << name;
    EXPECT_EQ(slurp(base / "a" / name), slurp(base / "b" / name)) << name;
  }
  fs::remove_all(base);
}
