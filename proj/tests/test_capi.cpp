#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "mmsv/mmsv.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / ("mmsv_capi_" + std::to_string(::getpid()) + "_" + name);
}

struct Options {
  mmsv_options* p = nullptr;
  Options() { EXPECT_EQ(mmsv_options_create(&p), MMSV_OK); }
  ~Options() { mmsv_options_destroy(p); }
};

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(mmsv_version(), "0.1.0");
  EXPECT_STREQ(mmsv_status_string(MMSV_OK), "ok");
  EXPECT_STRNE(mmsv_status_string(MMSV_UNKNOWN_CASE), "ok");
}

TEST(CApi, Catalog) {
  ASSERT_EQ(mmsv_catalog_size(), 20u);
  EXPECT_STREQ(mmsv_catalog_id(0), "1d/1a");
  EXPECT_NE(mmsv_catalog_description(0), nullptr);
  EXPECT_EQ(mmsv_catalog_id(20), nullptr);
}

TEST(CApi, RunCleanOneDimensionalCase) {
  Options o;
  const size_t levels[] = {16, 32, 64};
  ASSERT_EQ(mmsv_options_set_levels(o.p, levels, 3), MMSV_OK);
  mmsv_report* r = nullptr;
  ASSERT_EQ(mmsv_run_case("1d/1a", o.p, &r), MMSV_OK) << mmsv_last_error();
  ASSERT_EQ(mmsv_report_level_count(r), 3u);
  mmsv_level l{};
  ASSERT_EQ(mmsv_report_level(r, 0, &l), MMSV_OK);
  EXPECT_EQ(l.level, 16u);
  EXPECT_EQ(l.n, 15u);
  EXPECT_EQ(l.rank, 1u);
  EXPECT_FALSE(std::isnan(l.tau_dev_inf));
  EXPECT_EQ(mmsv_report_level(r, 3, &l), MMSV_INVALID_ARGUMENT);

  double order = 0.0, pred = 0.0;
  int floor = -1, detected = -1;
  ASSERT_EQ(mmsv_report_order(r, MMSV_METRIC_TRUNCATION, &order, &floor), MMSV_OK);
  EXPECT_NEAR(order, 2.0, 0.05);
  EXPECT_EQ(floor, 0);
  ASSERT_EQ(mmsv_report_predicted(r, MMSV_METRIC_TRUNCATION, &pred), MMSV_OK);
  EXPECT_EQ(pred, 2.0);
  ASSERT_EQ(mmsv_report_detected(r, MMSV_METRIC_DISCRETIZATION, &detected), MMSV_OK);
  EXPECT_EQ(detected, 0);
  EXPECT_EQ(mmsv_report_detected(r, MMSV_METRIC_TRUNCATION_DEVIATION, &detected), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_report_matches_prediction(r), 1);
  mmsv_report_destroy(r);
}

TEST(CApi, UnknownCaseAndBadLevels) {
  mmsv_report* r = nullptr;
  EXPECT_EQ(mmsv_run_case("1d/9z", nullptr, &r), MMSV_UNKNOWN_CASE);
  EXPECT_EQ(r, nullptr);
  EXPECT_NE(std::string(mmsv_last_error()).find("1d/9z"), std::string::npos);

  Options o;
  const size_t two[] = {16, 32};
  EXPECT_EQ(mmsv_options_set_levels(o.p, two, 2), MMSV_OK);
  EXPECT_EQ(mmsv_run_case("1d/1a", o.p, &r), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_options_set_injection(o.p, "fixed:0,1"), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_options_set_margin(o.p, -1.0), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_options_set_quad_degree(o.p, 3), MMSV_INVALID_ARGUMENT);
}

TEST(CApi, LevelFailureIsNumericalAndNamesTheLevel) {
  Options o;
  const size_t levels[] = {16, 32, 64};
  mmsv_options_set_levels(o.p, levels, 3);
  ASSERT_EQ(mmsv_options_set_injection(o.p, "fixed:40,40"), MMSV_OK);
  mmsv_report* r = nullptr;
  EXPECT_EQ(mmsv_run_case("1d/1b", o.p, &r), MMSV_NUMERICAL);
  EXPECT_NE(std::string(mmsv_last_error()).find("level N = 16"), std::string::npos) << mmsv_last_error();
}

TEST(CApi, JsonBufferProtocol) {
  Options o;
  const size_t levels[] = {16, 32, 64};
  mmsv_options_set_levels(o.p, levels, 3);
  mmsv_report* r = nullptr;
  ASSERT_EQ(mmsv_run_case("1d/2b", o.p, &r), MMSV_OK);
  size_t need = 0;
  ASSERT_EQ(mmsv_report_json(r, nullptr, 0, &need), MMSV_OK);
  ASSERT_GT(need, 1u);
  std::vector<char> small(need - 1);
  EXPECT_EQ(mmsv_report_json(r, small.data(), small.size(), &need), MMSV_INVALID_ARGUMENT);
  std::vector<char> buf(need);
  ASSERT_EQ(mmsv_report_json(r, buf.data(), buf.size(), nullptr), MMSV_OK);
  EXPECT_EQ(std::string(buf.data()).size() + 1, need);
  EXPECT_NE(std::string(buf.data()).find("\"case\": \"1d/2b\""), std::string::npos);

  ASSERT_EQ(mmsv_report_summary(r, 1, nullptr, 0, &need), MMSV_OK);
  std::vector<char> row(need);
  ASSERT_EQ(mmsv_report_summary(r, 1, row.data(), row.size(), nullptr), MMSV_OK);
  EXPECT_NE(std::string(row.data()).find("1d/2b"), std::string::npos);

  const fs::path dir = scratch("out");
  ASSERT_EQ(mmsv_report_write(r, dir.c_str(), MMSV_PLOT_CSV), MMSV_OK);
  EXPECT_TRUE(fs::exists(dir / "1d_2b.plot.csv"));
  EXPECT_TRUE(fs::exists(dir / "1d_2b.json"));
  fs::remove_all(dir);
  mmsv_report_destroy(r);
}

TEST(CApi, MinimalChangeSolveTwoByTwo) {
  // Rank-one system [1 1; 1 1] u = (2, 2) from u^n = (0, 0): u^h = (1, 1).
  const double a[] = {1.0, 1.0, 1.0, 1.0};
  const double b[] = {2.0, 2.0};
  const double un[] = {0.0, 0.0};
  double uh[2];
  size_t rank = 0;
  double residual = -1.0;
  ASSERT_EQ(mmsv_minimal_change_solve(2, a, b, un, 1e-10, uh, &rank, &residual), MMSV_OK);
  EXPECT_EQ(rank, 1u);
  EXPECT_NEAR(uh[0], 1.0, 1e-14);
  EXPECT_NEAR(uh[1], 1.0, 1e-14);
  EXPECT_LT(residual, 1e-14);

  // Only the row-space component moves: u^n = (3, 0) gives (2.5, -0.5).
  const double un2[] = {3.0, 0.0};
  ASSERT_EQ(mmsv_minimal_change_solve(2, a, b, un2, 1e-10, uh, &rank, nullptr), MMSV_OK);
  EXPECT_NEAR(uh[0], 2.5, 1e-14);
  EXPECT_NEAR(uh[1], -0.5, 1e-14);

  const double bad[] = {2.0, 3.0};
  EXPECT_EQ(mmsv_minimal_change_solve(2, a, bad, un, 1e-10, uh, &rank, nullptr), MMSV_INCONSISTENT_SYSTEM);
}

TEST(CApi, ExportMesh) {
  const fs::path p = scratch("mesh.txt");
  ASSERT_EQ(mmsv_export_mesh(2, p.c_str()), MMSV_OK);
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  EXPECT_FALSE(first.empty());
  fs::remove(p);
  EXPECT_EQ(mmsv_export_mesh(1, p.c_str()), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_export_mesh(2, "/nonexistent-dir/x/mesh.txt"), MMSV_IO);
}

TEST(CApi, ConfigFile) {
  const fs::path p = scratch("config.json");
  {
    std::ofstream out(p);
    out << R"({"levels": [16, 32, 64], "delta0": 0.2, "margin": 0.5, "inject": "fixed:1,2"})";
  }
  Options o;
  ASSERT_EQ(mmsv_options_load_config(o.p, p.c_str()), MMSV_OK) << mmsv_last_error();
  mmsv_report* r = nullptr;
  ASSERT_EQ(mmsv_run_case("1d/1a", o.p, &r), MMSV_OK);
  EXPECT_EQ(mmsv_report_level_count(r), 3u);
  size_t need = 0;
  mmsv_report_json(r, nullptr, 0, &need);
  std::vector<char> buf(need);
  mmsv_report_json(r, buf.data(), buf.size(), nullptr);
  EXPECT_NE(std::string(buf.data()).find("fixed:1,2"), std::string::npos);
  mmsv_report_destroy(r);

  {
    std::ofstream out(p);
    out << R"({"levels": [16, 32, 64], "colour": "red"})";
  }
  EXPECT_EQ(mmsv_options_load_config(o.p, p.c_str()), MMSV_INVALID_ARGUMENT);
  EXPECT_EQ(mmsv_options_load_config(o.p, "/nonexistent.json"), MMSV_IO);
  fs::remove(p);
}
