// Command-line front end: runs catalog cases and writes reports, plot data and
// a summary table. Exit 0 when every case matches its predicted orders, 1 on a
// mismatch or numerical failure, 2 on usage errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmsv/mmsv.h"

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct RunArgs {
  std::vector<std::string> ids;
  std::vector<std::string> cases;
  bool all_1d = false;
  bool all_efie = false;
  std::vector<std::size_t> levels;
  double delta0 = 0.0;
  double rate = 0.0;
  double rank_tol = 0.0;
  double margin = 0.0;
  int quad_degree = 0;
  std::string inject;
  std::string config;
  std::string out = "mmsv-out";
  std::string format = "gnuplot";
};

struct Options {
  mmsv_options* ptr = nullptr;
  ~Options() { mmsv_options_destroy(ptr); }
};

struct Report {
  mmsv_report* ptr = nullptr;
  ~Report() { mmsv_report_destroy(ptr); }
};

int usage_error(const std::string& message) {
  std::cerr << "mmsv: " << message << "\n";
  return kExitUsage;
}

bool check(mmsv_status s, std::string& error) {
  if (s == MMSV_OK) return true;
  error = mmsv_last_error();
  return false;
}

std::string summary_line(const mmsv_report* report, bool header) {
  std::size_t required = 0;
  mmsv_report_summary(report, header ? 1 : 0, nullptr, 0, &required);
  std::string text(required, '\0');
  mmsv_report_summary(report, header ? 1 : 0, text.data(), text.size(), &required);
  text.resize(required - 1);
  return text;
}

int run(const RunArgs& args, const CLI::App& cmd) {
  std::vector<std::string> ids = args.ids;
  ids.insert(ids.end(), args.cases.begin(), args.cases.end());
  for (std::size_t k = 0; k < mmsv_catalog_size(); ++k) {
    const std::string id = mmsv_catalog_id(k);
    if ((args.all_1d && id.starts_with("1d/")) || (args.all_efie && id.starts_with("efie/"))) ids.push_back(id);
  }
  if (ids.empty()) return usage_error("no cases selected (give ids, --cases, --all-1d or --all-efie)");

  std::set<std::string> known;
  for (std::size_t k = 0; k < mmsv_catalog_size(); ++k) known.insert(mmsv_catalog_id(k));
  for (const std::string& id : ids)
    if (!known.count(id)) return usage_error("unknown case id '" + id + "' (see 'mmsv list')");

  if (cmd.count("--levels")) {
    const std::set<std::size_t> distinct(args.levels.begin(), args.levels.end());
    if (distinct.size() < 3) return usage_error("--levels needs at least three distinct refinement levels");
  }
  const bool csv_plot = args.format == "csv";

  Options options;
  std::string error;
  if (!check(mmsv_options_create(&options.ptr), error)) return usage_error(error);
  // Config file first so that explicit flags win.
  if (!args.config.empty() && !check(mmsv_options_load_config(options.ptr, args.config.c_str()), error))
    return usage_error(error);
  bool ok = true;
  if (cmd.count("--levels")) ok = ok && check(mmsv_options_set_levels(options.ptr, args.levels.data(), args.levels.size()), error);
  if (cmd.count("--delta0")) ok = ok && check(mmsv_options_set_delta0(options.ptr, args.delta0), error);
  if (cmd.count("--rate-r")) ok = ok && check(mmsv_options_set_rate(options.ptr, args.rate), error);
  if (cmd.count("--rank-tol")) ok = ok && check(mmsv_options_set_rank_tolerance(options.ptr, args.rank_tol), error);
  if (cmd.count("--margin")) ok = ok && check(mmsv_options_set_margin(options.ptr, args.margin), error);
  if (cmd.count("--quad-degree")) ok = ok && check(mmsv_options_set_quad_degree(options.ptr, args.quad_degree), error);
  if (cmd.count("--inject")) ok = ok && check(mmsv_options_set_injection(options.ptr, args.inject.c_str()), error);
  if (!ok) return usage_error(error);

  std::string summary;
  bool header = true;
  int status = 0;
  for (const std::string& id : ids) {
    Report report;
    const mmsv_status s = mmsv_run_case(id.c_str(), options.ptr, &report.ptr);
    if (s == MMSV_INVALID_ARGUMENT || s == MMSV_UNKNOWN_CASE) return usage_error(id + ": " + mmsv_last_error());
    if (s != MMSV_OK) {
      std::cerr << "mmsv: " << id << ": " << mmsv_status_string(s) << ": " << mmsv_last_error() << "\n";
      status = kExitMismatch;
      continue;
    }
    if (mmsv_report_write(report.ptr, args.out.c_str(), csv_plot ? MMSV_PLOT_CSV : MMSV_PLOT_GNUPLOT) != MMSV_OK) {
      std::cerr << "mmsv: " << mmsv_last_error() << "\n";
      return kExitMismatch;
    }
    const std::string line = summary_line(report.ptr, header);
    header = false;
    std::cout << line << std::flush;
    summary += line;
    if (!mmsv_report_matches_prediction(report.ptr)) status = kExitMismatch;
  }

  std::ofstream f(std::filesystem::path(args.out) / "summary.txt", std::ios::binary | std::ios::trunc);
  f << summary;
  if (!f) {
    std::cerr << "mmsv: cannot write summary.txt in " << args.out << "\n";
    return kExitMismatch;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-verification studies with manufactured solutions and injected coding errors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mmsv_version()));

  RunArgs args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run catalog cases and compare observed with predicted orders");
  run_cmd->add_option("ids", args.ids, "Case ids, e.g. 1d/1b efie/3c");
  run_cmd->add_option("--cases", args.cases, "Comma-separated case ids")->delimiter(',');
  run_cmd->add_flag("--all-1d", args.all_1d, "All 1D cases");
  run_cmd->add_flag("--all-efie", args.all_efie, "All EFIE cases");
  run_cmd->add_option("--levels", args.levels, "Refinement levels: N for 1D, m for EFIE")->delimiter(',');
  run_cmd->add_option("--delta0", args.delta0, "Injected error magnitude delta0");
  run_cmd->add_option("--rate-r", args.rate, "delta = delta0 h^r")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--rank-tol", args.rank_tol, "Relative rank tolerance of the pivoted QR");
  run_cmd->add_option("--margin", args.margin, "Detection and matching margin")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--quad-degree", args.quad_degree, "EFIE triangle quadrature degree");
  run_cmd->add_option("--inject", args.inject, "none | fixed:i,j | spatial-col:i | spatial:both");
  run_cmd->add_option("--config", args.config, "JSON configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--format", args.format, "Plot data format")
      ->check(CLI::IsMember({"gnuplot", "csv"}))
      ->capture_default_str();

  app.add_subcommand("list", "List catalog cases");

  int mesh_m = 4;
  std::string mesh_out;
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Write the structured EFIE mesh");
  mesh_cmd->add_option("m", mesh_m, "Refinement m (2m x m squares)")->required();
  mesh_cmd->add_option("--out", mesh_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.got_subcommand(run_cmd)) return run(args, *run_cmd);
  if (app.got_subcommand("list")) {
    for (std::size_t k = 0; k < mmsv_catalog_size(); ++k)
      std::printf("%-9s %s\n", mmsv_catalog_id(k), mmsv_catalog_description(k));
    return 0;
  }
  if (mmsv_export_mesh(mesh_m, mesh_out.c_str()) != MMSV_OK) return usage_error(mmsv_last_error());
  return 0;
}
