#include "mmsv/mmsv.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "mmsv/catalog.hpp"
#include "mmsv/report_io.hpp"

struct mmsv_options {
  mmsv::RunOverrides overrides;
};

struct mmsv_report {
  mmsv::ConvergenceReport report;
};

namespace {

thread_local std::string last_error;

mmsv_status fail(mmsv_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the exception in flight to a status code.
mmsv_status translate() {
  try {
    throw;
  } catch (const mmsv::LevelFailure& e) {
    return fail(MMSV_NUMERICAL, e.what());
  } catch (const mmsv::InconsistentSystemError& e) {
    return fail(MMSV_INCONSISTENT_SYSTEM, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MMSV_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(MMSV_INVALID_ARGUMENT, std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MMSV_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(MMSV_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MMSV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MMSV_INTERNAL, e.what());
  } catch (...) {
    return fail(MMSV_INTERNAL, "unknown error");
  }
}

template <class F>
mmsv_status guarded(F&& body) {
  try {
    return body();
  } catch (...) {
    return translate();
  }
}

mmsv_status copy_out(const std::string& text, char* buffer, std::size_t capacity, std::size_t* required) {
  if (required) *required = text.size() + 1;
  if (capacity == 0) return MMSV_OK;
  if (!buffer) return fail(MMSV_INVALID_ARGUMENT, "buffer is NULL");
  if (capacity < text.size() + 1) return fail(MMSV_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return MMSV_OK;
}

bool valid_metric(mmsv_metric m) {
  return m >= MMSV_METRIC_TRUNCATION && m <= MMSV_METRIC_DISCRETIZATION_DEVIATION;
}

mmsv::Metric to_metric(mmsv_metric m) { return static_cast<mmsv::Metric>(m); }

}  // namespace

extern "C" {

const char* mmsv_version(void) { return "0.1.0"; }

const char* mmsv_status_string(mmsv_status status) {
  switch (status) {
    case MMSV_OK: return "ok";
    case MMSV_INVALID_ARGUMENT: return "invalid argument";
    case MMSV_UNKNOWN_CASE: return "unknown case";
    case MMSV_INCONSISTENT_SYSTEM: return "inconsistent system";
    case MMSV_NUMERICAL: return "numerical failure";
    case MMSV_IO: return "i/o error";
    case MMSV_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mmsv_last_error(void) { return last_error.c_str(); }

size_t mmsv_catalog_size(void) { return mmsv::case_catalog().size(); }

const char* mmsv_catalog_id(size_t index) {
  const auto& c = mmsv::case_catalog();
  return index < c.size() ? c[index].id.c_str() : nullptr;
}

const char* mmsv_catalog_description(size_t index) {
  const auto& c = mmsv::case_catalog();
  return index < c.size() ? c[index].description.c_str() : nullptr;
}

mmsv_status mmsv_options_create(mmsv_options** out) {
  if (!out) return fail(MMSV_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new mmsv_options{};
    return MMSV_OK;
  });
}

void mmsv_options_destroy(mmsv_options* options) { delete options; }

mmsv_status mmsv_options_set_levels(mmsv_options* options, const size_t* levels, size_t count) {
  if (!options || (!levels && count > 0)) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    options->overrides.levels = std::vector<std::size_t>(levels, levels + count);
    return MMSV_OK;
  });
}

mmsv_status mmsv_options_set_delta0(mmsv_options* options, double delta0) {
  if (!options) return fail(MMSV_INVALID_ARGUMENT, "options is NULL");
  if (delta0 == 0.0 || !std::isfinite(delta0)) return fail(MMSV_INVALID_ARGUMENT, "delta0 must be finite and nonzero");
  options->overrides.delta0 = delta0;
  return MMSV_OK;
}

mmsv_status mmsv_options_set_rate(mmsv_options* options, double r) {
  if (!options) return fail(MMSV_INVALID_ARGUMENT, "options is NULL");
  if (!(r >= 0.0) || !std::isfinite(r)) return fail(MMSV_INVALID_ARGUMENT, "rate r must be finite and non-negative");
  options->overrides.rate = r;
  return MMSV_OK;
}

mmsv_status mmsv_options_set_rank_tolerance(mmsv_options* options, double tol) {
  if (!options) return fail(MMSV_INVALID_ARGUMENT, "options is NULL");
  if (!(tol > 0.0 && tol < 1.0)) return fail(MMSV_INVALID_ARGUMENT, "rank tolerance must lie in (0, 1)");
  options->overrides.rank_tolerance = tol;
  return MMSV_OK;
}

mmsv_status mmsv_options_set_margin(mmsv_options* options, double margin) {
  if (!options) return fail(MMSV_INVALID_ARGUMENT, "options is NULL");
  if (!(margin >= 0.0) || !std::isfinite(margin)) return fail(MMSV_INVALID_ARGUMENT, "margin must be non-negative");
  options->overrides.margin = margin;
  return MMSV_OK;
}

mmsv_status mmsv_options_set_quad_degree(mmsv_options* options, int degree) {
  if (!options) return fail(MMSV_INVALID_ARGUMENT, "options is NULL");
  if (degree < mmsv::kMinQuadDegree || degree > mmsv::kMaxQuadDegree)
    return fail(MMSV_INVALID_ARGUMENT, "quadrature degree must lie in [5, 12]");
  options->overrides.quad_degree = degree;
  return MMSV_OK;
}

mmsv_status mmsv_options_set_injection(mmsv_options* options, const char* text) {
  if (!options || !text) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    mmsv::parse_injection(text, 1.0, 0.0);  // syntax check only
    options->overrides.injection = std::string(text);
    return MMSV_OK;
  });
}

mmsv_status mmsv_options_load_config(mmsv_options* options, const char* path) {
  if (!options || !path) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  return guarded([&]() -> mmsv_status {
    std::ifstream in(path);
    if (!in) return fail(MMSV_IO, std::string("cannot read config ") + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) return fail(MMSV_INVALID_ARGUMENT, "config: expected a JSON object");
    static const char* known[] = {"levels", "delta0", "rate_r", "rank_tol", "margin", "quad_degree", "inject"};
    for (const auto& [key, value] : j.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) return fail(MMSV_INVALID_ARGUMENT, "config: unknown key '" + key + "'");
    }
    mmsv_status s = MMSV_OK;
    if (j.contains("levels")) {
      const auto levels = j.at("levels").get<std::vector<std::size_t>>();
      s = mmsv_options_set_levels(options, levels.data(), levels.size());
    }
    if (s == MMSV_OK && j.contains("delta0")) s = mmsv_options_set_delta0(options, j.at("delta0").get<double>());
    if (s == MMSV_OK && j.contains("rate_r")) s = mmsv_options_set_rate(options, j.at("rate_r").get<double>());
    if (s == MMSV_OK && j.contains("rank_tol"))
      s = mmsv_options_set_rank_tolerance(options, j.at("rank_tol").get<double>());
    if (s == MMSV_OK && j.contains("margin")) s = mmsv_options_set_margin(options, j.at("margin").get<double>());
    if (s == MMSV_OK && j.contains("quad_degree"))
      s = mmsv_options_set_quad_degree(options, j.at("quad_degree").get<int>());
    if (s == MMSV_OK && j.contains("inject"))
      s = mmsv_options_set_injection(options, j.at("inject").get<std::string>().c_str());
    return s;
  });
}

mmsv_status mmsv_run_case(const char* case_id, const mmsv_options* options, mmsv_report** out) {
  if (!case_id || !out) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  *out = nullptr;
  const mmsv::CaseCatalogEntry* entry = mmsv::find_case(case_id);
  if (!entry) return fail(MMSV_UNKNOWN_CASE, std::string("unknown case id '") + case_id + "'");
  return guarded([&] {
    const mmsv::RunOverrides overrides = options ? options->overrides : mmsv::RunOverrides{};
    auto report = std::make_unique<mmsv_report>();
    report->report = mmsv::run_case(*entry, overrides);
    *out = report.release();
    return MMSV_OK;
  });
}

void mmsv_report_destroy(mmsv_report* report) { delete report; }

size_t mmsv_report_level_count(const mmsv_report* report) { return report ? report->report.levels.size() : 0; }

mmsv_status mmsv_report_level(const mmsv_report* report, size_t index, mmsv_level* out) {
  if (!report || !out) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  if (index >= report->report.levels.size()) return fail(MMSV_INVALID_ARGUMENT, "level index out of range");
  const mmsv::LevelResult& l = report->report.levels[index];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  *out = mmsv_level{l.level, l.h, l.n, l.tau_inf, l.eh_inf, l.tau_dev_inf.value_or(nan),
                    l.eh_dev_inf.value_or(nan), l.rank, l.residual};
  return MMSV_OK;
}

mmsv_status mmsv_report_order(const mmsv_report* report, mmsv_metric metric, double* order, int* at_floor) {
  if (!report || !order || !valid_metric(metric)) return fail(MMSV_INVALID_ARGUMENT, "invalid argument");
  const auto it = report->report.orders.find(to_metric(metric));
  if (it == report->report.orders.end()) return fail(MMSV_INVALID_ARGUMENT, "metric not reported for this case");
  *order = it->second.headline.value_or(std::numeric_limits<double>::quiet_NaN());
  if (at_floor) *at_floor = it->second.at_floor ? 1 : 0;
  return MMSV_OK;
}

mmsv_status mmsv_report_predicted(const mmsv_report* report, mmsv_metric metric, double* order) {
  if (!report || !order || !valid_metric(metric)) return fail(MMSV_INVALID_ARGUMENT, "invalid argument");
  const auto it = report->report.predicted.find(to_metric(metric));
  if (it == report->report.predicted.end()) return fail(MMSV_INVALID_ARGUMENT, "metric not reported for this case");
  *order = it->second;
  return MMSV_OK;
}

mmsv_status mmsv_report_detected(const mmsv_report* report, mmsv_metric metric, int* detected) {
  if (!report || !detected || !valid_metric(metric)) return fail(MMSV_INVALID_ARGUMENT, "invalid argument");
  for (const auto& v : report->report.verdicts) {
    if (v.metric == to_metric(metric)) {
      *detected = v.detected ? 1 : 0;
      return MMSV_OK;
    }
  }
  return fail(MMSV_INVALID_ARGUMENT, "no verdict for this metric");
}

int mmsv_report_matches_prediction(const mmsv_report* report) {
  return report && mmsv::matches_prediction(report->report) ? 1 : 0;
}

mmsv_status mmsv_report_write(const mmsv_report* report, const char* out_dir, mmsv_plot_format format) {
  if (!report || !out_dir) return fail(MMSV_INVALID_ARGUMENT, "NULL argument");
  if (format != MMSV_PLOT_GNUPLOT && format != MMSV_PLOT_CSV) return fail(MMSV_INVALID_ARGUMENT, "unknown plot format");
  return guarded([&] {
    try {
      mmsv::write_case_outputs(report->report, out_dir,
                               format == MMSV_PLOT_CSV ? mmsv::PlotFormat::csv : mmsv::PlotFormat::gnuplot);
    } catch (const std::runtime_error& e) {
      return fail(MMSV_IO, e.what());
    }
    return MMSV_OK;
  });
}

mmsv_status mmsv_report_json(const mmsv_report* report, char* buffer, size_t capacity, size_t* required) {
  if (!report) return fail(MMSV_INVALID_ARGUMENT, "report is NULL");
  return guarded([&] { return copy_out(mmsv::report_json(report->report), buffer, capacity, required); });
}

mmsv_status mmsv_report_summary(const mmsv_report* report, int with_header, char* buffer, size_t capacity,
                                size_t* required) {
  if (!report) return fail(MMSV_INVALID_ARGUMENT, "report is NULL");
  return guarded([&] {
    std::string text = with_header ? mmsv::summary_header() : std::string();
    text += mmsv::summary_row(report->report, mmsv::matches_prediction(report->report));
    return copy_out(text, buffer, capacity, required);
  });
}

mmsv_status mmsv_minimal_change_solve(size_t n, const double* a, const double* b, const double* u_nominal,
                                      double tol, double* u_h, size_t* rank, double* residual) {
  if (n == 0 || !a || !b || !u_nominal || !u_h) return fail(MMSV_INVALID_ARGUMENT, "NULL argument or n = 0");
  return guarded([&] {
    mmsv::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
    const auto sol = mmsv::minimal_change_solve(m, std::span<const double>(b, n),
                                                std::span<const double>(u_nominal, n), tol);
    std::copy(sol.u_h.begin(), sol.u_h.end(), u_h);
    if (rank) *rank = sol.rank_used;
    if (residual) *residual = sol.residual_norm;
    return MMSV_OK;
  });
}

mmsv_status mmsv_export_mesh(int m, const char* path) {
  if (!path) return fail(MMSV_INVALID_ARGUMENT, "path is NULL");
  return guarded([&] {
    const mmsv::TriangleMesh mesh = mmsv::build_mesh(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return fail(MMSV_IO, std::string("cannot write ") + path);
    mmsv::write_mesh(out, mesh);
    return out ? MMSV_OK : fail(MMSV_IO, std::string("write failed: ") + path);
  });
}

}  // extern "C"
