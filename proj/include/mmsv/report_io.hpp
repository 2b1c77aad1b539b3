#pragma once

// Serialization of convergence reports: JSON, per-level CSV, plot data and
// the summary table.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "mmsv/verify.hpp"

namespace mmsv {

enum class PlotFormat { gnuplot, csv };

std::optional<PlotFormat> plot_format_from_name(std::string_view name) noexcept;

std::string report_json(const ConvergenceReport& report, int indent = 2);

/// Columns h,n,tau_inf,eh_inf,tau_dev_inf,eh_dev_inf,rank; missing values are
/// left empty.
void write_csv(std::ostream& os, const ConvergenceReport& report);

/// (h, eps) per metric followed by guide lines eps_0 (h / h_0)^p, p = 0, 1, 2,
/// anchored at the coarsest level. Metrics at the round-off floor are
/// omitted and named on a "# note" line.
void write_plot_data(std::ostream& os, const ConvergenceReport& report, PlotFormat format);

/// "1d/1b" -> "1d_1b"
std::string file_stem(std::string_view case_id);

/// Writes <stem>.csv, <stem>.json and <stem>.plot.dat / <stem>.plot.csv into dir.
void write_case_outputs(const ConvergenceReport& report, const std::filesystem::path& dir,
                        PlotFormat format);

std::string summary_header();
/// One line per case: observed and predicted orders and the match flag.
std::string summary_row(const ConvergenceReport& report, bool matches);

}  // namespace mmsv
