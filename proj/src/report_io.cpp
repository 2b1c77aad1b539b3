#include "mmsv/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mmsv {

namespace {

using nlohmann::ordered_json;

const Metric kAllMetrics[] = {Metric::truncation, Metric::discretization, Metric::truncation_deviation,
                              Metric::discretization_deviation};

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(*x) : ordered_json(nullptr);
}

ordered_json injection_json(const ResolvedInjection& inj) {
  if (!inj.active) return nullptr;
  return {{"row", inj.row + 1}, {"col", inj.col + 1}, {"delta", inj.delta}};
}

std::string order_cell(const ConvergenceReport& report, Metric m) {
  const auto it = report.orders.find(m);
  if (it == report.orders.end()) return "-";
  const auto pred = report.predicted.find(m);
  std::string observed = it->second.at_floor ? "floor" : fixed3(*it->second.headline);
  if (pred != report.predicted.end()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%g)", pred->second);
    observed += buf;
  }
  return observed;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::optional<PlotFormat> plot_format_from_name(std::string_view name) noexcept {
  if (name == "gnuplot") return PlotFormat::gnuplot;
  if (name == "csv") return PlotFormat::csv;
  return std::nullopt;
}

std::string report_json(const ConvergenceReport& report, int indent) {
  ordered_json j;
  j["case"] = report.case_id;
  j["problem"] = report.problem;
  j["injection"] = report.injection;
  j["margin"] = report.margin;
  j["rank_tolerance"] = report.rank_tolerance;

  ordered_json levels = ordered_json::array();
  for (const LevelResult& l : report.levels) {
    levels.push_back({{"level", l.level},
                      {"h", l.h},
                      {"n", l.n},
                      {"tau_inf", l.tau_inf},
                      {"eh_inf", l.eh_inf},
                      {"tau_dev_inf", optional_number(l.tau_dev_inf)},
                      {"eh_dev_inf", optional_number(l.eh_dev_inf)},
                      {"rank", l.rank},
                      {"residual", l.residual},
                      {"injection", injection_json(l.injection)}});
  }
  j["levels"] = levels;

  ordered_json orders = ordered_json::object();
  for (Metric m : kAllMetrics) {
    const auto it = report.orders.find(m);
    if (it == report.orders.end()) continue;
    const auto pred = report.predicted.find(m);
    orders[std::string(metric_name(m))] = {
        {"slopes", it->second.slopes},
        {"observed", optional_number(it->second.headline)},
        {"at_floor", it->second.at_floor},
        {"predicted", pred == report.predicted.end() ? ordered_json(nullptr) : ordered_json(pred->second)}};
  }
  j["orders"] = orders;

  ordered_json verdicts = ordered_json::array();
  for (const DetectionVerdict& v : report.verdicts) {
    verdicts.push_back({{"metric", metric_name(v.metric)},
                        {"observed", optional_number(v.observed_order)},
                        {"expected_clean", v.expected_order_clean},
                        {"margin", v.margin},
                        {"detected", v.detected}});
  }
  j["verdicts"] = verdicts;
  return j.dump(indent) + "\n";
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "h,n,tau_inf,eh_inf,tau_dev_inf,eh_dev_inf,rank\n";
  for (const LevelResult& l : report.levels) {
    os << number(l.h) << ',' << l.n << ',' << number(l.tau_inf) << ',' << number(l.eh_inf) << ','
       << (l.tau_dev_inf ? number(*l.tau_dev_inf) : "") << ','
       << (l.eh_dev_inf ? number(*l.eh_dev_inf) : "") << ',' << l.rank << '\n';
  }
}

void write_plot_data(std::ostream& os, const ConvergenceReport& report, PlotFormat format) {
  const char sep = format == PlotFormat::csv ? ',' : ' ';
  std::vector<Metric> shown;
  for (Metric m : kAllMetrics) {
    const auto it = report.orders.find(m);
    if (it == report.orders.end()) continue;
    if (it->second.at_floor) {
      os << "# note: " << metric_name(m) << " omitted, at the round-off floor\n";
      continue;
    }
    shown.push_back(m);
  }
  if (format == PlotFormat::gnuplot) os << "# ";
  os << "h";
  for (Metric m : shown) {
    const std::string name(metric_name(m));
    os << sep << name;
    for (int p = 0; p <= 2; ++p) os << sep << name << "_slope" << p;
  }
  os << '\n';
  if (report.levels.empty()) return;

  const double h0 = report.levels.front().h;
  std::vector<double> anchors;
  for (Metric m : shown) anchors.push_back(report.series(m).front());
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    const double h = report.levels[k].h;
    os << number(h);
    for (std::size_t s = 0; s < shown.size(); ++s) {
      os << sep << number(report.series(shown[s])[k]);
      for (int p = 0; p <= 2; ++p) os << sep << number(anchors[s] * std::pow(h / h0, p));
    }
    os << '\n';
  }
}

std::string file_stem(std::string_view case_id) {
  std::string out(case_id);
  for (char& c : out)
    if (c == '/') c = '_';
  return out.empty() ? std::string("custom") : out;
}

void write_case_outputs(const ConvergenceReport& report, const std::filesystem::path& dir,
                        PlotFormat format) {
  std::filesystem::create_directories(dir);
  const std::string stem = file_stem(report.case_id);
  const auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open(stem + ".csv");
    write_csv(f, report);
  }
  {
    auto f = open(stem + ".json");
    f << report_json(report);
  }
  {
    auto f = open(stem + (format == PlotFormat::csv ? ".plot.csv" : ".plot.dat"));
    write_plot_data(f, report, format);
  }
}

std::string summary_header() {
  return pad("case", 10) + pad("tau (pred)", 16) + pad("e^h (pred)", 16) + pad("tau dev (pred)", 16) +
         pad("e^h dev (pred)", 16) + pad("tau det", 9) + pad("e^h det", 9) + "match\n";
}

std::string summary_row(const ConvergenceReport& report, bool matches) {
  std::string detected[2] = {"-", "-"};
  for (const DetectionVerdict& v : report.verdicts) {
    const int k = v.metric == Metric::truncation ? 0 : 1;
    detected[k] = v.detected ? "yes" : "no";
  }
  return pad(report.case_id.empty() ? std::string("custom") : report.case_id, 10) +
         pad(order_cell(report, Metric::truncation), 16) + pad(order_cell(report, Metric::discretization), 16) +
         pad(order_cell(report, Metric::truncation_deviation), 16) +
         pad(order_cell(report, Metric::discretization_deviation), 16) + pad(detected[0], 9) +
         pad(detected[1], 9) + (matches ? "yes" : "NO") + "\n";
}

}  // namespace mmsv
