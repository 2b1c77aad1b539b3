#include "mmsv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmsv {

namespace {

constexpr std::size_t kMinLevels = 3;

Vector difference(std::span<const double> x, std::span<const double> y) {
  Vector d(x.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - y[k];
  return d;
}

}  // namespace

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::truncation: return "truncation";
    case Metric::discretization: return "discretization";
    case Metric::truncation_deviation: return "truncation_deviation";
    case Metric::discretization_deviation: return "discretization_deviation";
  }
  return "unknown";
}

std::optional<Metric> metric_from_name(std::string_view name) noexcept {
  for (Metric m : {Metric::truncation, Metric::discretization, Metric::truncation_deviation,
                   Metric::discretization_deviation})
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

Vector truncation_error(const DenseMatrix& a, std::span<const double> b, std::span<const double> u_n) {
  if (b.size() != a.rows()) throw std::invalid_argument("truncation_error: size mismatch");
  return difference(multiply(a, u_n), b);
}

Vector discretization_error(const DenseMatrix& a, std::span<const double> b,
                            std::span<const double> u_n, double rank_tolerance) {
  const MinimalChangeSolution sol = minimal_change_solve(a, b, u_n, rank_tolerance);
  return difference(sol.u_h, u_n);
}

OrderEstimate observed_order(std::span<const double> eps, std::span<const double> h) {
  if (eps.size() != h.size() || eps.size() < 2)
    throw std::invalid_argument("observed_order: need at least two matching (eps, h) pairs");
  OrderEstimate out;
  const double largest = *std::max_element(eps.begin(), eps.end());
  for (double e : eps) {
    if (!(e >= kRoundoffFloor * largest) || e <= 0.0) {
      out.at_floor = true;
      return out;
    }
  }
  for (std::size_t k = 0; k + 1 < eps.size(); ++k)
    out.slopes.push_back(std::log(eps[k] / eps[k + 1]) / std::log(h[k] / h[k + 1]));
  out.headline = out.slopes.back();
  return out;
}

DetectionVerdict make_verdict(Metric metric, const OrderEstimate& order, double margin) {
  DetectionVerdict v;
  v.metric = metric;
  v.margin = margin;
  v.observed_order = order.headline;
  v.detected = order.headline.has_value() && *order.headline < v.expected_order_clean - margin;
  return v;
}

LocatorClass locator_class(const InjectionSpec& spec) noexcept {
  if (spec.none) return LocatorClass::none;
  return spec.col.kind == LocatorKind::fixed_index ? LocatorClass::fixed_index : LocatorClass::spatial;
}

double predicted_order(int q, double r, LocatorClass locator, Metric metric, int entry_order) {
  if (locator == LocatorClass::none) return 2.0;
  switch (metric) {
    case Metric::truncation:
      return locator == LocatorClass::fixed_index ? std::min(q + r + entry_order, 2.0)
                                                  : std::min(r + entry_order, 2.0);
    case Metric::discretization:
      return locator == LocatorClass::fixed_index ? std::min(static_cast<double>(q), 2.0) : 0.0;
    case Metric::truncation_deviation:
    case Metric::discretization_deviation:
      return 2.0;
  }
  return 2.0;
}

std::vector<double> ConvergenceReport::series(Metric m) const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const LevelResult& l : levels) {
    switch (m) {
      case Metric::truncation: out.push_back(l.tau_inf); break;
      case Metric::discretization: out.push_back(l.eh_inf); break;
      case Metric::truncation_deviation: out.push_back(l.tau_dev_inf.value_or(0.0)); break;
      case Metric::discretization_deviation: out.push_back(l.eh_dev_inf.value_or(0.0)); break;
    }
  }
  return out;
}

std::vector<double> ConvergenceReport::mesh_sizes() const {
  std::vector<double> out;
  for (const LevelResult& l : levels) out.push_back(l.h);
  return out;
}

LevelFailure::LevelFailure(std::size_t level, const std::string& what)
    : std::runtime_error(what), level_(level) {}

LevelResult run_level_1d(const Manufactured1d& mf, std::size_t elements, const InjectionSpec& spec,
                         double rank_tolerance) {
  const System1d trunc_sys = assemble_1d(mf, elements, Scaling1d::by_h);
  const System1d solve_sys = assemble_1d(mf, elements, Scaling1d::by_h_squared);
  const Vector u_n = nominal_coefficients_1d(mf, elements);
  const ResolvedInjection inj = resolve(spec, elements, mf.a, mf.b);

  const Vector tau = truncation_error(apply(trunc_sys.a, inj), trunc_sys.b, u_n);
  const MinimalChangeSolution sol =
      minimal_change_solve(apply(solve_sys.a, inj), solve_sys.b, u_n, rank_tolerance);
  const Vector eh = difference(sol.u_h, u_n);

  const Vector tau_pred = inj.active ? tau_tilde_prediction(u_n, inj.row, inj.col, inj.delta, trunc_sys.h)
                                     : Vector(u_n.size(), 0.0);
  const Vector eh_pred = inj.active ? eh_tilde_prediction(u_n, inj.col, trunc_sys.h, mf.length())
                                    : Vector(u_n.size(), 0.0);

  LevelResult r;
  r.level = elements;
  r.h = trunc_sys.h;
  r.n = trunc_sys.n;
  r.tau_inf = norm_inf(tau);
  r.eh_inf = norm_inf(eh);
  r.tau_dev_inf = norm_inf(difference(tau_pred, tau));
  r.eh_dev_inf = norm_inf(difference(eh_pred, eh));
  r.rank = sol.rank_used;
  r.residual = sol.residual_norm;
  r.injection = inj;
  return r;
}

LevelResult run_level_efie(const ProblemEfie& problem, int m, const InjectionSpec& spec,
                           double rank_tolerance) {
  const RwgSpace space(build_mesh(m));
  const EfieSystem sys = assemble_efie(problem.mf, space, problem.quad_degree);
  const Vector u_n = nominal_coefficients_efie(problem.mf, space);
  const ResolvedInjection inj = resolve(spec, space);
  const DenseMatrix a = apply(sys.a, inj);

  const Vector tau = truncation_error(a, sys.b, u_n);
  const MinimalChangeSolution sol = minimal_change_solve(a, sys.b, u_n, rank_tolerance);

  LevelResult r;
  r.level = static_cast<std::size_t>(m);
  r.h = sys.h;
  r.n = space.size();
  r.tau_inf = norm_inf(tau);
  r.eh_inf = norm_inf(difference(sol.u_h, u_n));
  r.rank = sol.rank_used;
  r.residual = sol.residual_norm;
  r.injection = inj;
  return r;
}

ConvergenceReport run_study(const Problem& problem, std::span<const std::size_t> levels,
                            const InjectionSpec& spec, const StudyOptions& options) {
  spec.validate();
  std::vector<std::size_t> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("run_study: refinement levels must be distinct");
  if (sorted.size() < kMinLevels)
    throw std::invalid_argument("run_study: at least three refinement levels are required");

  const bool is_1d = std::holds_alternative<Problem1d>(problem);
  ConvergenceReport report;
  report.problem = is_1d ? "1d" : "efie";
  report.injection = to_string(spec);
  report.margin = options.margin;
  report.rank_tolerance = options.rank_tolerance;

  for (std::size_t level : sorted) {
    try {
      if (is_1d)
        report.levels.push_back(
            run_level_1d(std::get<Problem1d>(problem).mf, level, spec, options.rank_tolerance));
      else
        report.levels.push_back(run_level_efie(std::get<ProblemEfie>(problem), static_cast<int>(level),
                                               spec, options.rank_tolerance));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "level " << (is_1d ? "N = " : "m = ") << level << ": " << e.what();
      throw LevelFailure(level, os.str());
    }
  }

  std::vector<Metric> metrics{Metric::truncation, Metric::discretization};
  if (is_1d) {
    metrics.push_back(Metric::truncation_deviation);
    metrics.push_back(Metric::discretization_deviation);
  }
  const int q = is_1d ? std::get<Problem1d>(problem).mf.q : std::get<ProblemEfie>(problem).q;
  const int entry_order = is_1d ? 1 : 2;
  const std::vector<double> h = report.mesh_sizes();
  for (Metric m : metrics) {
    const std::vector<double> eps = report.series(m);
    report.orders[m] = observed_order(eps, h);
    report.predicted[m] = predicted_order(q, spec.rate, locator_class(spec), m, entry_order);
  }
  for (Metric m : {Metric::truncation, Metric::discretization})
    report.verdicts.push_back(make_verdict(m, report.orders[m], options.margin));
  return report;
}

}  // namespace mmsv
