#include "mmsv/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace mmsv {

namespace {

// Locations a-d of the error for each family: none, (1,2), (2, spatial), (spatial, spatial).
InjectionSpec location(char letter, double delta0, std::optional<Vec2> col_anchor,
                       std::optional<Vec2> both_anchor) {
  switch (letter) {
    case 'a': return InjectionSpec::clean();
    case 'b': return InjectionSpec::at(Locator::fixed(0), Locator::fixed(1), delta0);
    case 'c': return InjectionSpec::at(Locator::fixed(1), Locator::spatial(col_anchor), delta0);
    default: return InjectionSpec::at(Locator::spatial(both_anchor), Locator::spatial(both_anchor), delta0);
  }
}

std::map<Metric, double> expectations(const Problem& problem, const InjectionSpec& spec) {
  const bool is_1d = std::holds_alternative<Problem1d>(problem);
  const int q = is_1d ? std::get<Problem1d>(problem).mf.q : std::get<ProblemEfie>(problem).q;
  std::map<Metric, double> out;
  std::vector<Metric> metrics{Metric::truncation, Metric::discretization};
  if (is_1d) {
    metrics.push_back(Metric::truncation_deviation);
    metrics.push_back(Metric::discretization_deviation);
  }
  for (Metric m : metrics)
    out[m] = predicted_order(q, spec.rate, locator_class(spec), m, is_1d ? 1 : 2);
  return out;
}

std::vector<CaseCatalogEntry> build_catalog() {
  std::vector<CaseCatalogEntry> cases;
  const std::vector<std::size_t> levels_1d{16, 32, 64, 128, 256, 512, 1024};
  const std::vector<std::size_t> levels_efie{2, 4, 8, 16};

  const Manufactured1d families_1d[] = {Manufactured1d::sin_pi_x(), Manufactured1d::sin_pi_x_squared()};
  for (int family = 0; family < 2; ++family) {
    const Manufactured1d& mf = families_1d[family];
    const Vec2 quarter{mf.a + 0.25 * mf.length(), 0.0};
    const Vec2 middle{0.5 * (mf.a + mf.b), 0.0};
    for (char letter : {'a', 'b', 'c', 'd'}) {
      CaseCatalogEntry e;
      e.id = "1d/" + std::to_string(family + 1) + letter;
      e.problem = Problem1d{mf};
      e.injection = location(letter, kDelta0_1d, quarter, middle);
      e.description = "u = " + mf.label + ", q = " + std::to_string(mf.q) + ", error " + to_string(e.injection);
      e.default_levels = levels_1d;
      e.expected = expectations(e.problem, e.injection);
      cases.push_back(std::move(e));
    }
  }

  const std::pair<double, double> families_efie[] = {{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Vec2 anchor{0.0, 0.5};
  for (int family = 0; family < 3; ++family) {
    const auto [alpha, beta] = families_efie[family];
    for (char letter : {'a', 'b', 'c', 'd'}) {
      CaseCatalogEntry e;
      e.id = "efie/" + std::to_string(family + 1) + letter;
      e.problem = ProblemEfie{ManufacturedEfie::standard(alpha, beta), kDefaultQuadDegree, 1};
      e.injection = location(letter, kDelta0_efie, anchor, anchor);
      e.description = "(alpha, beta) = (" + std::to_string(static_cast<int>(alpha)) + ", " +
                      std::to_string(static_cast<int>(beta)) + "), error " + to_string(e.injection);
      e.default_levels = levels_efie;
      e.expected = expectations(e.problem, e.injection);
      cases.push_back(std::move(e));
    }
  }
  return cases;
}

}  // namespace

const std::vector<CaseCatalogEntry>& case_catalog() {
  static const std::vector<CaseCatalogEntry> catalog = build_catalog();
  return catalog;
}

const CaseCatalogEntry* find_case(std::string_view id) {
  for (const auto& e : case_catalog())
    if (e.id == id) return &e;
  return nullptr;
}

InjectionSpec effective_injection(const CaseCatalogEntry& entry, const RunOverrides& overrides) {
  const double default_delta0 =
      std::holds_alternative<Problem1d>(entry.problem) ? kDelta0_1d : kDelta0_efie;
  if (overrides.injection) {
    const double delta0 =
        overrides.delta0.value_or(entry.injection.none ? default_delta0 : entry.injection.delta0);
    InjectionSpec spec = parse_injection(*overrides.injection, delta0, overrides.rate.value_or(0.0));
    // Keep the catalog anchors when the override uses the same locator kinds.
    if (!spec.none && !entry.injection.none) {
      if (spec.row.kind == LocatorKind::spatial && entry.injection.row.kind == LocatorKind::spatial)
        spec.row.anchor = entry.injection.row.anchor;
      if (spec.col.kind == LocatorKind::spatial && entry.injection.col.kind == LocatorKind::spatial)
        spec.col.anchor = entry.injection.col.anchor;
    }
    return spec;
  }
  InjectionSpec spec = entry.injection;
  if (!spec.none) {
    if (overrides.delta0) spec.delta0 = *overrides.delta0;
    if (overrides.rate) spec.rate = *overrides.rate;
  }
  spec.validate();
  return spec;
}

ConvergenceReport run_case(const CaseCatalogEntry& entry, const RunOverrides& overrides) {
  const InjectionSpec spec = effective_injection(entry, overrides);
  Problem problem = entry.problem;
  if (overrides.quad_degree) {
    auto* efie = std::get_if<ProblemEfie>(&problem);
    if (efie) efie->quad_degree = *overrides.quad_degree;
  }
  const std::vector<std::size_t>& levels = overrides.levels ? *overrides.levels : entry.default_levels;
  ConvergenceReport report =
      run_study(problem, levels, spec, StudyOptions{overrides.rank_tolerance, overrides.margin});
  report.case_id = entry.id;
  return report;
}

bool matches_prediction(const ConvergenceReport& report) {
  for (const auto& [metric, order] : report.orders) {
    const auto predicted = report.predicted.find(metric);
    if (predicted == report.predicted.end()) continue;
    if (order.at_floor || !order.headline) {
      if (predicted->second != 2.0) return false;
      continue;
    }
    if (std::abs(*order.headline - predicted->second) > report.margin) return false;
  }
  return true;
}

}  // namespace mmsv
