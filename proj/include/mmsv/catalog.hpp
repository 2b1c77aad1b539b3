#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmsv/injection.hpp"
#include "mmsv/verify.hpp"

namespace mmsv {

/// One numerical case: "1d/1a" ... "1d/2d" and "efie/1a" ... "efie/3d".
struct CaseCatalogEntry {
  std::string id;
  std::string description;
  Problem problem;
  InjectionSpec injection;
  std::vector<std::size_t> default_levels;
  std::map<Metric, double> expected;  // predicted observed orders
};

inline constexpr double kDelta0_1d = 1.0 / 20.0;
inline constexpr double kDelta0_efie = 1.0 / 100.0;

const std::vector<CaseCatalogEntry>& case_catalog();
const CaseCatalogEntry* find_case(std::string_view id);

/// Per-run overrides; unset fields keep the catalog defaults.
struct RunOverrides {
  std::optional<std::vector<std::size_t>> levels;
  std::optional<double> delta0;
  std::optional<double> rate;
  std::optional<std::string> injection;  // textual form, see parse_injection
  std::optional<int> quad_degree;
  double rank_tolerance = kDefaultRankTolerance;
  double margin = kDefaultMargin;
};

/// Injection after overrides: an explicit textual form wins; otherwise
/// delta0 / rate overrides are applied to the catalog injection.
InjectionSpec effective_injection(const CaseCatalogEntry& entry, const RunOverrides& overrides);

ConvergenceReport run_case(const CaseCatalogEntry& entry, const RunOverrides& overrides = {});

/// True when every reported order lies within report.margin of its
/// prediction. A metric at the round-off floor matches a prediction of 2.
bool matches_prediction(const ConvergenceReport& report);

}  // namespace mmsv
