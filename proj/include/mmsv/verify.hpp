#pragma once

// Truncation- and discretization-error metrics, refinement studies, observed
// orders and detection verdicts.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mmsv/efie.hpp"
#include "mmsv/injection.hpp"
#include "mmsv/linalg.hpp"
#include "mmsv/model1d.hpp"

namespace mmsv {

enum class Metric {
  truncation,                // ||tau_h||_inf
  discretization,            // ||e^h||_inf
  truncation_deviation,      // ||tau~ - tau||_inf (1D only)
  discretization_deviation,  // ||e~^h - e^h||_inf (1D only)
};

std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> metric_from_name(std::string_view name) noexcept;

/// tau = A u^n - b on an already scaled system.
Vector truncation_error(const DenseMatrix& a, std::span<const double> b, std::span<const double> u_n);

/// e^h = u^h - u^n with u^h the minimal-change solution. Propagates
/// InconsistentSystemError.
Vector discretization_error(const DenseMatrix& a, std::span<const double> b,
                            std::span<const double> u_n, double rank_tolerance = kDefaultRankTolerance);

inline constexpr double kRoundoffFloor = 1e-13;
inline constexpr double kDefaultMargin = 0.3;

/// Slopes p_k = log(eps_k / eps_{k+1}) / log(h_k / h_{k+1}). If any eps falls
/// below 1e-13 max(eps) the metric is at the round-off floor and no order is
/// reported.
struct OrderEstimate {
  std::vector<double> slopes;
  std::optional<double> headline;  // final pair
  bool at_floor = false;
};

OrderEstimate observed_order(std::span<const double> eps, std::span<const double> h);

struct DetectionVerdict {
  Metric metric = Metric::truncation;
  double expected_order_clean = 2.0;
  std::optional<double> observed_order;
  bool detected = false;  // observed_order < 2 - margin
  double margin = kDefaultMargin;
};

DetectionVerdict make_verdict(Metric metric, const OrderEstimate& order, double margin = kDefaultMargin);

/// How the injected column is located, for order predictions.
enum class LocatorClass { none, fixed_index, spatial };

/// Predicted observed order. `entry_order` is the power of h carried by a
/// scaled matrix entry: 1 for the 1D analogy, 2 for the EFIE. Truncation:
/// min(q + r + entry_order, 2) for a fixed column, min(r + entry_order, 2)
/// for a spatial column. Discretization: min(q, 2) fixed, 0 spatial. Clean: 2.
/// Deviation metrics: 2.
double predicted_order(int q, double r, LocatorClass locator, Metric metric, int entry_order = 1);

LocatorClass locator_class(const InjectionSpec& spec) noexcept;

struct LevelResult {
  std::size_t level = 0;  // N (1D elements) or m (EFIE refinement)
  double h = 0.0;
  std::size_t n = 0;
  double tau_inf = 0.0;
  double eh_inf = 0.0;
  std::optional<double> tau_dev_inf;
  std::optional<double> eh_dev_inf;
  std::size_t rank = 0;
  double residual = 0.0;
  ResolvedInjection injection;
};

struct ConvergenceReport {
  std::string case_id;
  std::string problem;  // "1d" or "efie"
  std::string injection;
  std::vector<LevelResult> levels;  // h strictly decreasing
  std::map<Metric, OrderEstimate> orders;
  std::vector<DetectionVerdict> verdicts;  // truncation, discretization
  std::map<Metric, double> predicted;
  double margin = kDefaultMargin;
  double rank_tolerance = kDefaultRankTolerance;

  std::vector<double> series(Metric m) const;
  std::vector<double> mesh_sizes() const;
};

struct Problem1d {
  Manufactured1d mf;
};

struct ProblemEfie {
  ManufacturedEfie mf;
  int quad_degree = kDefaultQuadDegree;
  int q = 1;  // Taylor order of u . n near the corner where fixed indices sit
};

using Problem = std::variant<Problem1d, ProblemEfie>;

struct StudyOptions {
  double rank_tolerance = kDefaultRankTolerance;
  double margin = kDefaultMargin;
};

/// Failure at one refinement level; the message names the level.
class LevelFailure : public std::runtime_error {
 public:
  LevelFailure(std::size_t level, const std::string& what);
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

LevelResult run_level_1d(const Manufactured1d& mf, std::size_t elements, const InjectionSpec& spec,
                         double rank_tolerance);
LevelResult run_level_efie(const ProblemEfie& problem, int m, const InjectionSpec& spec,
                           double rank_tolerance);

/// Levels are N (1D) or m (EFIE) and are processed in order of decreasing h.
/// Requires at least three distinct levels.
ConvergenceReport run_study(const Problem& problem, std::span<const std::size_t> levels,
                            const InjectionSpec& spec, const StudyOptions& options = {});

}  // namespace mmsv
