#include "mmsv/injection.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mmsv/efie.hpp"

namespace mmsv {

namespace {

constexpr Vec2 kEfieAnchor{0.0, 0.5};

std::size_t parse_index(std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == 0)
    throw std::invalid_argument("injection: expected a positive 1-based index, got '" +
                                std::string(text) + "'");
  return value - 1;
}

void check_bounds(const ResolvedInjection& r, std::size_t n) {
  if (r.row >= n || r.col >= n) {
    std::ostringstream os;
    os << "injection (" << r.row + 1 << ',' << r.col + 1 << ") is outside the " << n << " x " << n
       << " system; the mesh is too coarse";
    throw std::out_of_range(os.str());
  }
}

// Nearest node to x among a + k h, k = 1..n; 0-based, ties to the lower index.
std::size_t nearest_node(double x, double a, double h, std::size_t n) {
  const double t = (x - a) / h;
  double k = std::floor(t);
  if (t - k > 0.5) k += 1.0;
  if (k < 1.0 || k > static_cast<double>(n)) {
    std::ostringstream os;
    os << "injection anchor x = " << x << " has no interior node";
    throw std::out_of_range(os.str());
  }
  return static_cast<std::size_t>(k) - 1;
}

std::size_t nearest_edge(const RwgSpace& space, Vec2 anchor) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  const double tie = 1e-12 * space.mesh().h();
  for (std::size_t j = 0; j < space.size(); ++j) {
    const double d = length(space.function(j).midpoint - anchor);
    if (d < best_d - tie) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

InjectionSpec InjectionSpec::at(Locator row, Locator col, double delta0, double rate) {
  InjectionSpec s;
  s.none = false;
  s.row = row;
  s.col = col;
  s.delta0 = delta0;
  s.rate = rate;
  s.validate();
  return s;
}

void InjectionSpec::validate() const {
  if (none) return;
  if (delta0 == 0.0 || !std::isfinite(delta0))
    throw std::invalid_argument("injection: delta0 must be finite and nonzero");
  if (!(rate >= 0.0)) throw std::invalid_argument("injection: rate r must be non-negative");
}

InjectionSpec parse_injection(std::string_view text, double delta0, double rate) {
  if (text == "none") return InjectionSpec::clean();
  if (text == "spatial:both") return InjectionSpec::at(Locator::spatial(), Locator::spatial(), delta0, rate);
  if (text.starts_with("spatial-col:"))
    return InjectionSpec::at(Locator::fixed(parse_index(text.substr(12))), Locator::spatial(), delta0,
                             rate);
  if (text.starts_with("fixed:")) {
    const auto body = text.substr(6);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos)
      throw std::invalid_argument("injection: expected fixed:i,j");
    return InjectionSpec::at(Locator::fixed(parse_index(body.substr(0, comma))),
                             Locator::fixed(parse_index(body.substr(comma + 1))), delta0, rate);
  }
  throw std::invalid_argument("injection: unrecognized form '" + std::string(text) +
                              "' (expected none | fixed:i,j | spatial-col:i | spatial:both)");
}

std::string to_string(const InjectionSpec& spec) {
  if (spec.none) return "none";
  const bool row_fixed = spec.row.kind == LocatorKind::fixed_index;
  const bool col_fixed = spec.col.kind == LocatorKind::fixed_index;
  if (row_fixed && col_fixed)
    return "fixed:" + std::to_string(spec.row.index + 1) + "," + std::to_string(spec.col.index + 1);
  if (row_fixed) return "spatial-col:" + std::to_string(spec.row.index + 1);
  if (!col_fixed) return "spatial:both";
  return "spatial-row:" + std::to_string(spec.col.index + 1);
}

ResolvedInjection resolve(const InjectionSpec& spec, std::size_t elements, double a, double b) {
  spec.validate();
  if (spec.none) return {};
  if (elements < 2) throw std::invalid_argument("injection: 1D grid needs at least two elements");
  const std::size_t n = elements - 1;
  const double h = (b - a) / static_cast<double>(elements);

  const bool row_fixed = spec.row.kind == LocatorKind::fixed_index;
  const auto locate = [&](const Locator& loc, double default_x) {
    if (loc.kind == LocatorKind::fixed_index) return loc.index;
    const double x = loc.anchor ? loc.anchor->x : default_x;
    return nearest_node(x, a, h, n);
  };
  const double mid = 0.5 * (a + b);
  const double quarter = a + 0.25 * (b - a);

  ResolvedInjection r;
  r.active = true;
  r.row = locate(spec.row, mid);
  r.col = locate(spec.col, row_fixed ? quarter : mid);
  r.delta = spec.delta0 * std::pow(h, spec.rate);
  check_bounds(r, n);
  return r;
}

ResolvedInjection resolve(const InjectionSpec& spec, const RwgSpace& space) {
  spec.validate();
  if (spec.none) return {};
  const auto locate = [&](const Locator& loc) {
    if (loc.kind == LocatorKind::fixed_index) return loc.index;
    return nearest_edge(space, loc.anchor.value_or(kEfieAnchor));
  };
  ResolvedInjection r;
  r.active = true;
  r.row = locate(spec.row);
  r.col = locate(spec.col);
  r.delta = spec.delta0 * std::pow(space.mesh().h(), spec.rate);
  check_bounds(r, space.size());
  return r;
}

DenseMatrix apply(const DenseMatrix& a, const ResolvedInjection& inj) {
  DenseMatrix out = a;
  if (!inj.active) return out;
  if (inj.row >= a.rows() || inj.col >= a.cols())
    throw std::out_of_range("injection: index outside the matrix");
  out(inj.row, inj.col) *= 1.0 + inj.delta;
  return out;
}

}  // namespace mmsv
