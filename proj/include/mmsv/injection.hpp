#pragma once

// Planting a single multiplicative coding error (1 + delta) A_ij, with the row
// and column chosen either by fixed index or by a fixed spatial location, and
// delta = delta0 h^r.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "mmsv/linalg.hpp"
#include "mmsv/mesh.hpp"

namespace mmsv {

class RwgSpace;

enum class LocatorKind { fixed_index, spatial };

/// Fixed locators carry a 0-based index. Spatial locators may carry an anchor;
/// without one the problem default is used. In 1D only anchor->x is read.
struct Locator {
  LocatorKind kind = LocatorKind::fixed_index;
  std::size_t index = 0;
  std::optional<Vec2> anchor;

  static Locator fixed(std::size_t index) { return {LocatorKind::fixed_index, index, std::nullopt}; }
  static Locator spatial(std::optional<Vec2> anchor = std::nullopt) {
    return {LocatorKind::spatial, 0, anchor};
  }
};

struct InjectionSpec {
  bool none = true;
  Locator row;
  Locator col;
  double delta0 = 0.0;
  double rate = 0.0;  // r >= 0

  static InjectionSpec clean() { return {}; }
  static InjectionSpec at(Locator row, Locator col, double delta0, double rate = 0.0);

  /// Throws std::invalid_argument if delta0 == 0 (unless none) or rate < 0.
  void validate() const;
};

/// Textual form `none | fixed:i,j | spatial-col:i | spatial:both` with 1-based
/// indices. Throws std::invalid_argument on malformed input.
InjectionSpec parse_injection(std::string_view text, double delta0, double rate);
std::string to_string(const InjectionSpec& spec);

/// Resolved 0-based location and magnitude. `active` is false for clean runs.
struct ResolvedInjection {
  bool active = false;
  std::size_t row = 0;
  std::size_t col = 0;
  double delta = 0.0;

  friend bool operator==(const ResolvedInjection&, const ResolvedInjection&) = default;
};

/// 1D grid of `elements` cells on [a, b]; unknown k sits at a + (k+1) h.
/// Spatial locators pick the node nearest the anchor (ties to the lower index).
/// Default anchors: a spatial column with a fixed row uses a + (b - a) / 4,
/// otherwise the midpoint (a + b) / 2.
ResolvedInjection resolve(const InjectionSpec& spec, std::size_t elements, double a, double b);

/// RWG space: spatial locators pick the interior edge whose midpoint is
/// nearest the anchor (default (0, 0.5)), ties to the lower edge index.
ResolvedInjection resolve(const InjectionSpec& spec, const RwgSpace& space);

/// Copy of `a` with entry (row, col) scaled by (1 + delta).
DenseMatrix apply(const DenseMatrix& a, const ResolvedInjection& inj);

}  // namespace mmsv
