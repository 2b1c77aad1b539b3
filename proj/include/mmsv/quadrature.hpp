#pragma once

#include <cstddef>
#include <vector>

namespace mmsv {

/// Barycentric point with weight; weights of a rule sum to 1 (multiply by
/// the triangle area to integrate).
struct TrianglePoint {
  double l1, l2, l3;
  double weight;
};

struct TriangleRule {
  int degree = 0;
  std::vector<TrianglePoint> points;
};

inline constexpr int kMaxTriangleDegree = 12;

/// Smallest tabulated fully symmetric rule exact to at least `min_degree`.
/// Tabulated degrees: 5, 6, 8, 10, 12. Throws std::invalid_argument above 12.
const TriangleRule& triangle_rule(int min_degree);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t points);

}  // namespace mmsv
