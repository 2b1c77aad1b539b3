#pragma once

// Method-of-moments discretization of the EFIE sesquilinear form
//
//   a(u, v) = alpha int_S v . int_S' u G dS' dS
//           + beta  int_S div v int_S' div' u G dS' dS
//
// on a triangulated rectangle with RWG basis functions and a smooth,
// manufactured Green's function. Everything is real-valued.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mmsv/linalg.hpp"
#include "mmsv/mesh.hpp"

namespace mmsv {

/// RWG function attached to an interior edge. On the plus triangle
/// phi(x) = l / (2 A+) (x - p+); on the minus triangle phi(x) = -l / (2 A-) (x - p-).
/// The normal flux across the edge is 1 in the direction of `normal`, which
/// points from the plus triangle to the minus triangle.
struct RwgFunction {
  std::size_t edge = 0;
  std::array<std::size_t, 2> triangles{};  // plus, minus
  std::array<Vec2, 2> opposite{};          // p+, p-
  std::array<double, 2> areas{};
  double edge_length = 0.0;
  Vec2 midpoint;
  Vec2 normal;
};

/// Local view of the basis functions supported on one triangle.
struct LocalRwg {
  std::size_t function = 0;
  double coefficient = 0.0;  // +-l / (2 A): phi = coefficient * (x - opposite)
  Vec2 opposite;
  double divergence = 0.0;   // +-l / A
};

class RwgSpace {
 public:
  explicit RwgSpace(TriangleMesh mesh);

  const TriangleMesh& mesh() const noexcept { return mesh_; }
  std::size_t size() const noexcept { return functions_.size(); }
  const RwgFunction& function(std::size_t j) const { return functions_.at(j); }
  const std::vector<RwgFunction>& functions() const noexcept { return functions_; }
  const std::vector<LocalRwg>& on_triangle(std::size_t t) const { return local_.at(t); }

  /// phi_j(x); the zero vector outside the support.
  Vec2 eval(std::size_t j, Vec2 x) const;
  /// Constant divergence of phi_j on triangle t; zero if t is not in the support.
  double div(std::size_t j, std::size_t t) const;

  /// sum_j coeffs[j] phi_j(x), using the first triangle that contains x.
  Vec2 expand(std::span<const double> coeffs, Vec2 x) const;

 private:
  TriangleMesh mesh_;
  std::vector<RwgFunction> functions_;
  std::vector<std::vector<LocalRwg>> local_;
};

using VectorField = std::function<Vec2(Vec2)>;
using ScalarField = std::function<double(Vec2)>;
using Kernel = std::function<double(Vec2, Vec2)>;

struct ManufacturedEfie {
  VectorField u;
  ScalarField div_u;
  double alpha = 1.0;
  double beta = 1.0;
  Kernel green;

  /// u = (cos(pi x / 2) cos(pi y / 4), cos(pi x / 4) sin(pi y)),
  /// G(x, x') = 1 - |x - x'|^2 / 5 on [-1, 1] x [0, 1].
  static ManufacturedEfie standard(double alpha, double beta);
};

inline constexpr int kDefaultQuadDegree = 6;
inline constexpr int kSourceDegreeBoost = 4;
inline constexpr int kMinQuadDegree = 5;
inline constexpr int kMaxQuadDegree = 12;

/// A_ij = a(phi_j, phi_i) / h^2 and b_i = a(u, phi_i) / h^2.
struct EfieSystem {
  DenseMatrix a;
  Vector b;
  double h = 0.0;
};

/// Galerkin assembly over all triangle pairs. Basis-basis integrals use the
/// symmetric rule of `quad_degree` on both factors; for b, the integral over
/// the manufactured field uses degree min(quad_degree + 4, 12). Requires
/// 5 <= quad_degree <= 12.
/// Threads are capped by MMS_VERIFY_THREADS; results do not depend on the count.
EfieSystem assemble_efie(const ManufacturedEfie& mf, const RwgSpace& space,
                         int quad_degree = kDefaultQuadDegree);

/// u^n_j = u(midpoint_j) . normal_j.
Vector nominal_coefficients_efie(const ManufacturedEfie& mf, const RwgSpace& space);

}  // namespace mmsv
