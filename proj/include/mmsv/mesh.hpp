#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mmsv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }

struct MeshEdge {
  std::array<std::size_t, 2> vertices{};
  std::size_t tri_plus = 0;                // lower triangle index
  std::optional<std::size_t> tri_minus;    // absent on the boundary
  bool interior() const noexcept { return tri_minus.has_value(); }
};

/// Conforming triangle mesh. Triangles are counter-clockwise. Edges are
/// ordered lexicographically by midpoint (y, then x).
class TriangleMesh {
 public:
  /// Builds edge adjacency from a triangle list. `refinement` is 0 for meshes
  /// not produced by build_mesh.
  TriangleMesh(std::vector<Vec2> vertices, std::vector<std::array<std::size_t, 3>> triangles,
               int refinement = 0);

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const noexcept { return triangles_; }
  const std::vector<MeshEdge>& edges() const noexcept { return edges_; }

  int refinement() const noexcept { return refinement_; }
  /// h = 2 / sqrt(N) with N the triangle count.
  double h() const noexcept;

  double area(std::size_t t) const;
  Vec2 centroid(std::size_t t) const;
  Vec2 midpoint(std::size_t e) const;
  bool contains(std::size_t t, Vec2 p, double tolerance = 1e-12) const;
  std::size_t boundary_edge_count() const noexcept;
  std::size_t interior_edge_count() const noexcept;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<MeshEdge> edges_;
  int refinement_ = 0;
};

/// 2m x m squares of side 1/m on [-1, 1] x [0, 1], each split along its
/// lower-left to upper-right diagonal. Vertices and triangles are ordered
/// lexicographically by (y, x) of position / centroid. Requires m >= 2.
TriangleMesh build_mesh(int m);

/// Plain-text dump: vertex, triangle and edge blocks (see README).
void write_mesh(std::ostream& os, const TriangleMesh& mesh);

}  // namespace mmsv
