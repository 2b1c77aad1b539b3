#include "mmsv/mesh.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace mmsv {

namespace {

bool lex_yx(Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec2> vertices,
                           std::vector<std::array<std::size_t, 3>> triangles, int refinement)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), refinement_(refinement) {
  if (triangles_.empty()) throw std::invalid_argument("mesh has no triangles");
  for (auto& tri : triangles_) {
    for (std::size_t v : tri)
      if (v >= vertices_.size()) throw std::invalid_argument("triangle references unknown vertex");
    const double signed_area =
        cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
    if (signed_area == 0.0) throw std::invalid_argument("degenerate triangle");
    if (signed_area < 0.0) std::swap(tri[1], tri[2]);
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  std::vector<MeshEdge> found;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      std::size_t a = triangles_[t][k];
      std::size_t b = triangles_[t][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = lookup.try_emplace({a, b}, found.size());
      if (inserted) {
        found.push_back({{a, b}, t, std::nullopt});
      } else {
        MeshEdge& e = found[it->second];
        if (e.tri_minus) throw std::invalid_argument("non-manifold edge");
        e.tri_minus = t;
      }
    }
  }

  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto mid = [&](const MeshEdge& e) {
    return 0.5 * (vertices_[e.vertices[0]] + vertices_[e.vertices[1]]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return lex_yx(mid(found[l]), mid(found[r])); });
  edges_.reserve(found.size());
  for (std::size_t k : order) edges_.push_back(found[k]);
}

double TriangleMesh::h() const noexcept {
  return 2.0 / std::sqrt(static_cast<double>(triangles_.size()));
}

double TriangleMesh::area(std::size_t t) const {
  const auto& tri = triangles_.at(t);
  return 0.5 * cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
}

Vec2 TriangleMesh::centroid(std::size_t t) const {
  const auto& tri = triangles_.at(t);
  return (1.0 / 3.0) * (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]);
}

Vec2 TriangleMesh::midpoint(std::size_t e) const {
  const auto& edge = edges_.at(e);
  return 0.5 * (vertices_[edge.vertices[0]] + vertices_[edge.vertices[1]]);
}

bool TriangleMesh::contains(std::size_t t, Vec2 p, double tolerance) const {
  const auto& tri = triangles_.at(t);
  const double twice_area = 2.0 * area(t);
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = vertices_[tri[k]];
    const Vec2 b = vertices_[tri[(k + 1) % 3]];
    if (cross(b - a, p - a) / twice_area < -tolerance) return false;
  }
  return true;
}

std::size_t TriangleMesh::boundary_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const MeshEdge& e) { return !e.interior(); }));
}

std::size_t TriangleMesh::interior_edge_count() const noexcept {
  return edges_.size() - boundary_edge_count();
}

TriangleMesh build_mesh(int m) {
  if (m < 2) throw std::invalid_argument("build_mesh: refinement m must be at least 2");
  const std::size_t cols = 2 * static_cast<std::size_t>(m);
  const std::size_t rows = static_cast<std::size_t>(m);
  const double h = 1.0 / m;

  std::vector<Vec2> vertices;
  vertices.reserve((cols + 1) * (rows + 1));
  for (std::size_t r = 0; r <= rows; ++r)
    for (std::size_t c = 0; c <= cols; ++c)
      vertices.push_back({-1.0 + static_cast<double>(c) * h, static_cast<double>(r) * h});

  const auto vid = [&](std::size_t r, std::size_t c) { return r * (cols + 1) + c; };
  // Within a row of squares, centroids of lower-right triangles sit at
  // y0 + h/3 and upper-left ones at y0 + 2h/3, so (y, x) order puts all
  // lower triangles of the row first.
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c)
      triangles.push_back({vid(r, c), vid(r, c + 1), vid(r + 1, c + 1)});
    for (std::size_t c = 0; c < cols; ++c)
      triangles.push_back({vid(r, c), vid(r + 1, c + 1), vid(r + 1, c)});
  }
  return TriangleMesh(std::move(vertices), std::move(triangles), m);
}

void write_mesh(std::ostream& os, const TriangleMesh& mesh) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  os << "# mmsv triangle mesh\n";
  os << "refinement " << mesh.refinement() << "\n";
  os << "h " << mesh.h() << "\n";
  os << "vertices " << mesh.vertices().size() << "\n";
  for (const Vec2& v : mesh.vertices()) os << v.x << ' ' << v.y << '\n';
  os << "triangles " << mesh.triangles().size() << "\n";
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "edges " << mesh.edges().size() << "\n";
  std::size_t unknown = 0;
  for (const MeshEdge& e : mesh.edges()) {
    os << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.tri_plus << ' ';
    if (e.interior())
      os << *e.tri_minus << ' ' << unknown++;
    else
      os << "-1 -1";
    os << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace mmsv
