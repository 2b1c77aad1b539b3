#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mmsv/mesh.hpp"

using namespace mmsv;

TEST(Mesh, CountsAtRefinementFour) {
  const TriangleMesh mesh = build_mesh(4);
  EXPECT_EQ(mesh.vertices().size(), 45u);
  EXPECT_EQ(mesh.triangles().size(), 64u);
  EXPECT_EQ(mesh.edges().size(), 108u);
  EXPECT_EQ(mesh.boundary_edge_count(), 24u);
  EXPECT_EQ(mesh.interior_edge_count(), 84u);
  EXPECT_DOUBLE_EQ(mesh.h(), 0.25);
}

TEST(Mesh, EulerCharacteristicAndArea) {
  for (int m : {2, 3, 5, 8}) {
    const TriangleMesh mesh = build_mesh(m);
    const auto v = static_cast<long>(mesh.vertices().size());
    const auto e = static_cast<long>(mesh.edges().size());
    const auto f = static_cast<long>(mesh.triangles().size());
    EXPECT_EQ(v - e + f, 1) << "m = " << m;
    EXPECT_EQ(f, 4L * m * m);
    EXPECT_DOUBLE_EQ(mesh.h(), 1.0 / m);
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
      EXPECT_GT(mesh.area(t), 0.0);
      area += mesh.area(t);
    }
    EXPECT_NEAR(area, 2.0, 1e-14);
  }
}

TEST(Mesh, TrianglesAreCounterClockwise) {
  const TriangleMesh mesh = build_mesh(3);
  for (const auto& tri : mesh.triangles()) {
    const auto& p = mesh.vertices();
    EXPECT_GT(cross(p[tri[1]] - p[tri[0]], p[tri[2]] - p[tri[0]]), 0.0);
  }
}

TEST(Mesh, EdgesSortedByMidpoint) {
  const TriangleMesh mesh = build_mesh(4);
  for (std::size_t e = 1; e < mesh.edges().size(); ++e) {
    const Vec2 a = mesh.midpoint(e - 1), b = mesh.midpoint(e);
    EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x < b.x)) << "edge " << e;
  }
}

TEST(Mesh, InteriorEdgesHaveTwoTrianglesSharingThem) {
  const TriangleMesh mesh = build_mesh(4);
  for (const MeshEdge& edge : mesh.edges()) {
    const Vec2 a = mesh.vertices()[edge.vertices[0]], b = mesh.vertices()[edge.vertices[1]];
    const Vec2 mid = 0.5 * (a + b);
    const bool on_boundary = std::abs(mid.x) == 1.0 || mid.y == 0.0 || mid.y == 1.0;
    EXPECT_EQ(edge.interior(), !on_boundary);
    if (edge.interior()) {
      EXPECT_LT(edge.tri_plus, *edge.tri_minus);
    }
    EXPECT_TRUE(mesh.contains(edge.tri_plus, mid));
  }
}

TEST(Mesh, RejectsCoarseRefinement) { EXPECT_THROW(build_mesh(1), std::invalid_argument); }

TEST(Mesh, TextDumpHasAllBlocks) {
  std::ostringstream os;
  write_mesh(os, build_mesh(2));
  const std::string text = os.str();
  EXPECT_NE(text.find("vertices 15"), std::string::npos);
  EXPECT_NE(text.find("triangles 16"), std::string::npos);
  EXPECT_NE(text.find("edges 30"), std::string::npos);
}
