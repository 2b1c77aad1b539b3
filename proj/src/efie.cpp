#include "mmsv/efie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmsv/quadrature.hpp"
#include "parallel.hpp"

namespace mmsv {

namespace {

std::size_t opposite_vertex(const std::array<std::size_t, 3>& tri, const MeshEdge& e) {
  for (std::size_t v : tri)
    if (v != e.vertices[0] && v != e.vertices[1]) return v;
  throw std::logic_error("edge is not part of triangle");
}

// Quadrature points of one rule mapped to every triangle, stored with
// coordinates relative to the triangle centroid.
struct MappedPoints {
  std::size_t per_triangle = 0;
  std::vector<Vec2> offset;    // x - centroid
  std::vector<Vec2> absolute;  // x
  std::vector<double> weight;  // rule weight * area
};

MappedPoints map_rule(const TriangleMesh& mesh, const TriangleRule& rule) {
  MappedPoints out;
  out.per_triangle = rule.points.size();
  const std::size_t total = mesh.triangles().size() * out.per_triangle;
  out.offset.reserve(total);
  out.absolute.reserve(total);
  out.weight.reserve(total);
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Vec2 c = mesh.centroid(t);
    const Vec2 v0 = mesh.vertices()[tri[0]] - c;
    const Vec2 v1 = mesh.vertices()[tri[1]] - c;
    const Vec2 v2 = mesh.vertices()[tri[2]] - c;
    const double area = mesh.area(t);
    for (const TrianglePoint& p : rule.points) {
      const Vec2 local = p.l1 * v0 + p.l2 * v1 + p.l3 * v2;
      out.offset.push_back(local);
      out.absolute.push_back(c + local);
      out.weight.push_back(p.weight * area);
    }
  }
  return out;
}

// Kernel-weighted moments over one triangle pair, in centroid-relative
// coordinates x^ = x - c_T and x'^ = x' - c_T':
//   s0 = sum g, sx = sum g x^, sxp = sum g x'^, sxxp = sum g x^ . x'^.
struct PairMoments {
  double s0 = 0.0;
  Vec2 sx;
  Vec2 sxp;
  double sxxp = 0.0;
};

}  // namespace

RwgSpace::RwgSpace(TriangleMesh mesh) : mesh_(std::move(mesh)) {
  local_.resize(mesh_.triangles().size());
  for (std::size_t e = 0; e < mesh_.edges().size(); ++e) {
    const MeshEdge& edge = mesh_.edges()[e];
    if (!edge.interior()) continue;
    RwgFunction f;
    f.edge = e;
    f.triangles = {edge.tri_plus, *edge.tri_minus};
    const Vec2 a = mesh_.vertices()[edge.vertices[0]];
    const Vec2 b = mesh_.vertices()[edge.vertices[1]];
    f.edge_length = length(b - a);
    f.midpoint = 0.5 * (a + b);
    for (int s = 0; s < 2; ++s) {
      const auto& tri = mesh_.triangles()[f.triangles[s]];
      f.opposite[s] = mesh_.vertices()[opposite_vertex(tri, edge)];
      f.areas[s] = mesh_.area(f.triangles[s]);
    }
    const Vec2 tangent = (1.0 / f.edge_length) * (b - a);
    f.normal = {tangent.y, -tangent.x};
    if (dot(f.normal, f.midpoint - f.opposite[0]) < 0.0) f.normal = -1.0 * f.normal;

    const std::size_t index = functions_.size();
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 0 ? 1.0 : -1.0;
      local_[f.triangles[s]].push_back({index, sign * f.edge_length / (2.0 * f.areas[s]),
                                        f.opposite[s], sign * f.edge_length / f.areas[s]});
    }
    functions_.push_back(f);
  }
}

Vec2 RwgSpace::eval(std::size_t j, Vec2 x) const {
  const RwgFunction& f = functions_.at(j);
  for (int s = 0; s < 2; ++s) {
    if (mesh_.contains(f.triangles[s], x)) {
      const double sign = s == 0 ? 1.0 : -1.0;
      return (sign * f.edge_length / (2.0 * f.areas[s])) * (x - f.opposite[s]);
    }
  }
  return {};
}

double RwgSpace::div(std::size_t j, std::size_t t) const {
  const RwgFunction& f = functions_.at(j);
  if (t == f.triangles[0]) return f.edge_length / f.areas[0];
  if (t == f.triangles[1]) return -f.edge_length / f.areas[1];
  return 0.0;
}

Vec2 RwgSpace::expand(std::span<const double> coeffs, Vec2 x) const {
  if (coeffs.size() != functions_.size())
    throw std::invalid_argument("RwgSpace::expand: coefficient count mismatch");
  for (std::size_t t = 0; t < mesh_.triangles().size(); ++t) {
    if (!mesh_.contains(t, x)) continue;
    Vec2 sum;
    for (const LocalRwg& l : local_[t]) sum = sum + (coeffs[l.function] * l.coefficient) * (x - l.opposite);
    return sum;
  }
  throw std::invalid_argument("RwgSpace::expand: point outside the mesh");
}

ManufacturedEfie ManufacturedEfie::standard(double alpha, double beta) {
  using std::numbers::pi;
  ManufacturedEfie mf;
  mf.u = [](Vec2 p) {
    return Vec2{std::cos(pi * p.x / 2.0) * std::cos(pi * p.y / 4.0),
                std::cos(pi * p.x / 4.0) * std::sin(pi * p.y)};
  };
  mf.div_u = [](Vec2 p) {
    return -pi / 2.0 * std::sin(pi * p.x / 2.0) * std::cos(pi * p.y / 4.0) +
           pi * std::cos(pi * p.x / 4.0) * std::cos(pi * p.y);
  };
  mf.alpha = alpha;
  mf.beta = beta;
  mf.green = [](Vec2 x, Vec2 xp) {
    const Vec2 d = x - xp;
    return 1.0 - dot(d, d) / 5.0;
  };
  return mf;
}

EfieSystem assemble_efie(const ManufacturedEfie& mf, const RwgSpace& space, int quad_degree) {
  if (quad_degree < kMinQuadDegree || quad_degree > kMaxQuadDegree)
    throw std::invalid_argument("assemble_efie: quad_degree must lie in [5, 12]");
  const TriangleMesh& mesh = space.mesh();
  const std::size_t ntri = mesh.triangles().size();
  const std::size_t n = space.size();
  if (n == 0) throw std::invalid_argument("assemble_efie: mesh has no interior edges");

  const MappedPoints test = map_rule(mesh, triangle_rule(quad_degree));
  const MappedPoints source = map_rule(mesh, triangle_rule(std::min(quad_degree + kSourceDegreeBoost, kMaxTriangleDegree)));

  EfieSystem sys;
  sys.h = mesh.h();
  const double inv_h2 = 1.0 / (sys.h * sys.h);
  sys.a = DenseMatrix(n, n);
  sys.b.assign(n, 0.0);

  std::vector<Vec2> centroid(ntri);
  for (std::size_t t = 0; t < ntri; ++t) centroid[t] = mesh.centroid(t);

  // Matrix: moments for a block of test triangles are computed in parallel,
  // then scattered serially in (T, T') order so the summation order is fixed.
  const std::size_t nq = test.per_triangle;
  constexpr std::size_t kBlock = 32;
  std::vector<PairMoments> moments(kBlock * ntri);
  for (std::size_t t0 = 0; t0 < ntri; t0 += kBlock) {
    const std::size_t t1 = std::min(ntri, t0 + kBlock);
    detail::parallel_for(t1 - t0, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t t = t0 + k;
        if (space.on_triangle(t).empty()) continue;
        for (std::size_t tp = 0; tp < ntri; ++tp) {
          PairMoments pm;
          if (!space.on_triangle(tp).empty()) {
            for (std::size_t q = 0; q < nq; ++q) {
              const std::size_t iq = t * nq + q;
              for (std::size_t qp = 0; qp < nq; ++qp) {
                const std::size_t iqp = tp * nq + qp;
                const double g = test.weight[iq] * test.weight[iqp] *
                                 mf.green(test.absolute[iq], test.absolute[iqp]);
                pm.s0 += g;
                pm.sx = pm.sx + g * test.offset[iq];
                pm.sxp = pm.sxp + g * test.offset[iqp];
                pm.sxxp += g * dot(test.offset[iq], test.offset[iqp]);
              }
            }
          }
          moments[k * ntri + tp] = pm;
        }
      }
    });
    for (std::size_t t = t0; t < t1; ++t) {
      for (std::size_t tp = 0; tp < ntri; ++tp) {
        const PairMoments& pm = moments[(t - t0) * ntri + tp];
        for (const LocalRwg& fa : space.on_triangle(t)) {
          const Vec2 pa = fa.opposite - centroid[t];
          for (const LocalRwg& fb : space.on_triangle(tp)) {
            const Vec2 pb = fb.opposite - centroid[tp];
            const double vector_part =
                pm.sxxp - dot(pm.sx, pb) - dot(pa, pm.sxp) + dot(pa, pb) * pm.s0;
            const double value = mf.alpha * fa.coefficient * fb.coefficient * vector_part +
                                 mf.beta * fa.divergence * fb.divergence * pm.s0;
            sys.a(fa.function, fb.function) += value * inv_h2;
          }
        }
      }
    }
  }

  // Right-hand side: field integrals at every test point, then per-triangle
  // local contributions scattered in triangle order.
  const std::size_t ns = source.absolute.size();
  std::vector<Vec2> weighted_u(ns);
  std::vector<double> weighted_div(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    weighted_u[s] = source.weight[s] * mf.u(source.absolute[s]);
    weighted_div[s] = source.weight[s] * mf.div_u(source.absolute[s]);
  }
  std::vector<std::array<double, 3>> local_b(ntri, {0.0, 0.0, 0.0});
  detail::parallel_for(ntri, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto& locals = space.on_triangle(t);
      if (locals.empty()) continue;
      for (std::size_t q = 0; q < nq; ++q) {
        const std::size_t iq = t * nq + q;
        const Vec2 x = test.absolute[iq];
        Vec2 field;
        double field_div = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
          const double g = mf.green(x, source.absolute[s]);
          field = field + g * weighted_u[s];
          field_div += g * weighted_div[s];
        }
        for (std::size_t a = 0; a < locals.size(); ++a) {
          const LocalRwg& fa = locals[a];
          local_b[t][a] += test.weight[iq] *
                           (mf.alpha * fa.coefficient * dot(x - fa.opposite, field) +
                            mf.beta * fa.divergence * field_div);
        }
      }
    }
  });
  for (std::size_t t = 0; t < ntri; ++t) {
    const auto& locals = space.on_triangle(t);
    for (std::size_t a = 0; a < locals.size(); ++a) sys.b[locals[a].function] += local_b[t][a] * inv_h2;
  }
  return sys;
}

Vector nominal_coefficients_efie(const ManufacturedEfie& mf, const RwgSpace& space) {
  Vector u_n(space.size());
  for (std::size_t j = 0; j < space.size(); ++j) {
    const RwgFunction& f = space.function(j);
    u_n[j] = dot(mf.u(f.midpoint), f.normal);
  }
  return u_n;
}

}  // namespace mmsv
