#include "mmsv/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmsv {

namespace {

// Orbit descriptions: centroid (w), S21 (w, a) -> (a, b, b) with b = (1 - a) / 2,
// S111 (w, a, b) -> all permutations of (a, b, 1 - a - b).
struct Orbit {
  int kind;  // 1, 3 or 6 points
  double w, a, b;
};

TriangleRule expand(int degree, std::initializer_list<Orbit> orbits) {
  TriangleRule rule;
  rule.degree = degree;
  for (const Orbit& o : orbits) {
    if (o.kind == 1) {
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, o.w});
    } else if (o.kind == 3) {
      const double b = (1.0 - o.a) / 2.0;
      rule.points.push_back({o.a, b, b, o.w});
      rule.points.push_back({b, o.a, b, o.w});
      rule.points.push_back({b, b, o.a, o.w});
    } else {
      const double c = 1.0 - o.a - o.b;
      const std::array<std::array<double, 3>, 6> perms{{{o.a, o.b, c},
                                                        {o.a, c, o.b},
                                                        {o.b, o.a, c},
                                                        {o.b, c, o.a},
                                                        {c, o.a, o.b},
                                                        {c, o.b, o.a}}};
      for (const auto& p : perms) rule.points.push_back({p[0], p[1], p[2], o.w});
    }
  }
  return rule;
}

// Dunavant's symmetric rules, re-solved from the moment equations in
// extended precision.
const std::array<TriangleRule, 5>& rules() {
  static const std::array<TriangleRule, 5> table{
      expand(5, {{1, 0.225, 0, 0},
                 {3, 0.13239415278850618, 0.05971587178976982, 0},
                 {3, 0.12593918054482715, 0.79742698535308732, 0}}),
      expand(6, {{3, 0.11678627572637937, 0.50142650965817916, 0},
                 {3, 0.050844906370206817, 0.87382197101699554, 0},
                 {6, 0.082851075618373575, 0.053145049844816947, 0.31035245103378441}}),
      expand(8, {{1, 0.14431560767778717, 0, 0},
                 {3, 0.095091634267284625, 0.081414823414553688, 0},
                 {3, 0.10321737053471825, 0.65886138449647959, 0},
                 {3, 0.03245849762319808, 0.89890554336593805, 0},
                 {6, 0.027230314174434994, 0.0083947774099576053, 0.26311282963463811}}),
      expand(10, {{1, 0.09081799038275358, 0, 0},
                  {3, 0.036725957756466705, 0.028844733232685245, 0},
                  {3, 0.045321059435527935, 0.78103684902992589, 0},
                  {6, 0.072757916845420109, 0.14170721941487995, 0.30793983876412095},
                  {6, 0.028327242531057485, 0.025003534762686386, 0.24667256063990269},
                  {6, 0.0094216669637328235, 0.0095408154002994576, 0.066803251012200266}}),
      expand(12, {{3, 0.025731066440455335, 0.023565220452390235, 0},
                  {3, 0.043692544538038402, 0.12055121541107945, 0},
                  {3, 0.0628582242178851, 0.45757922997576816, 0},
                  {3, 0.034796112930708943, 0.74484770891682815, 0},
                  {3, 0.0061662610515590172, 0.95736529909357926, 0},
                  {6, 0.04037155776638093, 0.115343494534698, 0.27571326968551419},
                  {6, 0.022356773202303446, 0.02283833222225703, 0.28132558098993955},
                  {6, 0.017316231108658892, 0.025734050548330228, 0.11625191590759714}}),
  };
  return table;
}

}  // namespace

const TriangleRule& triangle_rule(int min_degree) {
  for (const auto& rule : rules())
    if (rule.degree >= min_degree) return rule;
  throw std::invalid_argument("no tabulated triangle rule of degree " + std::to_string(min_degree));
}

GaussRule gauss_legendre(std::size_t points) {
  if (points == 0) throw std::invalid_argument("gauss_legendre: need at least one point");
  const double n = static_cast<double>(points);
  // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
  const auto legendre = [&](double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= points; ++k) {
      const double kk = static_cast<double>(k);
      const double pk = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = pk;
    }
    return std::array<double, 2>{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };

  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (std::size_t i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x)[1];
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[points - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  return rule;
}

}  // namespace mmsv
