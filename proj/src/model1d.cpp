#include "mmsv/model1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmsv/quadrature.hpp"

namespace mmsv {

namespace {

constexpr std::size_t kMinElements = 4;

// 11 Gauss-Legendre points integrate polynomials of degree 21 exactly.
constexpr std::size_t kGaussPoints1d = 11;

void check_elements(std::size_t elements) {
  if (elements < kMinElements) throw std::invalid_argument("1D mesh needs at least 4 elements");
}

}  // namespace

Manufactured1d Manufactured1d::sin_pi_x() {
  using std::numbers::pi;
  return {[](double x) { return std::sin(pi * x); },
          [](double x) { return pi * std::cos(pi * x); },
          1,
          0.0,
          1.0,
          "sin(pi x)"};
}

Manufactured1d Manufactured1d::sin_pi_x_squared() {
  using std::numbers::pi;
  return {[](double x) { return std::sin(pi * x * x); },
          [](double x) { return 2.0 * pi * x * std::cos(pi * x * x); },
          2,
          0.0,
          1.0,
          "sin(pi x^2)"};
}

Manufactured1d Manufactured1d::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, 1, 0.0, 1.0, "0"};
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           std::size_t elements) {
  static const GaussRule rule = gauss_legendre(kGaussPoints1d);
  const double h = (b - a) / static_cast<double>(elements);
  double total = 0.0;
  for (std::size_t e = 0; e < elements; ++e) {
    const double x0 = a + static_cast<double>(e) * h;
    double cell = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      cell += rule.weights[q] * f(x0 + 0.5 * h * (rule.nodes[q] + 1.0));
    total += 0.5 * h * cell;
  }
  return total;
}

System1d assemble_1d(const Manufactured1d& mf, std::size_t elements, Scaling1d scaling) {
  check_elements(elements);
  System1d sys;
  sys.elements = elements;
  sys.n = elements - 1;
  sys.h = mf.length() / static_cast<double>(elements);
  sys.scaling = scaling;

  // a(u, phi_i) / (alpha h) = int_a^b u dx for every row; the beta term vanishes.
  const double integral = integrate_composite(mf.u, mf.a, mf.b, elements);
  if (scaling == Scaling1d::by_h) {
    sys.a = DenseMatrix(sys.n, sys.n, sys.h);
    sys.b.assign(sys.n, integral);
  } else {
    sys.a = DenseMatrix(sys.n, sys.n, 1.0);
    sys.b.assign(sys.n, integral / sys.h);
  }
  return sys;
}

double beta_term_residual(const Manufactured1d& mf, std::size_t elements) {
  check_elements(elements);
  const std::size_t n = elements - 1;
  const double h = mf.length() / static_cast<double>(elements);
  const double du_integral = integrate_composite(mf.du, mf.a, mf.b, elements);

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // phi_i' = +1/h on [x_i, x_{i+1}] and -1/h on [x_{i+1}, x_{i+2}] (0-based nodes).
    const double left = mf.a + static_cast<double>(i) * h;
    const double mid = left + h;
    const auto dphi = [&](double x) {
      if (x >= left && x < mid) return 1.0 / h;
      if (x >= mid && x <= mid + h) return -1.0 / h;
      return 0.0;
    };
    const double row = integrate_composite(dphi, mf.a, mf.b, elements) * du_integral;
    worst = std::max(worst, std::abs(row));
  }
  return worst;
}

Vector nominal_coefficients_1d(const Manufactured1d& mf, std::size_t elements) {
  check_elements(elements);
  const double h = mf.length() / static_cast<double>(elements);
  Vector u_n(elements - 1);
  for (std::size_t k = 0; k < u_n.size(); ++k) u_n[k] = mf.u(mf.a + static_cast<double>(k + 1) * h);
  return u_n;
}

ClosedFormFactorization closed_form_with_error(std::size_t n, double delta, std::size_t row,
                                               std::size_t col) {
  if (n < 3) throw std::invalid_argument("closed_form_with_error: n must be at least 3");
  if (delta == 0.0) throw std::invalid_argument("closed_form_with_error: delta must be nonzero");
  if (row >= n || col >= n) throw std::invalid_argument("closed_form_with_error: index out of range");

  ClosedFormFactorization f;
  const double nd = static_cast<double>(n);
  f.xi = nd - 1.0;
  f.eta = 1.0 + delta;
  f.zeta = nd + delta;
  f.gamma = std::sqrt(f.xi + f.eta * f.eta);
  const double sxi = std::sqrt(f.xi);

  f.q1 = DenseMatrix(n, 2);
  f.r1 = DenseMatrix(2, n);
  f.r1_pinv = DenseMatrix(2, n);

  if (row == 0) {
    const double g = f.gamma;
    for (std::size_t k = 0; k < n; ++k) {
      f.q1(k, 0) = (k == col ? f.eta : 1.0) / g;
      f.q1(k, 1) = (k == col ? -sxi : f.eta / sxi) / g;
    }
    f.r1(0, 0) = g;
    f.r1(1, 0) = 0.0;
    f.r1_pinv(0, 0) = delta / (delta * g);
    f.r1_pinv(1, 0) = -f.zeta / sxi / (delta * g);
    for (std::size_t k = 1; k < n; ++k) {
      f.r1(0, k) = f.zeta / g;
      f.r1(1, k) = delta * sxi / g;
      f.r1_pinv(0, k) = 0.0;
      f.r1_pinv(1, k) = g * g / (f.xi * sxi) / (delta * g);
    }
  } else {
    const double s = 1.0 / std::sqrt(nd);
    const double pinv_scale = s / (f.xi * sxi) / delta;
    for (std::size_t k = 0; k < n; ++k) {
      f.q1(k, 0) = s;
      f.q1(k, 1) = (k == col ? sxi : -1.0 / sxi) * s;
      const bool at_row = k == row;
      f.r1(0, k) = (at_row ? f.zeta : nd) * s;
      f.r1(1, k) = at_row ? delta * sxi * s : 0.0;
      f.r1_pinv(0, k) = (at_row ? 0.0 : delta * sxi) * pinv_scale;
      f.r1_pinv(1, k) = (at_row ? nd * f.xi : -f.zeta) * pinv_scale;
    }
  }
  return f;
}

Vector closed_form_solution(const ClosedFormFactorization& f, std::span<const double> b,
                            std::span<const double> u_n) {
  const Vector u_prime = multiply(f.r1_pinv, b);
  const Vector proj = multiply(f.q1.transposed(), u_n);
  Vector diff(u_prime.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = u_prime[k] - proj[k];
  Vector u_h = multiply(f.q1, diff);
  for (std::size_t k = 0; k < u_h.size(); ++k) u_h[k] += u_n[k];
  return u_h;
}

Vector eh_tilde_prediction(std::span<const double> u_n, std::size_t col, double h,
                           double domain_length) {
  if (col >= u_n.size()) throw std::invalid_argument("eh_tilde_prediction: column out of range");
  const double ratio = h / domain_length;
  Vector out(u_n.size(), u_n[col] * ratio);
  out[col] = -u_n[col];
  return out;
}

Vector tau_tilde_prediction(std::span<const double> u_n, std::size_t row, std::size_t col,
                            double delta, double h) {
  if (row >= u_n.size() || col >= u_n.size())
    throw std::invalid_argument("tau_tilde_prediction: index out of range");
  Vector out(u_n.size(), 0.0);
  out[row] = delta * u_n[col] * h;
  return out;
}

}  // namespace mmsv
