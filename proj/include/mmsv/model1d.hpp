#pragma once

// One-dimensional analogy of the EFIE with kernel G = 1 and piecewise-linear
// hat functions on a uniform mesh of [a, b]. The Galerkin matrix is the
// all-ones matrix (times h under the h-scaling), so the system is singular.
//
// Indices in this header are 0-based: unknown k lives at node x_{k+1} = a + (k+1) h.

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "mmsv/linalg.hpp"

namespace mmsv {

/// Manufactured solution on [a, b] with u(a) = u(b) = 0. `q` is the order of
/// the leading Taylor term of u at x = a.
struct Manufactured1d {
  std::function<double(double)> u;
  std::function<double(double)> du;
  int q = 1;
  double a = 0.0;
  double b = 1.0;
  std::string label;

  double length() const noexcept { return b - a; }

  static Manufactured1d sin_pi_x();          // q = 1
  static Manufactured1d sin_pi_x_squared();  // q = 2
  static Manufactured1d zero();
};

/// Which power of h the equations were divided by (beyond alpha).
enum class Scaling1d {
  by_h,          // A = h * ones, b_i = int u     (used for the truncation error)
  by_h_squared,  // A = ones,     b_i = int u / h (used for the QR solve)
};

struct System1d {
  std::size_t n = 0;         // unknowns, N - 1
  std::size_t elements = 0;  // N
  double h = 0.0;
  DenseMatrix a;
  Vector b;
  Scaling1d scaling = Scaling1d::by_h;
};

/// Composite Gauss-Legendre integral of f over [a, b] split into `elements` cells.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           std::size_t elements);

System1d assemble_1d(const Manufactured1d& mf, std::size_t elements, Scaling1d scaling);

/// Largest |beta row| of the derivative term, int phi_i' dx * int u' dx', with beta = 1.
/// The row integral of a hat-function derivative vanishes, so this is round-off.
double beta_term_residual(const Manufactured1d& mf, std::size_t elements);

/// Nodal interpolation u^n_k = u(a + (k+1) h).
Vector nominal_coefficients_1d(const Manufactured1d& mf, std::size_t elements);

/// Explicit rank-2 factorization of the transposed all-ones matrix after its
/// (row, col) entry has been scaled by (1 + delta), with P = I:
///   xi = n - 1, eta = 1 + delta, zeta = n + delta, gamma = sqrt(xi + eta^2).
/// q1 is n x 2, r1 is 2 x n, r1_pinv is 2 x n.
struct ClosedFormFactorization {
  double xi = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  double gamma = 0.0;
  DenseMatrix q1;
  DenseMatrix r1;
  DenseMatrix r1_pinv;
};

ClosedFormFactorization closed_form_with_error(std::size_t n, double delta, std::size_t row,
                                               std::size_t col);

/// u_h = Q1 (R1^T)^+ b - Q1 Q1^T u_n + u_n assembled from the explicit blocks.
Vector closed_form_solution(const ClosedFormFactorization& f, std::span<const double> b,
                            std::span<const double> u_n);

/// Leading term of the discretization error after an injected column `col`:
/// u^n_col * (-e_col + h / (b - a) * (1 - e_col)). Independent of delta.
Vector eh_tilde_prediction(std::span<const double> u_n, std::size_t col, double h,
                           double domain_length);

/// Leading term of the truncation error after injection: delta u^n_col h e_row.
Vector tau_tilde_prediction(std::span<const double> u_n, std::size_t row, std::size_t col,
                            double delta, double h);

}  // namespace mmsv
