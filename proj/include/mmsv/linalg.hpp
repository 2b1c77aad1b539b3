#pragma once

// Dense linear algebra for practically singular Galerkin systems: a
// Householder QR with column pivoting and the minimal-change solve that picks,
// among all solutions of A u = b, the one closest to a nominal vector.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmsv {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return entries_; }

  DenseMatrix transposed() const;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Vector multiply(const DenseMatrix& a, std::span<const double> x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
double norm_inf(std::span<const double> x) noexcept;
double norm2(std::span<const double> x) noexcept;

inline constexpr double kDefaultRankTolerance = 1e-10;

/// A P = Q R with Q orthogonal (rows x rows), R upper trapezoidal
/// (rows x cols) and P the column permutation: column k of A P is column
/// perm[k] of A. rank counts |R_kk| > rank_tolerance * |R_00|.
struct PivotedQr {
  DenseMatrix q;
  DenseMatrix r;
  std::vector<std::size_t> perm;
  std::size_t rank = 0;
  double rank_tolerance = kDefaultRankTolerance;

  DenseMatrix permutation_matrix() const;
};

/// Householder QR with column pivoting. The pivot is the remaining column
/// with the largest norm; ties go to the lowest column index.
PivotedQr pivoted_qr(const DenseMatrix& a, double rank_tolerance = kDefaultRankTolerance);

struct MinimalChangeSolution {
  Vector u_h;
  std::size_t rank_used = 0;
  double residual_norm = 0.0;  // ||A u_h - b||_inf
};

/// Raised when the rank-reduced system cannot reproduce b.
class InconsistentSystemError : public std::runtime_error {
 public:
  InconsistentSystemError(double residual, double tolerance);
  double residual() const noexcept { return residual_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double residual_;
  double tolerance_;
};

/// Solution of A u = b closest (2-norm) to u_nominal.
///
/// Factors A^T P = Q1 R1 with the pivoted QR, stopping once the remaining
/// columns fall below the rank tolerance, then forms
///   u' = (R1^T)^+ P^T b        (forward substitution on the leading block)
///   u_h = Q1 u' - Q1 Q1^T u_nominal + u_nominal.
/// Q2 is never formed. Throws InconsistentSystemError when
/// ||A u_h - b||_inf > 1e-8 (||A||_max ||u_h||_inf + ||b||_inf).
MinimalChangeSolution minimal_change_solve(const DenseMatrix& a, std::span<const double> b,
                                           std::span<const double> u_nominal,
                                           double rank_tolerance = kDefaultRankTolerance);

}  // namespace mmsv
