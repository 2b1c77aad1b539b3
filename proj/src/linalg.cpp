#include "mmsv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace mmsv {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); });
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("multiply: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double norm_inf(std::span<const double> x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm2(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

DenseMatrix PivotedQr::permutation_matrix() const {
  DenseMatrix p(perm.size(), perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) p(perm[k], k) = 1.0;
  return p;
}

namespace {

// Householder QR with column pivoting on a matrix held column by column.
// Column c occupies work[c * m, (c + 1) * m). After factoring, the upper
// triangle of the first `steps` columns holds R; reflector k is
// I - scale[k] v_k v_k^T with v_k stored in vectors[k] (entries below k used).
struct CompactQr {
  std::size_t m = 0;
  std::size_t ncols = 0;
  std::vector<double> work;
  std::vector<std::vector<double>> vectors;
  std::vector<double> scale;
  std::vector<std::size_t> perm;
  std::size_t steps = 0;
  std::size_t rank = 0;

  double r(std::size_t i, std::size_t j) const { return work[j * m + i]; }
};

CompactQr factor_columns(std::vector<double> columns, std::size_t m, std::size_t ncols,
                         double rank_tolerance, bool stop_at_rank) {
  CompactQr f;
  f.m = m;
  f.ncols = ncols;
  f.work = std::move(columns);
  f.perm.resize(ncols);
  for (std::size_t c = 0; c < ncols; ++c) f.perm[c] = c;

  const std::size_t max_steps = std::min(m, ncols);
  double leading = 0.0;
  std::vector<double> col_norm(ncols);

  for (std::size_t k = 0; k < max_steps; ++k) {
    // Norms are recomputed from the trailing block so the pivot sequence does
    // not depend on downdating round-off.
    for (std::size_t c = k; c < ncols; ++c) {
      const double* col = f.work.data() + c * m;
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += col[i] * col[i];
      col_norm[c] = std::sqrt(s);
    }
    std::size_t pivot = k;
    for (std::size_t c = k + 1; c < ncols; ++c)
      if (col_norm[c] > col_norm[pivot]) pivot = c;

    const double alpha_norm = col_norm[pivot];
    if (k == 0) leading = alpha_norm;
    const bool negligible = alpha_norm <= rank_tolerance * leading || alpha_norm == 0.0;
    if (stop_at_rank && negligible) break;

    if (pivot != k) {
      std::swap_ranges(f.work.begin() + static_cast<std::ptrdiff_t>(k * m),
                       f.work.begin() + static_cast<std::ptrdiff_t>((k + 1) * m),
                       f.work.begin() + static_cast<std::ptrdiff_t>(pivot * m));
      std::swap(f.perm[k], f.perm[pivot]);
    }

    double* xk = f.work.data() + k * m;
    std::vector<double> v(m, 0.0);
    double scale = 0.0;
    if (alpha_norm > 0.0) {
      const double alpha = xk[k] >= 0.0 ? -alpha_norm : alpha_norm;
      for (std::size_t i = k; i < m; ++i) v[i] = xk[i];
      v[k] -= alpha;
      double vv = 0.0;
      for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
      if (vv > 0.0) {
        scale = 2.0 / vv;
        for (std::size_t c = k + 1; c < ncols; ++c) {
          double* col = f.work.data() + c * m;
          double dot = 0.0;
          for (std::size_t i = k; i < m; ++i) dot += v[i] * col[i];
          const double s = scale * dot;
          for (std::size_t i = k; i < m; ++i) col[i] -= s * v[i];
        }
      }
      xk[k] = alpha;
      for (std::size_t i = k + 1; i < m; ++i) xk[i] = 0.0;
    }
    f.vectors.push_back(std::move(v));
    f.scale.push_back(scale);
    f.steps = k + 1;
    if (!negligible) f.rank = k + 1;
  }
  return f;
}

// Q[:, 0:ncols_out] = H_0 H_1 ... H_{steps-1} I[:, 0:ncols_out], stored column-major.
std::vector<double> form_q_columns(const CompactQr& f, std::size_t ncols_out) {
  const std::size_t m = f.m;
  std::vector<double> q(m * ncols_out, 0.0);
  for (std::size_t c = 0; c < ncols_out; ++c) q[c * m + c] = 1.0;
  for (std::size_t k = f.steps; k-- > 0;) {
    const auto& v = f.vectors[k];
    const double scale = f.scale[k];
    if (scale == 0.0) continue;
    for (std::size_t c = 0; c < ncols_out; ++c) {
      double* col = q.data() + c * m;
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i] * col[i];
      const double s = scale * dot;
      for (std::size_t i = k; i < m; ++i) col[i] -= s * v[i];
    }
  }
  return q;
}

void check_factorizable(const DenseMatrix& a, double rank_tolerance) {
  if (a.empty()) throw std::invalid_argument("pivoted QR: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("pivoted QR: non-finite entry");
  if (!(rank_tolerance > 0.0 && rank_tolerance < 1.0))
    throw std::invalid_argument("pivoted QR: rank tolerance must lie in (0, 1)");
}

}  // namespace

PivotedQr pivoted_qr(const DenseMatrix& a, double rank_tolerance) {
  check_factorizable(a, rank_tolerance);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  std::vector<double> columns(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) columns[j * m + i] = a(i, j);

  const CompactQr f = factor_columns(std::move(columns), m, n, rank_tolerance, false);

  PivotedQr out;
  out.rank_tolerance = rank_tolerance;
  out.perm = f.perm;
  out.rank = f.rank;
  out.r = DenseMatrix(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= std::min(j, m - 1); ++i) out.r(i, j) = f.r(i, j);

  const auto q = form_q_columns(f, m);
  out.q = DenseMatrix(m, m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < m; ++i) out.q(i, c) = q[c * m + i];
  return out;
}

InconsistentSystemError::InconsistentSystemError(double residual, double tolerance)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "inconsistent system: residual " << residual << " exceeds tolerance " << tolerance;
        return os.str();
      }()),
      residual_(residual),
      tolerance_(tolerance) {}

MinimalChangeSolution minimal_change_solve(const DenseMatrix& a, std::span<const double> b,
                                           std::span<const double> u_nominal,
                                           double rank_tolerance) {
  check_factorizable(a, rank_tolerance);
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("minimal_change_solve: matrix must be square");
  if (b.size() != n || u_nominal.size() != n)
    throw std::invalid_argument("minimal_change_solve: vector length mismatch");

  // Columns of A^T are the rows of A, so the row-major storage of A is
  // already the column-major storage of A^T.
  std::vector<double> columns(a.data().begin(), a.data().end());
  const CompactQr f = factor_columns(std::move(columns), n, n, rank_tolerance, true);
  const std::size_t rank = f.rank;

  // R1^T y = P^T b restricted to the leading rank x rank (lower-triangular) block.
  Vector y(rank, 0.0);
  for (std::size_t k = 0; k < rank; ++k) {
    double s = b[f.perm[k]];
    for (std::size_t l = 0; l < k; ++l) s -= f.r(l, k) * y[l];
    y[k] = s / f.r(k, k);
  }

  const auto q1 = form_q_columns(f, rank);
  Vector correction(rank);
  for (std::size_t c = 0; c < rank; ++c) {
    const double* col = q1.data() + c * n;
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += col[i] * u_nominal[i];
    correction[c] = y[c] - dot;
  }

  MinimalChangeSolution sol;
  sol.rank_used = rank;
  sol.u_h.assign(u_nominal.begin(), u_nominal.end());
  for (std::size_t c = 0; c < rank; ++c) {
    const double* col = q1.data() + c * n;
    for (std::size_t i = 0; i < n; ++i) sol.u_h[i] += col[i] * correction[c];
  }

  const Vector au = multiply(a, sol.u_h);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(au[i] - b[i]));
  sol.residual_norm = residual;
  const double tolerance = 1e-8 * (a.max_abs() * norm_inf(sol.u_h) + norm_inf(b));
  if (!(residual <= tolerance)) throw InconsistentSystemError(residual, tolerance);
  return sol;
}

}  // namespace mmsv
