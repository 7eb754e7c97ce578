// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra: the matrix type, LU solves, a cyclic Jacobi
// Hermitian eigensolver, singular values, unitarily invariant norms, the
// Loewner order and the principal square root.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "amm/error.hpp"

namespace amm {

using cplx = std::complex<double>;

/// Normalized Loewner-order slack shared by every order test in the library.
inline constexpr double loewner_tolerance = 1e-7;

/// Dense row-major complex matrix.
///
/// Most operations require a square matrix; rectangular shapes exist only for
/// the isometries and Kraus operators used by positive linear maps.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : Matrix(n, n) {}
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const cplx> d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix diagonal(std::initializer_list<cplx> d) {
    return diagonal(std::span<const cplx>(d.begin(), d.size()));
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw InvalidInput("from_rows: ragged row list");
      std::size_t j = 0;
      for (const cplx& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  /// 1x1 matrix holding a scalar.
  static Matrix scalar(cplx v) {
    Matrix m(1);
    m(0, 0) = v;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  /// Dimension of a square matrix.
  std::size_t size() const noexcept { return rows_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  cplx trace() const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  Matrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  Matrix& operator/=(double s) {
    for (auto& v : data_) v /= s;
    return *this;
  }

  /// this += s * o without a temporary.
  Matrix& add_scaled(cplx s, const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }
  Matrix& add_scaled(double s, const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator/(Matrix a, double s) { return a /= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix product: inner dimensions differ");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx* ri = &r.data_[i * r.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        const cplx* bk = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) ri[j] += aik * bk[j];
      }
    }
    return r;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline std::string describe(const Matrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

inline void require_square(const Matrix& a, const char* who) {
  if (!a.is_square() || a.empty()) throw InvalidInput(std::string(who) + ": expected a non-empty square matrix, got " + describe(a));
}

inline void require_finite(const Matrix& a, const char* who) {
  if (!a.all_finite()) throw InvalidInput(std::string(who) + ": non-finite entry");
}

/// Induced infinity norm (maximum absolute row sum).
inline double norm_inf(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double norm_fro(const Matrix& a) {
  double s = 0.0;
  for (const cplx& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

/// (A + A*) / 2.
inline Matrix hermitian_part(const Matrix& a) {
  require_square(a, "hermitian_part");
  require_finite(a, "hermitian_part");
  const std::size_t n = a.size();
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

/// (A - A*) / (2i).
inline Matrix imaginary_part(const Matrix& a) {
  require_square(a, "imaginary_part");
  require_finite(a, "imaginary_part");
  const std::size_t n = a.size();
  Matrix r(n);
  const cplx half_over_i(0.0, -0.5);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = a(i, i).imag();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = half_over_i * (a(i, j) - std::conj(a(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    require_square(lu_, "lu_solve");
    require_finite(lu_, "lu_solve");
    const std::size_t n = lu_.size();
    const double threshold = 1e-13 * norm_inf(lu_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best > threshold)) {
        std::ostringstream os;
        os << "singular matrix: pivot " << k << " has magnitude " << best;
        throw SingularMatrixError(k, os.str());
      }
      if (p != k) {
        std::swap(perm_[p], perm_[k]);
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
      }
      const cplx inv_pivot = 1.0 / lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const cplx l = lu_(i, k) * inv_pivot;
        lu_(i, k) = l;
        if (l == 0.0) continue;
        cplx* row_i = &lu_(i, 0);
        const cplx* row_k = &lu_(k, 0);
        for (std::size_t j = k + 1; j < n; ++j) row_i[j] -= l * row_k[j];
      }
    }
  }

  std::size_t size() const noexcept { return lu_.size(); }

  Matrix solve(const Matrix& b) const {
    const std::size_t n = lu_.size();
    if (b.rows() != n) throw InvalidInput("lu_solve: right-hand side has " + describe(b) + " shape");
    const std::size_t m = b.cols();
    Matrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x(i, j) = b(perm_[i], j);
    for (std::size_t i = 1; i < n; ++i) {
      cplx* xi = &x(i, 0);
      for (std::size_t k = 0; k < i; ++k) {
        const cplx l = lu_(i, k);
        if (l == 0.0) continue;
        const cplx* xk = &x(k, 0);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= l * xk[j];
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      cplx* xi = &x(i, 0);
      for (std::size_t k = i + 1; k < n; ++k) {
        const cplx u = lu_(i, k);
        const cplx* xk = &x(k, 0);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= u * xk[j];
      }
      const cplx inv = 1.0 / lu_(i, i);
      for (std::size_t j = 0; j < m; ++j) xi[j] *= inv;
    }
    return x;
  }

  Matrix inverse() const { return solve(Matrix::identity(lu_.size())); }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A X = B.
inline Matrix lu_solve(const Matrix& a, const Matrix& b) { return LuDecomposition(a).solve(b); }

inline Matrix inverse(const Matrix& a) { return LuDecomposition(a).inverse(); }

// ---------------------------------------------------------------------------
// Hermitian eigenproblem (cyclic complex Jacobi)

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors
};

namespace detail {

inline double hermitian_defect(const Matrix& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) s += std::abs(h(i, j) - std::conj(h(j, i)));
    worst = std::max(worst, s);
  }
  return worst;
}

inline Matrix checked_symmetrize(const Matrix& h, double rel_tol, const char* who) {
  require_square(h, who);
  require_finite(h, who);
  const double defect = hermitian_defect(h);
  if (defect > rel_tol * (1.0 + norm_inf(h))) {
    std::ostringstream os;
    os << who << ": input is not Hermitian (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  return hermitian_part(h);
}

// Diagonalizes a (already Hermitian) in place; accumulates rotations into v when requested.
inline void jacobi_diagonalize(Matrix& a, Matrix* v) {
  const std::size_t n = a.size();
  const double scale = norm_fro(a);
  if (scale == 0.0 || n == 1) return;
  const double target = 1e-14 * scale;
  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(a(i, j));
    off = std::sqrt(off);
    if (off <= target) return;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;             // G(p, q)
        const cplx sq = -s * std::conj(phase);  // G(q, p)

        // A <- A G (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp + sq * akq;
          a(k, q) = sp * akp + c * akq;
        }
        // A <- G* A (rows p, q)
        const cplx csp = std::conj(sp);
        const cplx csq = std::conj(sq);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + csq * aqk;
          a(q, k) = csp * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (v != nullptr) {
          Matrix& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = vm(k, p);
            const cplx vkq = vm(k, q);
            vm(k, p) = c * vkp + sq * vkq;
            vm(k, q) = sp * vkp + c * vkq;
          }
        }
      }
    }
  }
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off += std::norm(a(i, j));
  off = std::sqrt(off);
  if (off > 1e-10 * scale) throw NumericFailure(off, "hermitian_eigen: Jacobi sweeps did not converge");
}

// Implicit QL on a real symmetric tridiagonal matrix (diagonal d, off-diagonal e with
// e[i] coupling i and i+1). Only the first component of each eigenvector is tracked.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const long n = static_cast<long>(d.size());
  z.assign(d.size(), 0.0);
  if (n == 0) return;
  z[0] = 1.0;
  e.resize(d.size(), 0.0);
  e[n - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (long l = 0; l < n; ++l) {
    for (int iter = 0;; ++iter) {
      long m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter == 60) throw NumericFailure(std::abs(e[l]), "tridiagonal_ql: no convergence");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (long i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        const double zf = z[i + 1];
        z[i + 1] = s * z[i] + c * zf;
        z[i] = c * z[i] - s * zf;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

// Householder reduction of a Hermitian matrix to tridiagonal form. Returns the diagonal
// and the moduli of the off-diagonal, which determine the spectrum.
inline void hermitian_tridiagonal(Matrix a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.size();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<cplx> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += std::norm(a(i, k));
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] += phase * alpha;
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vv += std::norm(v[i]);
    const double tau = 2.0 / vv;
    // p = tau A v, K = tau/2 v*p, w = p - K v; A <- A - v w* - w v*
    cplx vp = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = tau * s;
      vp += std::conj(v[i]) * p[i];
    }
    const double kk = 0.5 * tau * vp.real();
    for (std::size_t i = k + 1; i < n; ++i) p[i] -= kk * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
    e[k] = alpha;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  if (n >= 2) e[n - 2] = std::abs(a(n - 1, n - 2));
}

}  // namespace detail

inline HermitianEigen hermitian_eigen(const Matrix& h) {
  Matrix a = detail::checked_symmetrize(h, 1e-12, "hermitian_eigen");
  const std::size_t n = a.size();
  Matrix v = Matrix::identity(n);
  detail::jacobi_diagonalize(a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Eigenvalues only (ascending); skips the rotation accumulation.
inline std::vector<double> hermitian_eigenvalues(const Matrix& h) {
  const Matrix a = detail::checked_symmetrize(h, 1e-12, "hermitian_eigenvalues");
  std::vector<double> values, off, first;
  detail::hermitian_tridiagonal(a, values, off);
  detail::tridiagonal_ql(values, off, first);
  std::sort(values.begin(), values.end());
  return values;
}

/// U f(D) U* for a Hermitian matrix with eigen-decomposition U D U*.
template <class F>
Matrix hermitian_apply(const HermitianEigen& eig, F&& fn) {
  const std::size_t n = eig.values.size();
  Matrix r(n);
  std::vector<double> fv(n);
  for (std::size_t k = 0; k < n; ++k) fv[k] = fn(eig.values[k]);
  const Matrix& u = eig.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * fv[k] * std::conj(u(j, k));
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
  for (std::size_t i = 0; i < n; ++i) r(i, i) = r(i, i).real();
  return r;
}

// ---------------------------------------------------------------------------
// Singular values and unitarily invariant norms

/// Ascending singular values, from the eigenvalues of A*A.
inline std::vector<double> singular_values(const Matrix& a) {
  require_square(a, "singular_values");
  require_finite(a, "singular_values");
  std::vector<double> ev = hermitian_eigenvalues(hermitian_part(a.adjoint() * a));
  for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
  return ev;
}

class NormKind {
 public:
  enum class Tag { operator_norm, frobenius, trace, kyfan };

  static NormKind operator_norm() { return NormKind(Tag::operator_norm, 0); }
  static NormKind frobenius() { return NormKind(Tag::frobenius, 0); }
  static NormKind trace() { return NormKind(Tag::trace, 0); }
  static NormKind kyfan(int k) { return NormKind(Tag::kyfan, k); }

  Tag tag() const noexcept { return tag_; }
  int k() const noexcept { return k_; }

  std::string name() const {
    switch (tag_) {
      case Tag::operator_norm: return "operator";
      case Tag::frobenius: return "frobenius";
      case Tag::trace: return "trace";
      case Tag::kyfan: return "kyfan(" + std::to_string(k_) + ")";
    }
    return "?";
  }

  friend bool operator==(const NormKind&, const NormKind&) = default;

 private:
  NormKind(Tag tag, int k) : tag_(tag), k_(k) {}
  Tag tag_;
  int k_;
};

/// Symmetric gauge function of the (ascending) singular values.
inline double gauge(std::span<const double> sv, const NormKind& kind) {
  switch (kind.tag()) {
    case NormKind::Tag::operator_norm: return sv.empty() ? 0.0 : sv.back();
    case NormKind::Tag::frobenius: {
      double s = 0.0;
      for (double v : sv) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::Tag::trace: return std::accumulate(sv.begin(), sv.end(), 0.0);
    case NormKind::Tag::kyfan: {
      if (kind.k() < 1 || static_cast<std::size_t>(kind.k()) > sv.size())
        throw InvalidParameter("kyfan(k): k=" + std::to_string(kind.k()) + " outside [1, " + std::to_string(sv.size()) + "]");
      return std::accumulate(sv.end() - kind.k(), sv.end(), 0.0);
    }
  }
  return 0.0;
}

inline double uinorm(const Matrix& a, const NormKind& kind) {
  const std::vector<double> sv = singular_values(a);
  return gauge(sv, kind);
}

inline double opnorm(const Matrix& a) { return uinorm(a, NormKind::operator_norm()); }

/// Operator norm of a Hermitian matrix (largest |eigenvalue|).
inline double hermitian_opnorm(const Matrix& h) {
  const std::vector<double> ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

// ---------------------------------------------------------------------------
// Loewner order

struct LoewnerVerdict {
  double margin;
  bool holds;
};

/// Tests X <= Y: margin is lambda_min(Y - X) / (1 + ||X|| + ||Y||).
inline LoewnerVerdict loewner_leq(const Matrix& x, const Matrix& y) {
  const Matrix hx = detail::checked_symmetrize(x, 1e-10, "loewner_leq");
  const Matrix hy = detail::checked_symmetrize(y, 1e-10, "loewner_leq");
  if (hx.size() != hy.size()) throw InvalidInput("loewner_leq: dimension mismatch");
  const double gap = hermitian_eigenvalues(hy - hx).front();
  const double margin = gap / (1.0 + hermitian_opnorm(hx) + hermitian_opnorm(hy));
  return {margin, margin >= -loewner_tolerance};
}

// ---------------------------------------------------------------------------
// Principal square root

/// lambda_min(Re A) / (1 + ||A||_op); positive iff Re A is positive definite.
inline double accretivity_margin(const Matrix& a) {
  require_square(a, "accretivity");
  require_finite(a, "accretivity");
  const double lmin = hermitian_eigenvalues(hermitian_part(a)).front();
  return lmin / (1.0 + opnorm(a));
}

/// Throws PreconditionError unless A is strictly accretive.
inline void require_accretive(const Matrix& a, const char* who) {
  const double margin = accretivity_margin(a);
  if (!(margin > loewner_tolerance)) {
    std::ostringstream os;
    os << who << ": operand is not accretive (margin " << margin << ")";
    throw PreconditionError(margin, os.str());
  }
}

/// Denman-Beavers iteration; the result has spectrum in the open right half-plane.
inline Matrix principal_sqrt(const Matrix& a) {
  require_accretive(a, "principal_sqrt");
  const std::size_t n = a.size();
  Matrix x = a;
  Matrix y = Matrix::identity(n);
  for (int k = 0; k < 100; ++k) {
    const Matrix xi = inverse(x);
    const Matrix yi = inverse(y);
    Matrix xn = 0.5 * (x + yi);
    Matrix yn = 0.5 * (y + xi);
    const double step = norm_inf(xn - x);
    const double size = norm_inf(x);
    x = std::move(xn);
    y = std::move(yn);
    if (step <= 1e-13 * size) break;
  }
  const double residual = norm_inf(x * x - a);
  if (!(residual <= 1e-9 * (1.0 + norm_inf(a)))) {
    std::ostringstream os;
    os << "principal_sqrt: Denman-Beavers residual " << residual;
    throw NumericFailure(residual, os.str());
  }
  return x;
}

}  // namespace amm
