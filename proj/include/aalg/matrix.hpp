#pragma once

// Dense vectors and matrices over a Scalar, plus the elimination routines the
// rest of the library needs (rank, null space, inverse, linear solve).
// Pivoting is deterministic: first non-zero entry on the exact path, largest
// magnitude on the float path.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aalg/error.hpp"
#include "aalg/scalar.hpp"

namespace aalg {

template <Scalar T>
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : data_(n, T(0)) {}
  Vector(std::initializer_list<T> values) : data_(values) {}
  explicit Vector(std::vector<T> values) : data_(std::move(values)) {}

  static Vector unit(std::size_t n, std::size_t i) {
    Vector v(n);
    v[i] = T(1);
    return v;
  }

  std::size_t size() const noexcept { return data_.size(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }
  const std::vector<T>& values() const noexcept { return data_; }

  bool is_zero() const {
    for (const T& x : data_)
      if (!aalg::is_zero(x)) return false;
    return true;
  }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Vector& operator*=(const T& s) {
    for (T& x : data_) x *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const T& s, Vector a) { return a *= s; }
  friend Vector operator-(Vector a) { return a *= T(-1); }

  friend bool operator==(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!scalar_equal(a[i], b[i])) return false;
    return true;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < size(); ++i) s += (i ? ", " : "") + aalg::to_string(data_[i]);
    return s + ")";
  }

 private:
  void check_same(const Vector& o) const {
    if (o.size() != size())
      throw Error(ErrorCode::DimensionMismatch, "vector sizes differ");
  }

  std::vector<T> data_;
};

template <Scalar T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot: sizes differ");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
      for (const T& x : r) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column size");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<T> column(std::size_t j) const {
    Vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vector<T> row(std::size_t i) const {
    Vector<T> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const Vector<T>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  T trace() const {
    require_square("trace");
    T s(0);
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  bool is_zero() const {
    for (const T& x : data_)
      if (!aalg::is_zero(x)) return false;
    return true;
  }

  T max_abs() const {
    T m(0);
    for (const T& x : data_) {
      T a = scalar_abs(x);
      if (a > m) m = a;
    }
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (T& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aalg::is_zero(aik) && ScalarTraits<T>::exact) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vector<T> operator*(const Matrix& a, const Vector<T>& v) {
    if (a.cols_ != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shapes");
    Vector<T> r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      T s(0);
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (!scalar_equal(a.data_[k], b.data_[k])) return false;
    return true;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ' ';
        os << aalg::to_string((*this)(i, j));
      }
    }
    os << ']';
    return os.str();
  }

 private:
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  void require_square(const char* what) const {
    if (!is_square()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": not square");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

template <Scalar T>
Matrix<T> block_diagonal(const std::vector<Matrix<T>>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix<T> m(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return m;
}

template <Scalar T>
struct Echelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form.
template <Scalar T>
Echelon<T> rref(Matrix<T> m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    if constexpr (ScalarTraits<T>::exact) {
      for (std::size_t i = r; i < m.rows(); ++i)
        if (!is_zero(m(i, c))) {
          best = i;
          break;
        }
    } else {
      T bestAbs(0);
      for (std::size_t i = r; i < m.rows(); ++i) {
        T a = scalar_abs(m(i, c));
        if (a > bestAbs) {
          bestAbs = a;
          best = i;
        }
      }
      if (best < m.rows() && is_zero(bestAbs)) best = m.rows();
    }
    if (best == m.rows()) {
      if constexpr (!ScalarTraits<T>::exact)
        for (std::size_t i = r; i < m.rows(); ++i) m(i, c) = T(0);
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) {
        if (i != r) m(i, c) = T(0);
        continue;
      }
      T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <Scalar T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

/// Basis of the null space {x : m x = 0}, one vector per free column, in
/// increasing free-column order.
template <Scalar T>
std::vector<Vector<T>> null_space(const Matrix<T>& m) {
  Echelon<T> e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  std::vector<Vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<T> x(m.cols());
    x[f] = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Solves m x = b; returns nullopt when inconsistent. Free variables are set to zero.
template <Scalar T>
std::optional<Vector<T>> solve(const Matrix<T>& m, const Vector<T>& b) {
  if (b.size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: rhs size");
  Matrix<T> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Echelon<T> e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector<T> x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  if constexpr (!ScalarTraits<T>::exact) {
    // Residual check catches rank decisions that hid an inconsistency.
    Vector<T> res = m * x - b;
    T scale(1);
    for (const T& v : b) scale = std::max(scale, scalar_abs(v));
    for (const T& v : res)
      if (scalar_abs(v) > 1e3 * tolerance() * scale) return std::nullopt;
  }
  return x;
}

template <Scalar T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse: not square");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  Echelon<T> e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
    throw Error(ErrorCode::Singular, "matrix is singular");
  return e.reduced.block(0, n, n, n);
}

template <Scalar T>
T determinant(Matrix<T> m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant: not square");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    T bestAbs(0);
    for (std::size_t i = c; i < n; ++i) {
      if constexpr (ScalarTraits<T>::exact) {
        if (sgn(m(i, c)) != 0) {
          best = i;
          break;
        }
      } else {
        T a = scalar_abs(m(i, c));
        if (a > bestAbs) {
          bestAbs = a;
          best = i;
        }
      }
    }
    if (best == n || (!ScalarTraits<T>::exact && bestAbs == T(0))) return T(0);
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(best, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (ScalarTraits<T>::exact && is_zero(m(i, c))) continue;
      T f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Converts a rational matrix into another scalar kind.
template <Scalar T>
Matrix<T> convert_matrix(const Matrix<Rational>& m) {
  Matrix<T> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = ScalarTraits<T>::from_rational(m(i, j));
  return r;
}

template <Scalar T>
Vector<T> convert_vector(const Vector<Rational>& v) {
  Vector<T> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = ScalarTraits<T>::from_rational(v[i]);
  return r;
}

}  // namespace aalg
