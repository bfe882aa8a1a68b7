#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aalg/exterior.hpp"

namespace aalg {

/// Finite-dimensional real Lie algebra given by validated structure constants.
template <Scalar T>
class LieAlgebra {
 public:
  /// Rejects non-antisymmetric tables and Jacobi failures (exact, or within
  /// tolerance on the float path). Errors name a witness index tuple.
  static LieAlgebra validate(StructureConstants<T> c) {
    const int n = c.dim();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          if (!is_zero(T(c(k, i, j) + c(k, j, i)))) {
            std::ostringstream os;
            os << "c^" << k + 1 << "_{" << i + 1 << j + 1 << "} + c^" << k + 1 << "_{" << j + 1 << i + 1
               << "} != 0";
            throw Error(ErrorCode::AntisymmetryViolation, os.str());
          }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            T s(0);
            for (int m = 0; m < n; ++m)
              s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
            if (!is_zero(s)) {
              std::ostringstream os;
              os << "cyclic sum over (e" << i + 1 << ", e" << j + 1 << ", e" << k + 1 << ") has e" << l + 1
                 << " component " << to_string(s);
              throw Error(ErrorCode::JacobiViolation, os.str());
            }
          }
    return LieAlgebra(std::move(c));
  }

  int dim() const noexcept { return c_.dim(); }
  const StructureConstants<T>& constants() const noexcept { return c_; }

  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const { return c_.bracket(x, y); }
  Vector<T> basis_vector(int i) const { return Vector<T>::unit(static_cast<std::size_t>(dim()), static_cast<std::size_t>(i)); }

  /// Matrix of ad_X: column j is [X, e_j].
  Matrix<T> ad(const Vector<T>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw Error(ErrorCode::DimensionMismatch, "ad: vector size");
    const int n = dim();
    Matrix<T> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (ScalarTraits<T>::exact && is_zero(x[i])) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(k, j) += x[i] * c_(k, i, j);
    }
    return m;
  }
  Matrix<T> ad_basis(int i) const { return ad(basis_vector(i)); }

  KForm<T> d(const KForm<T>& alpha) const { return ce_differential(alpha, c_); }

  /// Basis of [g, g] (reduced row echelon rows of all brackets).
  std::vector<Vector<T>> derived_algebra() const {
    const int n = dim();
    Matrix<T> rows(static_cast<std::size_t>(n * (n - 1) / 2), static_cast<std::size_t>(n));
    std::size_t r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++r)
        for (int k = 0; k < n; ++k) rows(r, k) = c_(k, i, j);
    Echelon<T> e = rref(rows);
    std::vector<Vector<T>> out;
    for (std::size_t p = 0; p < e.pivots.size(); ++p) out.push_back(e.reduced.row(p));
    return out;
  }

  bool is_abelian() const {
    const int n = dim();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!is_zero(c_(k, i, j))) return false;
    return true;
  }

  bool is_nilpotent() const {
    // Lower central series stabilises within dim steps.
    std::vector<Vector<T>> current;
    for (int i = 0; i < dim(); ++i) current.push_back(basis_vector(i));
    for (int step = 0; step <= dim() && !current.empty(); ++step) {
      std::vector<Vector<T>> next;
      for (int i = 0; i < dim(); ++i)
        for (const auto& v : current) next.push_back(bracket(basis_vector(i), v));
      if (next.empty()) return true;
      Matrix<T> m(next.size(), static_cast<std::size_t>(dim()));
      for (std::size_t r = 0; r < next.size(); ++r)
        for (int k = 0; k < dim(); ++k) m(r, static_cast<std::size_t>(k)) = next[r][static_cast<std::size_t>(k)];
      Echelon<T> e = rref(m);
      current.clear();
      for (std::size_t p = 0; p < e.pivots.size(); ++p) current.push_back(e.reduced.row(p));
    }
    return current.empty();
  }

  LieAlgebra change_basis(const Matrix<T>& p) const { return LieAlgebra(c_.change_basis(p)); }

 private:
  explicit LieAlgebra(StructureConstants<T> c) : c_(std::move(c)) {}

  StructureConstants<T> c_;
};

/// trace(ad e_i) = 0 for every basis vector.
template <Scalar T>
bool is_unimodular(const LieAlgebra<T>& l) {
  for (int i = 0; i < l.dim(); ++i)
    if (!is_zero(l.ad_basis(i).trace())) return false;
  return true;
}

/// Linear subspace given by a linearly independent spanning set.
template <Scalar T>
class Subspace {
 public:
  Subspace() = default;
  /// Extracts a basis from an arbitrary spanning set.
  static Subspace span(int ambient, const std::vector<Vector<T>>& vectors) {
    Subspace s;
    s.ambient_ = ambient;
    if (vectors.empty()) return s;
    Matrix<T> m(vectors.size(), static_cast<std::size_t>(ambient));
    for (std::size_t r = 0; r < vectors.size(); ++r) {
      if (static_cast<int>(vectors[r].size()) != ambient)
        throw Error(ErrorCode::DimensionMismatch, "subspace: vector size");
      for (int k = 0; k < ambient; ++k) m(r, static_cast<std::size_t>(k)) = vectors[r][static_cast<std::size_t>(k)];
    }
    // Keep the original vectors that are independent of their predecessors.
    std::vector<Vector<T>> kept;
    std::size_t current_rank = 0;
    for (const auto& v : vectors) {
      kept.push_back(v);
      std::size_t r = rank(Matrix<T>::from_columns(kept, static_cast<std::size_t>(ambient)));
      if (r == current_rank)
        kept.pop_back();
      else
        current_rank = r;
    }
    s.basis_ = std::move(kept);
    return s;
  }

  /// Kernel of a non-zero covector.
  static Subspace hyperplane(const Vector<T>& covector) {
    Matrix<T> row(1, covector.size());
    for (std::size_t k = 0; k < covector.size(); ++k) row(0, k) = covector[k];
    Subspace s = span(static_cast<int>(covector.size()), null_space(row));
    s.covector_ = covector;
    return s;
  }

  int ambient_dim() const noexcept { return ambient_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<Vector<T>>& basis() const noexcept { return basis_; }
  const std::optional<Vector<T>>& covector() const noexcept { return covector_; }

  Matrix<T> basis_matrix() const { return Matrix<T>::from_columns(basis_, static_cast<std::size_t>(ambient_)); }

  bool contains(const Vector<T>& v) const {
    if (basis_.empty()) return v.is_zero();
    auto cols = basis_;
    cols.push_back(v);
    return rank(Matrix<T>::from_columns(cols, static_cast<std::size_t>(ambient_))) == basis_.size();
  }

  /// A covector whose kernel is this hyperplane.
  Vector<T> defining_covector() const {
    if (covector_) return *covector_;
    if (dim() != ambient_ - 1) throw Error(ErrorCode::DimensionMismatch, "subspace is not a hyperplane");
    auto ns = null_space(basis_matrix().transpose());
    return ns.front();
  }

 private:
  int ambient_ = 0;
  std::vector<Vector<T>> basis_;
  std::optional<Vector<T>> covector_;
};

template <Scalar T>
struct IdealSearch {
  Subspace<T> ideal;
  Vector<T> covector;
  /// Dimension of the space of admissible covectors; > 1 means the ideal is not unique.
  int solution_dim = 0;
  bool ambiguous = false;
};

/// Linear system whose non-zero solutions xi are exactly the covectors with
/// ker(xi) an abelian ideal of codimension one: d xi = 0 (so [g,g] lies in the
/// kernel, which makes any such hyperplane an ideal) and xi ^ d e^k = 0 for all
/// k (every structure 2-form is divisible by xi, so the kernel is abelian).
template <Scalar T>
Matrix<T> ideal_covector_system(const LieAlgebra<T>& l) {
  const int n = l.dim();
  std::vector<std::vector<T>> rows;
  const auto& c = l.constants();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<T> row(static_cast<std::size_t>(n), T(0));
      bool any = false;
      for (int k = 0; k < n; ++k) {
        row[static_cast<std::size_t>(k)] = c(k, i, j);
        any = any || !is_zero(c(k, i, j));
      }
      if (any) rows.push_back(std::move(row));
    }
  for (int k = 0; k < n; ++k) {
    KForm<T> dk = basis_differential(c, k);
    if (dk.terms().empty()) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int cc = b + 1; cc < n; ++cc) {
          std::vector<T> row(static_cast<std::size_t>(n), T(0));
          row[static_cast<std::size_t>(a)] += dk.coefficient({b, cc});
          row[static_cast<std::size_t>(b)] -= dk.coefficient({a, cc});
          row[static_cast<std::size_t>(cc)] += dk.coefficient({a, b});
          bool any = false;
          for (const T& x : row) any = any || !is_zero(x);
          if (any) rows.push_back(std::move(row));
        }
  }
  Matrix<T> m(rows.size(), static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int k = 0; k < n; ++k) m(r, static_cast<std::size_t>(k)) = rows[r][static_cast<std::size_t>(k)];
  return m;
}

/// Finds a codimension-one abelian ideal. The canonical choice, when several
/// exist, is the first null-space vector with variables eliminated from the
/// last basis index down; in that case the result is flagged ambiguous.
template <Scalar T>
std::optional<IdealSearch<T>> find_codim1_abelian_ideal(const LieAlgebra<T>& l) {
  const int n = l.dim();
  if (n < 2) return std::nullopt;
  Matrix<T> sys = ideal_covector_system(l);
  // Reverse the column order so elimination prefers high-index covectors.
  Matrix<T> rev(sys.rows(), sys.cols());
  for (std::size_t r = 0; r < sys.rows(); ++r)
    for (std::size_t k = 0; k < sys.cols(); ++k) rev(r, k) = sys(r, sys.cols() - 1 - k);
  auto ns = sys.rows() == 0 ? std::vector<Vector<T>>{} : null_space(rev);
  if (sys.rows() == 0)
    for (int k = 0; k < n; ++k) ns.push_back(Vector<T>::unit(static_cast<std::size_t>(n), static_cast<std::size_t>(k)));
  if (ns.empty()) return std::nullopt;
  Vector<T> xi(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) xi[static_cast<std::size_t>(k)] = ns.front()[static_cast<std::size_t>(n - 1 - k)];
  IdealSearch<T> out;
  out.ideal = Subspace<T>::hyperplane(xi);
  out.covector = xi;
  out.solution_dim = static_cast<int>(ns.size());
  out.ambiguous = ns.size() > 1;
  return out;
}

/// Checks a user-declared ideal: codimension one, abelian, and an ideal.
template <Scalar T>
void check_codim1_abelian_ideal(const LieAlgebra<T>& l, const Subspace<T>& n) {
  if (n.dim() != l.dim() - 1) throw Error(ErrorCode::DimensionMismatch, "declared ideal is not of codimension one");
  for (std::size_t a = 0; a < n.basis().size(); ++a)
    for (std::size_t b = a + 1; b < n.basis().size(); ++b)
      if (!l.bracket(n.basis()[a], n.basis()[b]).is_zero())
        throw Error(ErrorCode::IdealNotAbelian, "declared ideal is not abelian");
  for (int i = 0; i < l.dim(); ++i)
    for (const auto& x : n.basis())
      if (!n.contains(l.bracket(l.basis_vector(i), x)))
        throw Error(ErrorCode::IdealNotAbelian, "declared subspace is not an ideal");
}

}  // namespace aalg
