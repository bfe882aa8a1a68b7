#pragma once

// Alternating forms over a fixed basis, the wedge product, and the
// Chevalley-Eilenberg differential.
//
// Sign convention: on 1-forms d alpha(X, Y) = -alpha([X, Y]), extended to
// higher degrees as a graded derivation. With this convention a structure
// equation tuple such as (f16, f26, ...) lists d f^1, d f^2, ... directly, and
// e^i ^ e^j (e_i, e_j) = 1 (no 1/k! normalisation).
//
// Indices are 0-based in code; to_string() prints them 1-based (f^{12}).

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "aalg/matrix.hpp"

namespace aalg {

/// Bitmask of basis indices; bit i set means e^i is a factor.
using IndexMask = std::uint32_t;

inline constexpr int kMaxDim = 31;

inline std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  while (m) {
    int i = std::countr_zero(m);
    out.push_back(i);
    m &= m - 1;
  }
  return out;
}

/// Sign of e^I ^ e^J relative to e^{I u J}; zero when I and J overlap.
inline int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (IndexMask bb = b; bb; bb &= bb - 1) {
    int j = std::countr_zero(bb);
    IndexMask above = j + 1 >= 32 ? 0u : (~IndexMask{0} << (j + 1));
    inversions += std::popcount(a & above);
  }
  return (inversions % 2) ? -1 : 1;
}

template <Scalar T>
class KForm {
 public:
  KForm() = default;
  KForm(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 0 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "form dimension out of range");
    if (degree < 0) throw Error(ErrorCode::DimensionMismatch, "negative degree");
  }

  /// e^{i_1} ^ ... ^ e^{i_k} for arbitrary (possibly unsorted) indices.
  static KForm monomial(int dim, std::initializer_list<int> indices, T coeff = T(1)) {
    return monomial(dim, std::vector<int>(indices), coeff);
  }
  static KForm monomial(int dim, const std::vector<int>& indices, T coeff = T(1)) {
    KForm f(dim, static_cast<int>(indices.size()));
    IndexMask m = 0;
    int sign = 1;
    for (int i : indices) {
      if (i < 0 || i >= dim) throw Error(ErrorCode::IndexOutOfRange, "form index out of range");
      IndexMask bit = IndexMask{1} << i;
      sign *= wedge_sign(m, bit);
      if (sign == 0) return f;
      m |= bit;
    }
    f.add_term(m, sign < 0 ? T(-coeff) : coeff);
    return f;
  }

  static KForm scalar(int dim, const T& value) {
    KForm f(dim, 0);
    f.add_term(0, value);
    return f;
  }

  /// 1-form with the given coefficients.
  static KForm one_form(const Vector<T>& coeffs) {
    KForm f(static_cast<int>(coeffs.size()), 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) f.add_term(IndexMask{1} << i, coeffs[i]);
    return f;
  }

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const std::map<IndexMask, T>& terms() const noexcept { return terms_; }

  T coefficient(IndexMask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }
  T coefficient(const std::vector<int>& sorted_indices) const {
    IndexMask m = 0;
    for (int i : sorted_indices) m |= IndexMask{1} << i;
    return coefficient(m);
  }

  /// Coefficients of a 1-form as a vector.
  Vector<T> as_vector() const {
    if (degree_ != 1) throw Error(ErrorCode::DimensionMismatch, "as_vector needs a 1-form");
    Vector<T> v(dim_);
    for (const auto& [m, c] : terms_) v[std::countr_zero(m)] = c;
    return v;
  }

  void add_term(IndexMask m, const T& c) {
    if (std::popcount(m) != degree_) throw Error(ErrorCode::DimensionMismatch, "term degree mismatch");
    if (ScalarTraits<T>::exact && aalg::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if constexpr (ScalarTraits<T>::exact)
        if (aalg::is_zero(it->second)) terms_.erase(it);
    }
  }

  bool is_zero() const {
    for (const auto& [m, c] : terms_)
      if (!aalg::is_zero(c)) return false;
    return true;
  }

  T max_abs() const {
    T mx(0);
    for (const auto& [m, c] : terms_) {
      T a = scalar_abs(c);
      if (a > mx) mx = a;
    }
    return mx;
  }

  KForm& operator+=(const KForm& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  KForm& operator-=(const KForm& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, T(-c));
    return *this;
  }
  KForm& operator*=(const T& s) {
    if (ScalarTraits<T>::exact && aalg::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(const T& s, KForm a) { return a *= s; }
  friend KForm operator-(KForm a) { return a *= T(-1); }

  /// Equality exact on the rational path, within tolerance on the float path.
  friend bool operator==(const KForm& a, const KForm& b) {
    if (a.dim_ != b.dim_ || a.degree_ != b.degree_) return false;
    return (a - b).is_zero();
  }

  /// alpha(X_1, ..., X_k) using the determinant convention.
  T evaluate(std::span<const Vector<T>> args) const {
    if (static_cast<int>(args.size()) != degree_)
      throw Error(ErrorCode::DimensionMismatch, "evaluate: wrong number of arguments");
    for (const auto& a : args)
      if (static_cast<int>(a.size()) != dim_) throw Error(ErrorCode::DimensionMismatch, "evaluate: vector size");
    if (degree_ == 0) return coefficient(0);
    T total(0);
    const std::size_t k = static_cast<std::size_t>(degree_);
    for (const auto& [m, c] : terms_) {
      std::vector<int> idx = mask_indices(m);
      Matrix<T> minor(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) minor(a, b) = args[b][static_cast<std::size_t>(idx[a])];
      total += c * determinant(minor);
    }
    return total;
  }

  /// (M^* alpha)(X_1, ..., X_k) = alpha(M X_1, ..., M X_k).
  KForm pullback(const Matrix<T>& m) const {
    if (static_cast<int>(m.rows()) != dim_ || static_cast<int>(m.cols()) != dim_)
      throw Error(ErrorCode::DimensionMismatch, "pullback: matrix shape");
    KForm out(dim_, degree_);
    if (degree_ == 0) {
      out.terms_ = terms_;
      return out;
    }
    std::vector<Vector<T>> images;
    for (int j = 0; j < dim_; ++j) images.push_back(m.column(static_cast<std::size_t>(j)));
    for_each_mask(dim_, degree_, [&](IndexMask target) {
      std::vector<Vector<T>> args;
      for (int i : mask_indices(target)) args.push_back(images[static_cast<std::size_t>(i)]);
      T v = evaluate(args);
      out.add_term(target, v);
    });
    return out;
  }

  std::string to_string(const char* symbol = "e") const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (aalg::is_zero(c)) continue;
      if (!first) os << " + ";
      first = false;
      os << '(' << aalg::to_string(c) << ')';
      if (m) {
        os << ' ' << symbol << '^';
        auto idx = mask_indices(m);
        const bool comma = dim_ >= 10;
        for (std::size_t a = 0; a < idx.size(); ++a) {
          if (comma && a) os << ',';
          os << idx[a] + 1;
        }
      }
    }
    return first ? "0" : os.str();
  }

  /// Visits every k-subset of {0..dim-1} in increasing mask order.
  template <class F>
  static void for_each_mask(int dim, int k, F&& f) {
    if (k == 0) {
      f(IndexMask{0});
      return;
    }
    if (k > dim) return;
    IndexMask m = (IndexMask{1} << k) - 1;
    const IndexMask limit = IndexMask{1} << dim;
    while (m < limit) {
      f(m);
      IndexMask t = m | (m - 1);
      m = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(m) + 1));
    }
  }

 private:
  void check_compatible(const KForm& o) const {
    if (o.dim_ != dim_ || o.degree_ != degree_)
      throw Error(ErrorCode::DimensionMismatch, "forms differ in dimension or degree");
  }

  int dim_ = 0;
  int degree_ = 0;
  std::map<IndexMask, T> terms_;
};

template <Scalar T>
KForm<T> wedge(const KForm<T>& a, const KForm<T>& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "wedge: dimensions differ");
  KForm<T> out(a.dim(), a.degree() + b.degree());
  if (a.degree() + b.degree() > a.dim()) return out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      T c = ca * cb;
      out.add_term(ma | mb, s < 0 ? T(-c) : c);
    }
  return out;
}

/// Wedge power alpha^k (without factorial normalisation); alpha^0 = 1.
template <Scalar T>
KForm<T> wedge_power(const KForm<T>& a, int k) {
  KForm<T> r = KForm<T>::scalar(a.dim(), T(1));
  for (int i = 0; i < k; ++i) r = wedge(r, a);
  return r;
}

/// Raw bracket table: c(k, i, j) is the e_k component of [e_i, e_j]. No
/// antisymmetry or Jacobi guarantee; see LieAlgebra for the validated type.
template <Scalar T>
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim * dim * dim), T(0)) {
    if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "dimension out of range");
  }

  int dim() const noexcept { return dim_; }
  T& operator()(int k, int i, int j) { return c_[index(k, i, j)]; }
  const T& operator()(int k, int i, int j) const { return c_[index(k, i, j)]; }

  /// Sets [e_i, e_j] = sum_k v_k e_k and [e_j, e_i] = -[e_i, e_j].
  void set_bracket(int i, int j, const Vector<T>& v) {
    for (int k = 0; k < dim_; ++k) {
      (*this)(k, i, j) = v[static_cast<std::size_t>(k)];
      (*this)(k, j, i) = -v[static_cast<std::size_t>(k)];
    }
  }

  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const {
    check(x);
    check(y);
    Vector<T> out(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      if (ScalarTraits<T>::exact && aalg::is_zero(x[i])) continue;
      for (int j = 0; j < dim_; ++j) {
        T xy = x[i] * y[j];
        if (ScalarTraits<T>::exact && aalg::is_zero(xy)) continue;
        for (int k = 0; k < dim_; ++k) out[k] += xy * (*this)(k, i, j);
      }
    }
    return out;
  }

  /// Structure constants after the change of basis whose columns are the new
  /// basis vectors expressed in the old basis.
  StructureConstants change_basis(const Matrix<T>& p) const {
    Matrix<T> pinv = inverse(p);
    StructureConstants out(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j) {
        Vector<T> b = bracket(p.column(i), p.column(j));
        out.set_bracket(i, j, pinv * b);
      }
    return out;
  }

  friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t n = 0; n < a.c_.size(); ++n)
      if (!scalar_equal(a.c_[n], b.c_[n])) return false;
    return true;
  }

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  void check(const Vector<T>& v) const {
    if (static_cast<int>(v.size()) != dim_) throw Error(ErrorCode::DimensionMismatch, "vector size vs algebra");
  }

  int dim_ = 0;
  std::vector<T> c_;
};

/// d e^k = - sum_{i<j} c^k_{ij} e^i ^ e^j.
template <Scalar T>
KForm<T> basis_differential(const StructureConstants<T>& c, int k) {
  KForm<T> out(c.dim(), 2);
  for (int i = 0; i < c.dim(); ++i)
    for (int j = i + 1; j < c.dim(); ++j) {
      const T& v = c(k, i, j);
      if (ScalarTraits<T>::exact && aalg::is_zero(v)) continue;
      out.add_term((IndexMask{1} << i) | (IndexMask{1} << j), T(-v));
    }
  return out;
}

/// Chevalley-Eilenberg differential, extended from 1-forms as a derivation.
template <Scalar T>
KForm<T> ce_differential(const KForm<T>& alpha, const StructureConstants<T>& c) {
  if (alpha.dim() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "ce_differential: dimension mismatch");
  const int n = c.dim();
  KForm<T> out(n, alpha.degree() + 1);
  if (alpha.degree() + 1 > n) return out;
  std::vector<KForm<T>> de;
  de.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) de.push_back(basis_differential(c, k));
  for (const auto& [m, coeff] : alpha.terms()) {
    std::vector<int> idx = mask_indices(m);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      // e^{i_1} ^ ... ^ d e^{i_r} ^ ... ^ e^{i_k}, sign (-1)^r (0-based r).
      const KForm<T>& d = de[static_cast<std::size_t>(idx[r])];
      if (d.terms().empty()) continue;
      IndexMask before = 0, after = 0;
      for (std::size_t s = 0; s < idx.size(); ++s) {
        if (s < r) before |= IndexMask{1} << idx[s];
        if (s > r) after |= IndexMask{1} << idx[s];
      }
      const int sgn_r = (r % 2) ? -1 : 1;
      for (const auto& [md, cd] : d.terms()) {
        int s1 = wedge_sign(before, md);
        if (s1 == 0) continue;
        int s2 = wedge_sign(before | md, after);
        if (s2 == 0) continue;
        T v = coeff * cd;
        out.add_term(before | md | after, (sgn_r * s1 * s2) < 0 ? T(-v) : v);
      }
    }
  }
  return out;
}

/// X^flat = g(X, .)
template <Scalar T>
KForm<T> flat(const Vector<T>& x, const Matrix<T>& g) {
  if (g.rows() != x.size()) throw Error(ErrorCode::DimensionMismatch, "flat: metric size");
  return KForm<T>::one_form(g * x);
}

/// Inverse of flat; throws DEGENERATE for a singular metric.
template <Scalar T>
Vector<T> sharp(const KForm<T>& alpha, const Matrix<T>& g) {
  if (alpha.degree() != 1) throw Error(ErrorCode::DimensionMismatch, "sharp needs a 1-form");
  if (static_cast<int>(g.rows()) != alpha.dim()) throw Error(ErrorCode::DimensionMismatch, "sharp: metric size");
  if (is_zero(determinant(g))) throw Error(ErrorCode::Degenerate, "metric is degenerate");
  auto x = solve(g, alpha.as_vector());
  if (!x) throw Error(ErrorCode::Degenerate, "metric is degenerate");
  return *x;
}

}  // namespace aalg
