#pragma once

// Hermitian structures on almost abelian Lie algebras g = span(e_2n) + n in
// terms of the data (a, v, A): in an adapted unitary basis
//   [e_2n, e_1] = a e_1 + v,   [e_2n, x] = A x  for x in n_1,
// with n_1 = span(e_2, ..., e_{2n-1}), J e_1 = e_2n and J|n_1 = J_1.
//
// Basis order used by build_algebra: index 0 is e_1, indices 1..2n-2 span
// n_1, index 2n-1 is e_2n. The metric is the identity in that basis.

#include <optional>
#include <string>
#include <vector>

#include "aalg/hermitian.hpp"
#include "aalg/polynomial.hpp"

namespace aalg {

/// J_1 e_k = e_{m-1-k} for the first half of n_1 (0-based within n_1), so that
/// J e_i = e_{2n+1-i} on the whole adapted basis.
template <Scalar T>
Matrix<T> standard_j1(std::size_t m) {
  if (m % 2) throw Error(ErrorCode::DimensionMismatch, "n_1 has odd dimension");
  Matrix<T> j(m, m);
  for (std::size_t k = 0; k < m; ++k) j(m - 1 - k, k) = k < m / 2 ? T(1) : T(-1);
  return j;
}

/// J_1 pairing consecutive indices: J e_{2k} = e_{2k+1} within n_1.
template <Scalar T>
Matrix<T> paired_j1(std::size_t m) {
  if (m % 2) throw Error(ErrorCode::DimensionMismatch, "n_1 has odd dimension");
  Matrix<T> j(m, m);
  for (std::size_t k = 0; k < m; k += 2) {
    j(k + 1, k) = T(1);
    j(k, k + 1) = T(-1);
  }
  return j;
}

template <Scalar T>
struct HermitianData {
  int n = 0;
  T a{0};
  Vector<T> v;
  Matrix<T> A;
  Matrix<T> J1;
  /// Columns are the adapted basis e_1, n_1 basis, e_2n in the coordinates of
  /// the algebra the data was read from (identity for build_algebra output).
  Matrix<T> basis;

  std::size_t n1_dim() const noexcept { return static_cast<std::size_t>(2 * n - 2); }

  void validate() const {
    const std::size_t m = n1_dim();
    if (n < 1 || v.size() != m || A.rows() != m || A.cols() != m || J1.rows() != m || J1.cols() != m)
      throw Error(ErrorCode::DimensionMismatch, "Hermitian data sizes do not match n");
    if (!(J1 * J1 + Matrix<T>::identity(m)).is_zero())
      throw Error(ErrorCode::NotComplexStructure, "J_1^2 != -Id");
    if (!commutator(A, J1).is_zero()) throw Error(ErrorCode::CommutationFailure, "A does not commute with J_1");
  }

  /// ad_{e_2n} restricted to n in the basis e_1, n_1.
  Matrix<T> b_matrix() const {
    const std::size_t m = n1_dim();
    Matrix<T> b(m + 1, m + 1);
    b(0, 0) = a;
    for (std::size_t i = 0; i < m; ++i) {
      b(i + 1, 0) = v[i];
      for (std::size_t j = 0; j < m; ++j) b(i + 1, j + 1) = A(i, j);
    }
    return b;
  }
};

/// An empty v stands for v = 0.
template <Scalar T>
HermitianData<T> make_data(const T& a, Vector<T> v, Matrix<T> A, Matrix<T> j1) {
  HermitianData<T> d;
  const std::size_t m = A.rows();
  d.n = static_cast<int>(m / 2 + 1);
  d.a = a;
  d.v = v.size() == 0 ? Vector<T>(m) : std::move(v);
  d.A = std::move(A);
  d.J1 = std::move(j1);
  d.basis = Matrix<T>::identity(m + 2);
  d.validate();
  return d;
}

template <Scalar T>
HermitianData<T> make_data(const T& a, Vector<T> v, Matrix<T> A) {
  Matrix<T> j1 = standard_j1<T>(A.rows());
  return make_data(a, std::move(v), std::move(A), std::move(j1));
}

/// The semidirect product with its standard adapted structure.
template <Scalar T>
HermitianStructure<T> build_algebra(const HermitianData<T>& d) {
  d.validate();
  const int dim = 2 * d.n;
  const std::size_t m = d.n1_dim();
  const int top = dim - 1;
  StructureConstants<T> c(dim);
  Vector<T> img(static_cast<std::size_t>(dim));
  img[0] = d.a;
  for (std::size_t i = 0; i < m; ++i) img[i + 1] = d.v[i];
  c.set_bracket(top, 0, img);
  for (std::size_t j = 0; j < m; ++j) {
    Vector<T> col(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < m; ++i) col[i + 1] = d.A(i, j);
    c.set_bracket(top, static_cast<int>(j + 1), col);
  }
  Matrix<T> J(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  J(static_cast<std::size_t>(top), 0) = T(1);
  J(0, static_cast<std::size_t>(top)) = T(-1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) J(i + 1, j + 1) = d.J1(i, j);
  return HermitianStructure<T>(LieAlgebra<T>::validate(std::move(c)), ComplexStructure<T>(std::move(J)),
                               Metric<T>::identity(static_cast<std::size_t>(dim)));
}

template <Scalar T>
HermitianStructure<T> build_algebra(const T& a, const Vector<T>& v, const Matrix<T>& A, const Matrix<T>& j1) {
  return build_algebra(make_data(a, v, A, j1));
}

namespace detail {
template <Scalar T>
T exact_sqrt(const T& x, const char* what) {
  auto r = ScalarTraits<T>::sqrt(x);
  if (!r) throw Error(ErrorCode::InexactSqrt, std::string("normalising ") + what + " needs an irrational square root");
  return *r;
}
}  // namespace detail

/// Reads (a, v, A) off a Hermitian structure on an almost abelian algebra.
/// When no ideal is supplied one is detected. On the exact path every
/// normalisation must have a rational square root (INEXACT_SQRT otherwise).
template <Scalar T>
HermitianData<T> extract_data_impl(const HermitianStructure<T>& h, std::optional<Subspace<T>> ideal) {
  const LieAlgebra<T>& l = h.algebra();
  const int dim = l.dim();
  if (dim < 2 || dim % 2) throw Error(ErrorCode::DimensionMismatch, "almost abelian data needs even dimension");
  if (!ideal) {
    auto found = find_codim1_abelian_ideal(l);
    if (!found) throw Error(ErrorCode::NotAlmostAbelian, "no abelian ideal of codimension one");
    ideal = found->ideal;
  } else {
    check_codim1_abelian_ideal(l, *ideal);
  }
  h.require_integrable();
  const Matrix<T>& G = h.metric().matrix();
  const Matrix<T>& J = h.complex_structure().matrix();
  const Metric<T>& g = h.metric();

  Vector<T> xi = ideal->defining_covector();
  for (std::size_t k = 0; k < xi.size(); ++k)
    if (!is_zero(xi[k])) {
      if (xi[k] < T(0)) xi = -xi;
      break;
    }
  Vector<T> e_top = inverse(G) * xi;
  e_top = (T(1) / detail::exact_sqrt(g(e_top, e_top), "e_2n")) * e_top;
  Vector<T> e_one = -(J * e_top);

  Matrix<T> constraints(2, static_cast<std::size_t>(dim));
  Vector<T> g1 = G * e_one, g2 = G * e_top;
  for (int k = 0; k < dim; ++k) {
    constraints(0, static_cast<std::size_t>(k)) = g1[static_cast<std::size_t>(k)];
    constraints(1, static_cast<std::size_t>(k)) = g2[static_cast<std::size_t>(k)];
  }
  auto candidates = null_space(constraints);

  const std::size_t m = static_cast<std::size_t>(dim - 2);
  std::vector<Vector<T>> frame(static_cast<std::size_t>(dim));
  frame[0] = e_one;
  frame[static_cast<std::size_t>(dim - 1)] = e_top;
  std::vector<Vector<T>> done;
  std::size_t pair = 0;
  for (const auto& w0 : candidates) {
    if (pair == m / 2) break;
    Vector<T> w = w0;
    for (const auto& u : done) w -= g(w, u) * u;
    if (w.is_zero()) continue;
    Vector<T> x = (T(1) / detail::exact_sqrt(g(w, w), "n_1 vector")) * w;
    Vector<T> jx = J * x;
    frame[1 + pair] = x;
    frame[static_cast<std::size_t>(dim) - 2 - pair] = jx;
    done.push_back(x);
    done.push_back(jx);
    ++pair;
  }
  if (pair != m / 2) throw Error(ErrorCode::JNotCompatible, "n_1 is not J-invariant");

  HermitianData<T> d;
  d.n = dim / 2;
  d.basis = Matrix<T>::from_columns(frame, static_cast<std::size_t>(dim));
  Vector<T> img = l.bracket(e_top, e_one);
  d.a = g(img, e_one);
  d.v = Vector<T>(m);
  d.A = Matrix<T>(m, m);
  d.J1 = Matrix<T>(m, m);
  for (std::size_t i = 0; i < m; ++i) d.v[i] = g(img, frame[i + 1]);
  for (std::size_t j = 0; j < m; ++j) {
    Vector<T> col = l.bracket(e_top, frame[j + 1]);
    Vector<T> jcol = J * frame[j + 1];
    for (std::size_t i = 0; i < m; ++i) {
      d.A(i, j) = g(frame[i + 1], col);
      d.J1(i, j) = g(frame[i + 1], jcol);
    }
  }
  if (!commutator(d.A, d.J1).is_zero()) throw Error(ErrorCode::JNotCompatible, "A does not commute with J_1");
  return d;
}

template <Scalar T>
HermitianData<T> extract_data(const HermitianStructure<T>& h) {
  return extract_data_impl<T>(h, std::nullopt);
}

/// Uses the declared ideal instead of detecting one.
template <Scalar T>
HermitianData<T> extract_data(const HermitianStructure<T>& h, const Subspace<T>& ideal) {
  return extract_data_impl<T>(h, ideal);
}

template <Scalar T>
bool is_skew(const Matrix<T>& m) {
  return (m + m.transpose()).is_zero();
}

template <Scalar T>
bool is_kahler_data(const HermitianData<T>& d) {
  return d.v.is_zero() && is_skew(d.A);
}

template <Scalar T>
bool is_lck_data(const HermitianData<T>& d) {
  const std::size_t m = d.n1_dim();
  if (d.n == 2 && d.A.is_zero()) return true;
  if (!d.v.is_zero()) return false;
  if (m == 0) return true;
  T lambda = d.A.trace() / T(static_cast<long>(m));
  return is_skew(d.A - lambda * Matrix<T>::identity(m));
}

template <Scalar T>
bool is_balanced_data(const HermitianData<T>& d) {
  return d.v.is_zero() && is_zero(d.A.trace());
}

/// A normal with every eigenvalue of real part -a/2 or 0. For normal A the
/// real parts are the eigenvalues of S = (A + A^t)/2, which is symmetric, so
/// the spectral condition is S (S + a/2 Id) = 0.
template <Scalar T>
bool is_skt_data(const HermitianData<T>& d) {
  const Matrix<T>& A = d.A;
  const Matrix<T> At = A.transpose();
  if (!commutator(A, At).is_zero()) return false;
  const std::size_t m = d.n1_dim();
  const T half = ScalarTraits<T>::from_ratio(1, 2);
  Matrix<T> s = half * (A + At);
  return (s * (s + (half * d.a) * Matrix<T>::identity(m))).is_zero();
}

template <Scalar T>
bool is_lcb_data(const HermitianData<T>& d) {
  return (d.A.transpose() * d.v).is_zero();
}

/// theta = (J v)^flat - tr(A) e^{2n} in the adapted coframe.
template <Scalar T>
KForm<T> lee_form_closed(const HermitianData<T>& d) {
  const std::size_t dim = static_cast<std::size_t>(2 * d.n);
  Vector<T> th(dim);
  Vector<T> jv = d.J1 * d.v;
  for (std::size_t i = 0; i < d.n1_dim(); ++i) th[i + 1] = jv[i];
  th[dim - 1] = -d.A.trace();
  return KForm<T>::one_form(th);
}

/// rho^B = -(a^2 - a tr(A)/2 + |v|^2) e^1 ^ e^{2n} - (A^t v)^flat ^ e^{2n}.
template <Scalar T>
KForm<T> rho_b_closed(const HermitianData<T>& d) {
  const int dim = 2 * d.n;
  const T half = ScalarTraits<T>::from_ratio(1, 2);
  T c = d.a * d.a - half * d.a * d.A.trace() + dot(d.v, d.v);
  KForm<T> rho = KForm<T>::monomial(dim, {0, dim - 1}, T(-c));
  Vector<T> w = d.A.transpose() * d.v;
  for (std::size_t i = 0; i < d.n1_dim(); ++i)
    if (!is_zero(w[i]) || !ScalarTraits<T>::exact)
      rho -= KForm<T>::monomial(dim, {static_cast<int>(i + 1), dim - 1}, w[i]);
  return rho;
}

template <Scalar T>
struct LcbTypeReport {
  bool lcb = false;
  bool type_11 = false;
  bool agree() const { return lcb == type_11; }
};

template <Scalar T>
LcbTypeReport<T> lcb_iff_11(const HermitianData<T>& d) {
  LcbTypeReport<T> r;
  r.lcb = is_lcb_data(d);
  r.type_11 = is_type_11(rho_b_closed(d), build_algebra(d).complex_structure().matrix());
  return r;
}

/// Quantities independent of the unitary gauge in the adapted basis.
template <Scalar T>
struct GaugeInvariants {
  T a{0};
  T v_norm_sq{0};
  T trace_a{0};
  Polynomial<T> char_poly_a;
};

template <Scalar T>
GaugeInvariants<T> gauge_invariants(const HermitianData<T>& d) {
  return {d.a, dot(d.v, d.v), d.A.trace(), characteristic_polynomial(d.A)};
}

template <Scalar T>
struct SktToLcb {
  HermitianData<T> data;
  /// x in n_1 with v = (A - a Id) x + v'.
  Vector<T> shift;
  /// Columns: the new adapted basis in the old adapted coordinates.
  Matrix<T> change;
  /// Metric making the new basis orthonormal, in the old adapted coordinates.
  Matrix<T> metric;
};

/// Splits v = (A - a Id) x + v' with (A - a Id)^t v' = 0 and moves to the
/// basis e_1' = e_1 - x, e_2n' = e_2n - J x; the new data is (a, v', A).
template <Scalar T>
SktToLcb<T> skt_to_lcb(const HermitianData<T>& d) {
  d.validate();
  if (!is_skt_data(d)) throw Error(ErrorCode::Precondition, "input data is not SKT");
  const std::size_t m = d.n1_dim();
  const std::size_t dim = m + 2;
  Matrix<T> M = d.A - d.a * Matrix<T>::identity(m);
  Matrix<T> Mt = M.transpose();
  auto x = solve(Mt * M, Mt * d.v);
  if (!x) throw Error(ErrorCode::Singular, "normal equations are inconsistent");
  SktToLcb<T> out;
  out.shift = *x;
  out.data = d;
  out.data.v = d.v - M * (*x);
  Vector<T> jx = d.J1 * (*x);
  Matrix<T> p = Matrix<T>::identity(dim);
  for (std::size_t i = 0; i < m; ++i) {
    p(i + 1, 0) = -(*x)[i];
    p(i + 1, dim - 1) = -jx[i];
  }
  out.change = p;
  out.data.basis = d.basis * p;
  Matrix<T> pinv = inverse(p);
  out.metric = pinv.transpose() * pinv;
  return out;
}

}  // namespace aalg
