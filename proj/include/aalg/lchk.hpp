#pragma once

// Locally conformally hyperkahler structures on R^{4m-1} x_D R.
//
// D is admissible when it is complex-diagonalizable and
//   (i)   every eigenvalue has the same real part a,
//   (ii)  m_D(a) >= 3,
//   (iii) m_D(a + ib) is even for every b != 0.
// An admissible D is conjugate to diag(C_1, ..., C_{m-1}, a, a, a) with
//   C_i = [[a, b_i, 0, 0], [-b_i, a, 0, 0], [0, 0, a, -b_i], [0, 0, b_i, a]],
// and the triple I_k = diag(K_k, ..., K_k) with g = sum (e^i)^2 is LCHK with
// Lee form -(4m-2) a e^{4m}.

#include <string>
#include <vector>

#include "aalg/hermitian.hpp"

namespace aalg {

struct SpectralEntry {
  std::string eigenvalue;
  int multiplicity = 0;
};

template <Scalar T>
struct LchkVerdict {
  bool admissible = false;
  bool diagonalizable = false;
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;
  bool hyperkahler = false;
  T a{0};
  int mult_a = 0;
  /// Values of a satisfying (i) and (ii); a single entry whenever (i) holds.
  std::vector<T> a_candidates;
  std::vector<SpectralEntry> table;
  std::vector<std::string> diagnostics;
  /// (b, number of 4x4 blocks) with b > 0, sorted by b descending; the zero
  /// blocks come from ker(D - a Id). Filled only when admissible and every b
  /// is representable in T.
  std::vector<std::pair<T, int>> blocks;
  int zero_blocks = 0;
  bool blocks_exact = true;
};

template <Scalar T>
struct HypercomplexTriple {
  LieAlgebra<T> algebra;
  ComplexStructure<T> i1, i2, i3;
  Metric<T> g;
  KForm<T> theta;
  T a{0};
  int m = 0;
  /// Columns: the basis of R^{4m-1} putting D in canonical form.
  Matrix<T> change;
  Matrix<T> canonical;
};

LchkVerdict<Rational> lchk_admissible(const Matrix<Rational>& d);
LchkVerdict<double> lchk_admissible(const Matrix<double>& d);

/// Throws NOT_ADMISSIBLE, or INEXACT_SQRT when some b is irrational on the
/// exact path (the float overload handles those).
HypercomplexTriple<Rational> construct_lchk(const Matrix<Rational>& d);
HypercomplexTriple<double> construct_lchk(const Matrix<double>& d);

template <Scalar T>
Matrix<T> k_matrix(int which) {
  switch (which) {
    case 1: return Matrix<T>{{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
    case 2: return Matrix<T>{{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
    case 3: return Matrix<T>{{0, 0, 0, -1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};
  }
  throw Error(ErrorCode::Precondition, "K index must be 1, 2 or 3");
}

template <Scalar T>
Matrix<T> canonical_block(const T& a, const T& b) {
  return Matrix<T>{{a, b, 0, 0}, {T(-b), a, 0, 0}, {0, 0, a, T(-b)}, {0, 0, b, a}};
}

/// diag(C(b_1), ..., C(b_{m-1}), a, a, a) from the block list of a verdict.
template <Scalar T>
Matrix<T> canonical_form(const T& a, const std::vector<std::pair<T, int>>& blocks, int zero_blocks) {
  std::vector<Matrix<T>> parts;
  for (const auto& [b, count] : blocks)
    for (int k = 0; k < count; ++k) parts.push_back(canonical_block(a, b));
  for (int k = 0; k < zero_blocks; ++k) parts.push_back(canonical_block(a, T(0)));
  parts.push_back(a * Matrix<T>::identity(3));
  return block_diagonal(parts);
}

/// R^{k} x_D R with [e_top, e_j] = sum_i D_ij e_i.
template <Scalar T>
LieAlgebra<T> semidirect_product(const Matrix<T>& d) {
  const int dim = static_cast<int>(d.rows()) + 1;
  StructureConstants<T> c(dim);
  for (std::size_t j = 0; j < d.rows(); ++j) {
    Vector<T> col(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < d.rows(); ++i) col[i] = d(i, j);
    c.set_bracket(dim - 1, static_cast<int>(j), col);
  }
  return LieAlgebra<T>::validate(std::move(c));
}

/// The triple on the canonical form; the caller supplies the change of basis.
template <Scalar T>
HypercomplexTriple<T> triple_from_canonical(const T& a, const Matrix<T>& canonical, Matrix<T> change) {
  const std::size_t dim = canonical.rows() + 1;
  const int m = static_cast<int>(dim / 4);
  auto structure = [m](int which) {
    std::vector<Matrix<T>> blocks(static_cast<std::size_t>(m), k_matrix<T>(which));
    return ComplexStructure<T>(block_diagonal(blocks));
  };
  HypercomplexTriple<T> t{semidirect_product(canonical),
                          structure(1),
                          structure(2),
                          structure(3),
                          Metric<T>::identity(dim),
                          KForm<T>(static_cast<int>(dim), 1),
                          a,
                          m,
                          std::move(change),
                          canonical};
  t.theta = lee_form(HermitianStructure<T>(t.algebra, t.i1, t.g));
  return t;
}

template <Scalar T>
struct TripleCheck {
  bool quaternion = false;
  bool integrable = false;
  bool hermitian = false;
  bool lck = false;
  bool lee_equal = false;
  bool lee_closed = false;
  bool lee_expected = false;
  bool all() const { return quaternion && integrable && hermitian && lck && lee_equal && lee_closed && lee_expected; }
};

/// Checks every invariant of an LCHK triple through the hermitian module.
template <Scalar T>
TripleCheck<T> check_triple(const HypercomplexTriple<T>& t) {
  TripleCheck<T> r;
  const Matrix<T>& i1 = t.i1.matrix();
  const Matrix<T>& i2 = t.i2.matrix();
  const Matrix<T>& i3 = t.i3.matrix();
  const std::size_t dim = i1.rows();
  r.quaternion = i1 * i2 == i3 && i2 * i3 == i1 && i3 * i1 == i2 &&
                 (i1 * i2 * i3 + Matrix<T>::identity(dim)).is_zero();
  r.integrable = is_integrable(t.i1, t.algebra) && is_integrable(t.i2, t.algebra) && is_integrable(t.i3, t.algebra);
  r.hermitian = true;
  std::vector<KForm<T>> lee;
  bool lck = true;
  for (const auto* s : {&t.i1, &t.i2, &t.i3}) {
    const Matrix<T>& j = s->matrix();
    if (!(j.transpose() * t.g.matrix() * j == t.g.matrix())) {
      r.hermitian = false;
      continue;
    }
    HermitianStructure<T> h(t.algebra, *s, t.g);
    if (!r.integrable) continue;
    lck = lck && is_lck_direct(h);
    lee.push_back(lee_form(h));
  }
  r.lck = r.hermitian && r.integrable && lck;
  r.lee_equal = lee.size() == 3 && lee[0] == lee[1] && lee[1] == lee[2];
  r.lee_closed = !lee.empty() && t.algebra.d(lee[0]).is_zero();
  const int top = static_cast<int>(dim) - 1;
  KForm<T> expected = KForm<T>::monomial(static_cast<int>(dim), {top}, T(-T(4 * t.m - 2) * t.a));
  r.lee_expected = !lee.empty() && lee[0] == expected;
  return r;
}

/// For a = 0, the basis vectors spanning ker D in the canonical basis. Each is
/// central and the span meets the derived algebra trivially, so the algebra is
/// g' + m_D(0) R. Throws PRECONDITION when a != 0.
template <Scalar T>
std::vector<Vector<T>> central_abelian_factor(const HypercomplexTriple<T>& t) {
  if (!is_zero(t.a)) throw Error(ErrorCode::Precondition, "split only exists for a = 0");
  const std::size_t dim = t.canonical.rows() + 1;
  std::vector<Vector<T>> out;
  for (std::size_t j = 0; j < t.canonical.rows(); ++j)
    if (t.canonical.column(j).is_zero()) out.push_back(t.algebra.basis_vector(static_cast<int>(j)));
  for (const auto& z : out)
    if (!t.algebra.ad(z).is_zero()) throw Error(ErrorCode::WitnessFailure, "kernel vector is not central");
  std::vector<Vector<T>> derived = t.algebra.derived_algebra();
  const std::size_t derived_rank = derived.empty() ? 0 : rank(Matrix<T>::from_columns(derived, dim));
  std::vector<Vector<T>> joint = derived;
  joint.insert(joint.end(), out.begin(), out.end());
  if (!joint.empty() && rank(Matrix<T>::from_columns(joint, dim)) != derived_rank + out.size())
    throw Error(ErrorCode::WitnessFailure, "central factor meets the derived algebra");
  return out;
}

/// Levi-Civita curvature of a hyperkahler triple vanishes identically.
template <Scalar T>
bool hyperkahler_flatness(const HypercomplexTriple<T>& t) {
  if (!is_zero(t.a)) throw Error(ErrorCode::Precondition, "triple is not hyperkahler (a != 0)");
  return levi_civita(t.algebra, t.g).is_flat();
}

}  // namespace aalg
