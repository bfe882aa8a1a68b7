#pragma once

// Deterministic random fixtures shared by the unit and acceptance tests.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aalg/almost_abelian.hpp"

namespace aalg::testing {

using Q = Rational;

inline Q q(long num, long den = 1) { return ScalarTraits<Q>::from_ratio(num, den); }

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Q rational(int span = 3) {
    static const long dens[] = {1, 1, 2, 3};
    return q(integer(-span, span), dens[integer(0, 3)]);
  }
  Q nonzero_rational(int span = 3) {
    Q r;
    do r = rational(span);
    while (sgn(r) == 0);
    return r;
  }

  Vector<Q> vector(std::size_t n) {
    Vector<Q> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rational();
    return v;
  }
  Vector<Q> nonzero_vector(std::size_t n) {
    Vector<Q> v;
    do v = vector(n);
    while (v.is_zero());
    return v;
  }
  Matrix<Q> matrix(std::size_t r, std::size_t c) {
    Matrix<Q> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rational();
    return m;
  }
  Matrix<Q> invertible(std::size_t n) {
    Matrix<Q> m;
    do m = matrix(n, n);
    while (sgn(determinant(m)) == 0);
    return m;
  }

  KForm<Q> form(int dim, int degree) {
    KForm<Q> f(dim, degree);
    KForm<Q>::for_each_mask(dim, degree, [&](IndexMask m) {
      if (integer(0, 2) == 0) f.add_term(m, rational());
    });
    return f;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Projection onto the commutant of J: (X - J X J) / 2.
inline Matrix<Q> commuting_part(const Matrix<Q>& x, const Matrix<Q>& j) { return q(1, 2) * (x - j * x * j); }

inline Matrix<Q> skew_part(const Matrix<Q>& x) { return q(1, 2) * (x - x.transpose()); }

/// Rational orthogonal matrix commuting with J (Cayley transform of a skew,
/// J-commuting matrix).
inline Matrix<Q> unitary(Draw& r, const Matrix<Q>& j) {
  const std::size_t m = j.rows();
  Matrix<Q> k = commuting_part(skew_part(r.matrix(m, m)), j);
  Matrix<Q> id = Matrix<Q>::identity(m);
  return (id - k) * inverse(id + k);
}

enum class DataMode { Generic, Kahler, Lck, Balanced, Skt, Lcb, NTwoZero };

inline const char* mode_name(DataMode m) {
  switch (m) {
    case DataMode::Generic: return "generic";
    case DataMode::Kahler: return "kahler";
    case DataMode::Lck: return "lck";
    case DataMode::Balanced: return "balanced";
    case DataMode::Skt: return "skt";
    case DataMode::Lcb: return "lcb";
    case DataMode::NTwoZero: return "n2-zero";
  }
  return "?";
}

inline constexpr DataMode kAllModes[] = {DataMode::Generic, DataMode::Kahler, DataMode::Lck,     DataMode::Balanced,
                                        DataMode::Skt,     DataMode::Lcb,    DataMode::NTwoZero};

/// Hermitian data of half-dimension n in the requested family, with the
/// standard anti-diagonal J_1.
inline HermitianData<Q> draw_data(Draw& r, int n, DataMode mode) {
  const std::size_t m = static_cast<std::size_t>(2 * n - 2);
  Matrix<Q> j1 = standard_j1<Q>(m);
  Matrix<Q> id = Matrix<Q>::identity(m);
  Q a = r.rational();
  Vector<Q> v = r.vector(m);
  Matrix<Q> A = commuting_part(r.matrix(m, m), j1);
  switch (mode) {
    case DataMode::Generic:
      break;
    case DataMode::Kahler:
      v = Vector<Q>(m);
      A = commuting_part(skew_part(r.matrix(m, m)), j1);
      break;
    case DataMode::Lck:
      v = Vector<Q>(m);
      A = r.rational() * id + commuting_part(skew_part(r.matrix(m, m)), j1);
      break;
    case DataMode::Balanced:
      v = Vector<Q>(m);
      A = A - (A.trace() / Q(static_cast<long>(m))) * id;
      break;
    case DataMode::Skt: {
      // S = -a/2 on a J-invariant coordinate block, 0 elsewhere; skew parts
      // respect the splitting; then a unitary change of frame.
      Matrix<Q> p(m, m);
      for (std::size_t k = 0; k < m / 2; ++k)
        if (r.coin()) {
          p(k, k) = 1;
          p(m - 1 - k, m - 1 - k) = 1;
        }
      Matrix<Q> u = commuting_part(skew_part(r.matrix(m, m)), j1);
      Matrix<Q> u_split = p * u * p + (id - p) * u * (id - p);
      Matrix<Q> s = (-a / 2) * p;
      Matrix<Q> w = unitary(r, j1);
      A = w * (s + u_split) * w.transpose();
      if (r.integer(0, 3) == 0) v = (A - a * id) * r.vector(m);
      break;
    }
    case DataMode::Lcb: {
      if (v.is_zero() || m == 0) break;
      Vector<Q> jv = j1 * v;
      Q nn = dot(v, v);
      Matrix<Q> proj = id;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) proj(i, k) -= (v[i] * v[k] + jv[i] * jv[k]) / nn;
      A = proj * A * proj;
      break;
    }
    case DataMode::NTwoZero:
      A = Matrix<Q>(m, m);
      break;
  }
  return make_data(a, v, A, j1);
}

/// Structure constants of build_algebra(d) moved to the random basis P.
inline HermitianStructure<Q> disguise(const HermitianStructure<Q>& h, const Matrix<Q>& p) {
  Matrix<Q> pinv = inverse(p);
  return HermitianStructure<Q>(h.algebra().change_basis(p),
                               ComplexStructure<Q>(pinv * h.complex_structure().matrix() * p),
                               Metric<Q>(p.transpose() * h.metric().matrix() * p));
}

/// Random valid algebra: an almost abelian semidirect product in a random basis.
inline LieAlgebra<Q> random_valid_algebra(Draw& r, int dim) {
  const std::size_t m = static_cast<std::size_t>(dim - 1);
  StructureConstants<Q> c(dim);
  Matrix<Q> b = r.matrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector<Q> col(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < m; ++i) col[i] = b(i, j);
    c.set_bracket(dim - 1, static_cast<int>(j), col);
  }
  return LieAlgebra<Q>::validate(c).change_basis(r.invertible(static_cast<std::size_t>(dim)));
}

/// The Jacobi identity checked term by term on the structure constants.
inline bool jacobi_holds(const StructureConstants<Q>& c) {
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Q s = 0;
          for (int m = 0; m < n; ++m) s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
          if (sgn(s) != 0) return false;
        }
  return true;
}

/// d(d f^k) = 0 for every basis covector.
inline bool dd_vanishes(const StructureConstants<Q>& c) {
  for (int k = 0; k < c.dim(); ++k)
    if (!ce_differential(basis_differential(c, k), c).is_zero()) return false;
  return true;
}

/// The code of the Error thrown by f, or nothing when f returns normally.
template <typename F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// The message of the Error thrown by f, empty when f returns normally.
template <typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace aalg::testing
