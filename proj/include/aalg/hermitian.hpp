#pragma once

// Left-invariant Hermitian geometry on a Lie algebra: complex structures,
// metrics, fundamental and Lee forms, the special-metric predicates evaluated
// directly on forms, and the Levi-Civita / Bismut connections.
//
// omega(X, Y) = g(JX, Y). The Lee form theta is the solution of
// d(omega^{n-1}) = theta ^ omega^{n-1}. d^c omega(X, Y, Z) = -d omega(JX, JY, JZ).

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aalg/lie_algebra.hpp"

namespace aalg {

/// Endomorphism with J^2 = -Id.
template <Scalar T>
class ComplexStructure {
 public:
  explicit ComplexStructure(Matrix<T> j) : j_(std::move(j)) {
    if (!j_.is_square() || j_.rows() % 2 != 0)
      throw Error(ErrorCode::NotComplexStructure, "J must be square of even size");
    Matrix<T> sq = j_ * j_ + Matrix<T>::identity(j_.rows());
    if (!sq.is_zero()) throw Error(ErrorCode::NotComplexStructure, "J^2 != -Id");
  }
  const Matrix<T>& matrix() const noexcept { return j_; }
  std::size_t dim() const noexcept { return j_.rows(); }

  /// J f_a = f_b, J f_b = -f_a for every listed pair (0-based).
  static ComplexStructure from_pairs(std::size_t dim, const std::vector<std::pair<int, int>>& pairs) {
    Matrix<T> j(dim, dim);
    for (auto [a, b] : pairs) {
      j(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) = T(1);
      j(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = T(-1);
    }
    return ComplexStructure(std::move(j));
  }

 private:
  Matrix<T> j_;
};

/// Symmetric positive-definite bilinear form.
template <Scalar T>
class Metric {
 public:
  explicit Metric(Matrix<T> g) : g_(std::move(g)) {
    if (!g_.is_square()) throw Error(ErrorCode::Degenerate, "metric must be square");
    if (!(g_ - g_.transpose()).is_zero()) throw Error(ErrorCode::Degenerate, "metric is not symmetric");
    for (std::size_t k = 1; k <= g_.rows(); ++k) {
      T minor = determinant(g_.block(0, 0, k, k));
      if (!(minor > T(0)) || is_zero(minor)) throw Error(ErrorCode::Degenerate, "metric is not positive definite");
    }
  }
  static Metric identity(std::size_t n) { return Metric(Matrix<T>::identity(n)); }

  const Matrix<T>& matrix() const noexcept { return g_; }
  std::size_t dim() const noexcept { return g_.rows(); }
  T operator()(const Vector<T>& x, const Vector<T>& y) const { return dot(x, g_ * y); }

 private:
  Matrix<T> g_;
};

/// Left-invariant linear connection: gamma[i] is the matrix of nabla_{e_i}
/// (column j = nabla_{e_i} e_j).
template <Scalar T>
class Connection {
 public:
  Connection(const LieAlgebra<T>& l, std::vector<Matrix<T>> gamma) : c_(l.constants()), gamma_(std::move(gamma)) {}

  int dim() const noexcept { return c_.dim(); }
  const Matrix<T>& operator[](int i) const { return gamma_[static_cast<std::size_t>(i)]; }
  const std::vector<Matrix<T>>& tables() const noexcept { return gamma_; }

  /// T(e_i, e_j) = nabla_i e_j - nabla_j e_i - [e_i, e_j].
  Vector<T> torsion(int i, int j) const {
    Vector<T> out = gamma_[static_cast<std::size_t>(i)].column(static_cast<std::size_t>(j)) -
                    gamma_[static_cast<std::size_t>(j)].column(static_cast<std::size_t>(i));
    for (int k = 0; k < dim(); ++k) out[static_cast<std::size_t>(k)] -= c_(k, i, j);
    return out;
  }

  /// R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]}.
  Matrix<T> curvature(int i, int j) const {
    const auto& gi = gamma_[static_cast<std::size_t>(i)];
    const auto& gj = gamma_[static_cast<std::size_t>(j)];
    Matrix<T> r = gi * gj - gj * gi;
    for (int k = 0; k < dim(); ++k) {
      const T& ck = c_(k, i, j);
      if (is_zero(ck) && ScalarTraits<T>::exact) continue;
      r -= ck * gamma_[static_cast<std::size_t>(k)];
    }
    return r;
  }

  bool is_flat() const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        if (!curvature(i, j).is_zero()) return false;
    return true;
  }

  bool is_metric(const Matrix<T>& g) const {
    for (const auto& m : gamma_)
      if (!(m.transpose() * g + g * m).is_zero()) return false;
    return true;
  }

  bool preserves(const Matrix<T>& j) const {
    for (const auto& m : gamma_)
      if (!commutator(m, j).is_zero()) return false;
    return true;
  }

  bool is_torsion_free() const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        if (!torsion(i, j).is_zero()) return false;
    return true;
  }

  /// g(T(X, Y), Z) alternating in all three arguments.
  bool has_totally_skew_torsion(const Matrix<T>& g) const {
    const int n = dim();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vector<T> gt = g * torsion(i, j);
        for (int k = 0; k < n; ++k) {
          Vector<T> gt2 = g * torsion(i, k);
          if (!scalar_equal(gt[static_cast<std::size_t>(k)], T(-gt2[static_cast<std::size_t>(j)]))) return false;
        }
      }
    return true;
  }

 private:
  StructureConstants<T> c_;
  std::vector<Matrix<T>> gamma_;
};

/// Koszul formula for left-invariant fields:
/// 2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
template <Scalar T>
Connection<T> levi_civita(const LieAlgebra<T>& l, const Metric<T>& g) {
  const int n = l.dim();
  if (static_cast<int>(g.dim()) != n) throw Error(ErrorCode::DimensionMismatch, "metric size vs algebra");
  const Matrix<T>& G = g.matrix();
  Matrix<T> ginv = inverse(G);
  std::vector<Vector<T>> e;
  for (int i = 0; i < n; ++i) e.push_back(l.basis_vector(i));
  std::vector<Matrix<T>> gamma;
  const T half = ScalarTraits<T>::from_ratio(1, 2);
  for (int i = 0; i < n; ++i) {
    Matrix<T> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      Vector<T> lower(static_cast<std::size_t>(n));
      Vector<T> bij = l.bracket(e[i], e[j]);
      for (int k = 0; k < n; ++k) {
        T v = g(bij, e[k]) - g(l.bracket(e[j], e[k]), e[i]) + g(l.bracket(e[k], e[i]), e[j]);
        lower[static_cast<std::size_t>(k)] = half * v;
      }
      m.set_column(static_cast<std::size_t>(j), ginv * lower);
    }
    gamma.push_back(std::move(m));
  }
  return Connection<T>(l, std::move(gamma));
}

/// Nijenhuis tensor N(e_i, e_j) for i < j, in lexicographic pair order.
template <Scalar T>
std::vector<Vector<T>> nijenhuis(const ComplexStructure<T>& j, const LieAlgebra<T>& l) {
  const int n = l.dim();
  if (static_cast<int>(j.dim()) != n) throw Error(ErrorCode::DimensionMismatch, "J size vs algebra");
  const Matrix<T>& J = j.matrix();
  std::vector<Vector<T>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Vector<T> x = l.basis_vector(a), y = l.basis_vector(b);
      Vector<T> jx = J * x, jy = J * y;
      Vector<T> v = l.bracket(jx, jy) - J * l.bracket(jx, y) - J * l.bracket(x, jy) - l.bracket(x, y);
      out.push_back(std::move(v));
    }
  return out;
}

template <Scalar T>
bool is_integrable(const ComplexStructure<T>& j, const LieAlgebra<T>& l) {
  for (const auto& v : nijenhuis(j, l))
    if (!v.is_zero()) return false;
  return true;
}

template <Scalar T>
struct VaismanReport {
  bool lck = false;
  bool theta_parallel = false;
  bool kahler = false;
  bool vaisman() const { return lck && theta_parallel; }
};

/// A complex structure and compatible metric on a Lie algebra. Connection
/// tables are computed at most once and shared between copies.
template <Scalar T>
class HermitianStructure {
 public:
  HermitianStructure(LieAlgebra<T> l, ComplexStructure<T> j, Metric<T> g)
      : l_(std::move(l)), j_(std::move(j)), g_(std::move(g)), cache_(std::make_shared<Cache>()) {
    const std::size_t n = static_cast<std::size_t>(l_.dim());
    if (j_.dim() != n || g_.dim() != n) throw Error(ErrorCode::DimensionMismatch, "J, g and algebra sizes differ");
    const Matrix<T>& J = j_.matrix();
    if (!(J.transpose() * g_.matrix() * J - g_.matrix()).is_zero())
      throw Error(ErrorCode::JNotCompatible, "g(J., J.) != g");
    omega_ = KForm<T>(l_.dim(), 2);
    Matrix<T> w = J.transpose() * g_.matrix();
    for (int a = 0; a < l_.dim(); ++a)
      for (int b = a + 1; b < l_.dim(); ++b)
        omega_.add_term((IndexMask{1} << a) | (IndexMask{1} << b), w(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  }

  const LieAlgebra<T>& algebra() const noexcept { return l_; }
  const ComplexStructure<T>& complex_structure() const noexcept { return j_; }
  const Metric<T>& metric() const noexcept { return g_; }
  const KForm<T>& omega() const noexcept { return omega_; }
  int half_dim() const noexcept { return l_.dim() / 2; }

  bool integrable() const {
    std::call_once(cache_->integrable_once, [&] { cache_->integrable = is_integrable(j_, l_); });
    return cache_->integrable;
  }
  void require_integrable() const {
    if (!integrable()) throw Error(ErrorCode::NonIntegrable, "complex structure is not integrable");
  }

  KForm<T> d_omega() const { return l_.d(omega_); }

  /// d^c omega = -(J^* d omega).
  KForm<T> dc_omega() const { return -d_omega().pullback(j_.matrix()); }

  const Connection<T>& levi_civita_connection() const {
    std::call_once(cache_->lc_once, [&] { cache_->lc.emplace(levi_civita(l_, g_)); });
    return *cache_->lc;
  }

  /// g(nabla^B_X Y, Z) = g(nabla^LC_X Y, Z) + 1/2 d omega(JX, JY, JZ). With
  /// omega = g(J., .) this is the sign for which nabla^B J = 0.
  const Connection<T>& bismut_connection() const {
    require_integrable();
    std::call_once(cache_->bismut_once, [&] {
      const int n = l_.dim();
      const Connection<T>& lc = levi_civita_connection();
      KForm<T> h = d_omega().pullback(j_.matrix());
      Matrix<T> ginv = inverse(g_.matrix());
      const T half = ScalarTraits<T>::from_ratio(1, 2);
      std::vector<Matrix<T>> gamma;
      for (int i = 0; i < n; ++i) {
        Matrix<T> m = lc[i];
        for (int j = 0; j < n; ++j) {
          Vector<T> lower(static_cast<std::size_t>(n));
          for (int k = 0; k < n; ++k) {
            std::vector<Vector<T>> args{l_.basis_vector(i), l_.basis_vector(j), l_.basis_vector(k)};
            lower[static_cast<std::size_t>(k)] = half * h.evaluate(args);
          }
          Vector<T> corr = ginv * lower;
          for (int k = 0; k < n; ++k) m(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) += corr[static_cast<std::size_t>(k)];
        }
        gamma.push_back(std::move(m));
      }
      cache_->bismut.emplace(l_, std::move(gamma));
    });
    return *cache_->bismut;
  }

 private:
  struct Cache {
    std::once_flag integrable_once, lc_once, bismut_once;
    bool integrable = false;
    std::optional<Connection<T>> lc, bismut;
  };

  LieAlgebra<T> l_;
  ComplexStructure<T> j_;
  Metric<T> g_;
  KForm<T> omega_;
  std::shared_ptr<Cache> cache_;
};

/// Solves d(omega^{n-1}) = theta ^ omega^{n-1}; the wedge map on 1-forms is
/// injective for non-degenerate omega.
template <Scalar T>
KForm<T> lee_form(const HermitianStructure<T>& h) {
  const int dim = h.algebra().dim();
  if (dim < 4 || dim % 2) throw Error(ErrorCode::DimensionMismatch, "Lee form needs real dimension 2n >= 4");
  const int n = dim / 2;
  KForm<T> wpow = wedge_power(h.omega(), n - 1);
  KForm<T> rhs = h.algebra().d(wpow);
  std::vector<IndexMask> masks;
  KForm<T>::for_each_mask(dim, dim - 1, [&](IndexMask m) { masks.push_back(m); });
  Matrix<T> sys(masks.size(), static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    KForm<T> col = wedge(KForm<T>::monomial(dim, {a}), wpow);
    for (std::size_t r = 0; r < masks.size(); ++r) sys(r, static_cast<std::size_t>(a)) = col.coefficient(masks[r]);
  }
  Vector<T> b(masks.size());
  for (std::size_t r = 0; r < masks.size(); ++r) b[r] = rhs.coefficient(masks[r]);
  if (is_zero(determinant(sys))) throw Error(ErrorCode::Singular, "fundamental form is degenerate");
  auto theta = solve(sys, b);
  if (!theta) throw Error(ErrorCode::Singular, "Lee form system is inconsistent");
  return KForm<T>::one_form(*theta);
}

template <Scalar T>
bool is_kahler_direct(const HermitianStructure<T>& h) {
  h.require_integrable();
  return h.d_omega().is_zero();
}

template <Scalar T>
bool is_balanced_direct(const HermitianStructure<T>& h) {
  h.require_integrable();
  return h.algebra().d(wedge_power(h.omega(), h.half_dim() - 1)).is_zero();
}

template <Scalar T>
bool is_lcb_direct(const HermitianStructure<T>& h) {
  h.require_integrable();
  return h.algebra().d(lee_form(h)).is_zero();
}

/// d omega = theta ^ omega / (n-1) and d theta = 0.
template <Scalar T>
bool is_lck_direct(const HermitianStructure<T>& h) {
  h.require_integrable();
  KForm<T> theta = lee_form(h);
  if (!h.algebra().d(theta).is_zero()) return false;
  KForm<T> target = ScalarTraits<T>::from_ratio(1, h.half_dim() - 1) * wedge(theta, h.omega());
  return h.d_omega() == target;
}

template <Scalar T>
bool is_skt_direct(const HermitianStructure<T>& h) {
  h.require_integrable();
  return h.algebra().d(h.dc_omega()).is_zero();
}

/// Vaisman: LCK with Levi-Civita parallel Lee form. Both facts are reported.
template <Scalar T>
VaismanReport<T> vaisman_report(const HermitianStructure<T>& h) {
  VaismanReport<T> r;
  r.lck = is_lck_direct(h);
  r.kahler = is_kahler_direct(h);
  KForm<T> theta = lee_form(h);
  Vector<T> th = theta.as_vector();
  const Connection<T>& lc = h.levi_civita_connection();
  r.theta_parallel = true;
  // (nabla_{e_i} theta)(e_j) = -theta(nabla_{e_i} e_j) for left-invariant fields.
  for (int i = 0; i < h.algebra().dim() && r.theta_parallel; ++i)
    for (int j = 0; j < h.algebra().dim(); ++j)
      if (!is_zero(dot(th, lc[i].column(static_cast<std::size_t>(j))))) {
        r.theta_parallel = false;
        break;
      }
  return r;
}

template <Scalar T>
bool is_vaisman(const HermitianStructure<T>& h) {
  return vaisman_report(h).vaisman();
}

/// rho^B(X, Y) = -1/2 sum_i g(R^B(X, Y) f_i, J f_i) over a g-orthonormal frame,
/// evaluated basis-free as -1/2 tr(G^{-1} J^t G R^B(X, Y)).
template <Scalar T>
KForm<T> bismut_ricci_oracle(const HermitianStructure<T>& h) {
  const Connection<T>& b = h.bismut_connection();
  const int n = h.algebra().dim();
  const Matrix<T>& G = h.metric().matrix();
  Matrix<T> pre = inverse(G) * h.complex_structure().matrix().transpose() * G;
  const T minus_half = ScalarTraits<T>::from_ratio(-1, 2);
  KForm<T> rho(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      T v = (pre * b.curvature(i, j)).trace();
      rho.add_term((IndexMask{1} << i) | (IndexMask{1} << j), minus_half * v);
    }
  return rho;
}

/// rho(J., J.) = rho.
template <Scalar T>
bool is_type_11(const KForm<T>& rho, const Matrix<T>& j) {
  if (rho.degree() != 2) throw Error(ErrorCode::DimensionMismatch, "type (1,1) test needs a 2-form");
  return rho.pullback(j) == rho;
}

}  // namespace aalg
