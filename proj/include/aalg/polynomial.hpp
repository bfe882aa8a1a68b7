#pragma once

// Univariate polynomials with coefficients in a scalar field, stored from the
// constant term upwards. Division, gcd and the squarefree machinery are meant
// for the exact kind; characteristic polynomials work for any kind.

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aalg/matrix.hpp"

namespace aalg {

template <Scalar T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
  static Polynomial x() { return Polynomial(std::vector<T>{T(0), T(1)}); }
  /// x - r
  static Polynomial linear_root(const T& r) { return Polynomial(std::vector<T>{T(-r), T(1)}); }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<T>& coefficients() const noexcept { return c_; }
  T coefficient(int i) const { return i >= 0 && i <= degree() ? c_[static_cast<std::size_t>(i)] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  T operator()(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Matrix<T> operator()(const Matrix<T>& m) const {
    Matrix<T> acc(m.rows(), m.cols());
    const Matrix<T> id = Matrix<T>::identity(m.rows());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * m + (*it) * id;
    return acc;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(T(static_cast<long>(i)) * c_[i]);
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (c_.empty()) return *this;
    Polynomial p = *this;
    T inv = T(1) / c_.back();
    for (T& x : p.c_) x *= inv;
    return p;
  }

  /// p(y + s) as a polynomial in y.
  Polynomial taylor_shift(const T& s) const {
    std::vector<T> a = c_;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) a[j - 1] += s * a[j];
    return Polynomial(std::move(a));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + T(-1) * b; }
  friend Polynomial operator*(const T& s, Polynomial p) {
    for (T& x : p.c_) x *= s;
    p.trim();
    return p;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!scalar_equal(a.c_[i], b.c_[i])) return false;
    return true;
  }

  std::string to_string(const char* var = "x") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const T& c = c_[static_cast<std::size_t>(i)];
      if (ScalarTraits<T>::exact ? aalg::is_zero(c) : c == T(0)) continue;
      T mag = c < T(0) ? T(-c) : c;
      if (!first) os << (c < T(0) ? " - " : " + ");
      else if (c < T(0)) os << '-';
      const bool unit = scalar_equal(mag, T(1));
      if (!unit || i == 0) os << aalg::to_string(mag);
      if (i > 0) {
        if (!unit) os << '*';
        os << var;
        if (i > 1) os << '^' << i;
      }
      first = false;
    }
    return first ? "0" : os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }
  std::vector<T> c_;
};

/// Quotient and remainder; b must be non-zero.
template <Scalar T>
std::pair<Polynomial<T>, Polynomial<T>> divmod(Polynomial<T> a, const Polynomial<T>& b) {
  if (b.is_zero()) throw Error(ErrorCode::Singular, "polynomial division by zero");
  std::vector<T> q(static_cast<std::size_t>(std::max(0, a.degree() - b.degree() + 1)), T(0));
  std::vector<T> r = a.coefficients();
  const T lead = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    T f = r[static_cast<std::size_t>(k + b.degree())] / lead;
    q[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= b.degree(); ++j) r[static_cast<std::size_t>(k + j)] -= f * b.coefficient(j);
    r[static_cast<std::size_t>(k + b.degree())] = T(0);
  }
  return {Polynomial<T>(std::move(q)), Polynomial<T>(std::move(r))};
}

/// Monic greatest common divisor (zero if both inputs vanish).
template <Scalar T>
Polynomial<T> gcd(Polynomial<T> a, Polynomial<T> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <Scalar T>
Polynomial<T> exact_quotient(const Polynomial<T>& a, const Polynomial<T>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error(ErrorCode::Precondition, "polynomial division is not exact");
  return q;
}

/// Yun's algorithm: p = c * prod_i factors[i]^(i+1) with squarefree, pairwise
/// coprime monic factors (some possibly constant 1).
template <Scalar T>
std::vector<Polynomial<T>> squarefree_decomposition(const Polynomial<T>& p) {
  std::vector<Polynomial<T>> out;
  if (p.degree() < 1) return out;
  Polynomial<T> f = p.monic();
  Polynomial<T> a = gcd(f, f.derivative());
  Polynomial<T> b = exact_quotient(f, a);
  Polynomial<T> c = exact_quotient(f.derivative(), a);
  Polynomial<T> d = c - b.derivative();
  while (b.degree() > 0) {
    Polynomial<T> g = gcd(b, d);
    out.push_back(g);
    b = exact_quotient(b, g);
    c = exact_quotient(d, g);
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

template <Scalar T>
Polynomial<T> squarefree_part(const Polynomial<T>& p) {
  if (p.degree() < 1) return p.monic();
  return exact_quotient(p.monic(), gcd(p, p.derivative()));
}

template <Scalar T>
bool is_squarefree(const Polynomial<T>& p) {
  return gcd(p, p.derivative()).degree() == 0;
}

/// Sturm sequence p, p', -rem(...), ...
template <Scalar T>
std::vector<Polynomial<T>> sturm_sequence(const Polynomial<T>& p) {
  std::vector<Polynomial<T>> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    auto r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(T(-1) * r);
  }
  return seq;
}

namespace detail {
template <Scalar T>
int sign_changes(const std::vector<T>& values) {
  int changes = 0, last = 0;
  for (const T& v : values) {
    int s = v > T(0) ? 1 : (v < T(0) ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}
}  // namespace detail

/// Number of distinct real roots in (-inf, x]; x should not be a root.
template <Scalar T>
int count_roots_below(const Polynomial<T>& p, const T& x) {
  auto seq = sturm_sequence(p);
  std::vector<T> at_x, at_minus_inf;
  for (const auto& s : seq) {
    at_x.push_back(s(x));
    T lead = s.leading();
    at_minus_inf.push_back(s.degree() % 2 == 0 ? lead : T(-lead));
  }
  return detail::sign_changes(at_minus_inf) - detail::sign_changes(at_x);
}

template <Scalar T>
int count_real_roots(const Polynomial<T>& p) {
  auto seq = sturm_sequence(p);
  std::vector<T> plus, minus;
  for (const auto& s : seq) {
    T lead = s.leading();
    plus.push_back(lead);
    minus.push_back(s.degree() % 2 == 0 ? lead : T(-lead));
  }
  return detail::sign_changes(minus) - detail::sign_changes(plus);
}

/// det(x Id - M) by Berkowitz's division-free recurrence.
template <Scalar T>
Polynomial<T> characteristic_polynomial(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "characteristic polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<T> p{T(1)};  // highest degree first
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<T> col(r + 2, T(0));
    col[0] = T(1);
    col[1] = T(-m(r, r));
    if (r > 0) {
      Vector<T> c(r);
      for (std::size_t i = 0; i < r; ++i) c[i] = m(i, r);
      Matrix<T> sub = m.block(0, 0, r, r);
      for (std::size_t k = 2; k < r + 2; ++k) {
        T s(0);
        for (std::size_t j = 0; j < r; ++j) s += m(r, j) * c[j];
        col[k] = T(-s);
        c = sub * c;
      }
    }
    std::vector<T> q(r + 2, T(0));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) q[i] += col[i - j] * p[j];
    p = std::move(q);
  }
  std::vector<T> low(p.rbegin(), p.rend());
  return Polynomial<T>(std::move(low));
}

/// Minimal polynomial from the first linear dependency among vec(M^k).
template <Scalar T>
Polynomial<T> minimal_polynomial(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "minimal polynomial of non-square matrix");
  const std::size_t n = m.rows();
  auto vec = [n](const Matrix<T>& a) {
    Vector<T> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = a(i, j);
    return v;
  };
  std::vector<Vector<T>> powers{vec(Matrix<T>::identity(n))};
  Matrix<T> current = Matrix<T>::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    current = current * m;
    Vector<T> target = vec(current);
    Matrix<T> basis = Matrix<T>::from_columns(powers, n * n);
    if (auto x = solve(basis, target)) {
      std::vector<T> coeffs;
      for (std::size_t i = 0; i < k; ++i) coeffs.push_back(T(-(*x)[i]));
      coeffs.push_back(T(1));
      return Polynomial<T>(std::move(coeffs));
    }
    powers.push_back(std::move(target));
  }
  return characteristic_polynomial(m);
}

}  // namespace aalg
