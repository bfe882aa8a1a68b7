#pragma once

// Necessary condition for lattices in R^n x_B R: some exp(t0 B) with t0 != 0
// must be conjugate to an integer matrix, so its characteristic and minimal
// polynomials have integer coefficients. The probe never claims existence.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aalg/high_precision.hpp"
#include "aalg/polynomial.hpp"

namespace aalg {

namespace detail {

template <Scalar T>
T exp_of(const T& x) {
  using std::exp;
  return exp(x);
}

template <Scalar T>
T cos_of(const T& x) {
  using std::cos;
  return cos(x);
}

template <Scalar T>
T sin_of(const T& x) {
  using std::sin;
  return sin(x);
}

/// Splits m into diagonal 1x1 and 2x2 rotational blocks [[s, r], [-r, s]];
/// returns the block starts, or nothing if m has another shape.
template <Scalar T>
std::optional<std::vector<std::size_t>> rotational_blocks(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> starts;
  std::size_t i = 0;
  while (i < n) {
    starts.push_back(i);
    bool pair = i + 1 < n && (m(i, i + 1) != T(0) || m(i + 1, i) != T(0));
    i += pair ? 2 : 1;
  }
  for (std::size_t b = 0; b < starts.size(); ++b) {
    std::size_t s = starts[b];
    std::size_t e = b + 1 < starts.size() ? starts[b + 1] : n;
    if (e - s == 2 && (m(s, s) != m(s + 1, s + 1) || m(s, s + 1) != -m(s + 1, s))) return std::nullopt;
    for (std::size_t r = s; r < e; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if ((c < s || c >= e) && m(r, c) != T(0)) return std::nullopt;
  }
  return starts;
}

}  // namespace detail

/// exp(tB). Closed form on diagonal and rotational block shapes, otherwise
/// Taylor series with scaling and squaring.
template <Scalar T>
Matrix<T> matrix_exp(const Matrix<T>& b, const T& t) {
  static_assert(!ScalarTraits<T>::exact, "matrix_exp needs a float scalar");
  if (!b.is_square()) throw Error(ErrorCode::DimensionMismatch, "matrix_exp: not square");
  const std::size_t n = b.rows();
  Matrix<T> m = t * b;
  if (auto starts = detail::rotational_blocks(m)) {
    Matrix<T> out(n, n);
    for (std::size_t k = 0; k < starts->size(); ++k) {
      std::size_t s = (*starts)[k];
      std::size_t e = k + 1 < starts->size() ? (*starts)[k + 1] : n;
      T scale = detail::exp_of(m(s, s));
      if (e - s == 1) {
        out(s, s) = scale;
        continue;
      }
      T c = detail::cos_of(m(s, s + 1));
      T sn = detail::sin_of(m(s, s + 1));
      out(s, s) = scale * c;
      out(s + 1, s + 1) = scale * c;
      out(s, s + 1) = scale * sn;
      out(s + 1, s) = -scale * sn;
    }
    return out;
  }
  T norm(0);
  for (std::size_t i = 0; i < n; ++i) {
    T row(0);
    for (std::size_t j = 0; j < n; ++j) row += scalar_abs(m(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > T(0.5)) {
    norm /= 2;
    ++squarings;
  }
  m = m * T(std::ldexp(1.0, -squarings));
  const T eps = std::numeric_limits<T>::epsilon();
  Matrix<T> sum = Matrix<T>::identity(n);
  Matrix<T> term = Matrix<T>::identity(n);
  for (int k = 1; k < 200; ++k) {
    term = term * m * (T(1) / T(k));
    sum += term;
    if (term.max_abs() <= eps) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Minimal polynomial for float scalars. Powers are normalised before the
/// dependency test so the rank decision is relative to their size.
template <Scalar T>
Polynomial<T> float_minimal_polynomial(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  auto vec = [n](const Matrix<T>& a) {
    Vector<T> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = a(i, j);
    return v;
  };
  std::vector<Vector<T>> powers;
  std::vector<T> scales;
  Matrix<T> current = Matrix<T>::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) current = current * m;
    Vector<T> v = vec(current);
    T s(0);
    for (const T& x : v) s = std::max(s, scalar_abs(x));
    if (is_zero(s)) {
      std::vector<T> coeffs(k + 1, T(0));
      coeffs[k] = T(1);
      return Polynomial<T>(std::move(coeffs));
    }
    v = (T(1) / s) * v;
    if (k > 0)
      if (auto y = solve(Matrix<T>::from_columns(powers, n * n), v)) {
        std::vector<T> coeffs;
        for (std::size_t i = 0; i < k; ++i) coeffs.push_back(T(-(*y)[i] * s / scales[i]));
        coeffs.push_back(T(1));
        return Polynomial<T>(std::move(coeffs));
      }
    powers.push_back(std::move(v));
    scales.push_back(s);
  }
  return characteristic_polynomial(m);
}

template <Scalar T>
struct CharMinPoly {
  Polynomial<T> characteristic;
  Polynomial<T> minimal;
};

template <Scalar T>
CharMinPoly<T> char_min_poly(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "char_min_poly: not square");
  if constexpr (ScalarTraits<T>::exact)
    return {characteristic_polynomial(m), minimal_polynomial(m)};
  else
    return {characteristic_polynomial(m), float_minimal_polynomial(m)};
}

enum class Integrality { Integer, Warn, NonInteger };

std::string integrality_name(Integrality v);

struct TSample {
  HighFloat t;
  /// k for samples t = 2 log k, 0 for grid samples.
  int k = 0;
};

/// t = 2 log k for k = 2, ..., k_max.
std::vector<TSample> two_log_k_rule(int k_max);

/// n evenly spaced points from lo to hi inclusive.
std::vector<TSample> uniform_grid(const HighFloat& lo, const HighFloat& hi, int n);

struct ProbeOptions {
  double eps_int = 1e-6;
  /// Also evaluates k^2 (k^2 + a_2) + a_1 on cubic minimal polynomials.
  bool remark_pattern = false;
  unsigned threads = 1;
};

struct ProbePoint {
  TSample sample;
  std::vector<HighFloat> char_coeffs;
  std::vector<HighFloat> min_coeffs;
  double max_deviation = 0;
  Integrality verdict = Integrality::NonInteger;
  std::optional<HighFloat> remark_value;
  std::optional<double> remark_residual;
};

struct IntegralityReport {
  double eps_int = 1e-6;
  std::vector<ProbePoint> points;
  /// Index of the first nonzero t with integer polynomials.
  std::optional<std::size_t> found;
  std::string overall() const { return found ? "FOUND" : "NONE_IN_RANGE"; }
};

ProbePoint probe_point(const Matrix<HighFloat>& b, const TSample& sample, const ProbeOptions& options);

IntegralityReport integrality_probe(const Matrix<HighFloat>& b, const std::vector<TSample>& samples,
                                    const ProbeOptions& options = {});

}  // namespace aalg
