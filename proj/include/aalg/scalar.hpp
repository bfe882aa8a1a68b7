#pragma once

// Scalar kernel. Two kinds are supported: exact rationals (GMP) and float64
// compared against a single global tolerance. Every container is homogeneous
// in its scalar kind; generic code is written against ScalarTraits<T>.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <optional>
#include <string>

namespace aalg {

using Rational = mpq_class;

/// Global float tolerance. Defaults to 1e-9, or to AALG_EPSILON when set.
double tolerance() noexcept;
void set_tolerance(double eps) noexcept;

/// Parses "p", "-p/q" or a decimal string into a rational; throws on failure.
Rational parse_rational(const std::string& text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* kind = "exact";

  static Rational from_int(long n) { return Rational(n); }
  static Rational from_ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  static Rational from_rational(const Rational& r) { return r; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
  /// Exact square root when numerator and denominator are perfect squares.
  static std::optional<Rational> sqrt(const Rational& x);
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* kind = "float";

  static double from_int(long n) { return static_cast<double>(n); }
  static double from_ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rational(const Rational& r) { return r.get_d(); }
  static bool is_zero(double x) { return std::abs(x) <= tolerance(); }
  static double abs(double x) { return std::abs(x); }
  static double to_double(double x) { return x; }
  static std::optional<double> sqrt(double x) {
    if (x < -tolerance()) return std::nullopt;
    return std::sqrt(x < 0 ? 0.0 : x);
  }
  static std::string to_string(double x);
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
bool is_zero(const T& x) {
  return ScalarTraits<T>::is_zero(x);
}

template <Scalar T>
bool scalar_equal(const T& a, const T& b) {
  return ScalarTraits<T>::is_zero(T(a - b));
}

template <Scalar T>
T scalar_abs(const T& x) {
  return ScalarTraits<T>::abs(x);
}

template <Scalar T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <Scalar T>
std::string to_string(const T& x) {
  return ScalarTraits<T>::to_string(x);
}

}  // namespace aalg
