#pragma once

// 50-digit binary floating point for the lattice probe, where coefficients of
// exp(tB) grow like e^{t |lambda|} and float64 loses the integrality signal.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "aalg/scalar.hpp"

namespace aalg {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

template <>
struct ScalarTraits<HighFloat> {
  static constexpr bool exact = false;
  static constexpr const char* kind = "float50";
  static constexpr double zero_threshold = 1e-35;

  static HighFloat from_int(long n) { return HighFloat(n); }
  static HighFloat from_ratio(long num, long den) { return HighFloat(num) / HighFloat(den); }
  static HighFloat from_rational(const Rational& r) {
    return HighFloat(r.get_num().get_str()) / HighFloat(r.get_den().get_str());
  }
  static bool is_zero(const HighFloat& x) { return boost::multiprecision::abs(x) <= zero_threshold; }
  static HighFloat abs(const HighFloat& x) { return boost::multiprecision::abs(x); }
  static double to_double(const HighFloat& x) { return x.convert_to<double>(); }
  static std::optional<HighFloat> sqrt(const HighFloat& x) {
    if (x < 0) return std::nullopt;
    return boost::multiprecision::sqrt(x);
  }
  static std::string to_string(const HighFloat& x) { return x.str(20); }
};

}  // namespace aalg
