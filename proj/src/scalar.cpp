#include "aalg/scalar.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>

#include "aalg/error.hpp"

namespace aalg {

namespace {

double initial_tolerance() {
  if (const char* env = std::getenv("AALG_EPSILON")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 1e-9;
}

std::atomic<double>& tolerance_slot() {
  static std::atomic<double> slot{initial_tolerance()};
  return slot;
}

std::optional<mpz_class> exact_isqrt(const mpz_class& n) {
  if (sgn(n) < 0) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r != n) return std::nullopt;
  return r;
}

}  // namespace

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::AntisymmetryViolation: return "ANTISYMMETRY_VIOLATION";
    case ErrorCode::JacobiViolation: return "JACOBI_VIOLATION";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::NotComplexStructure: return "NOT_COMPLEX_STRUCTURE";
    case ErrorCode::NonIntegrable: return "NON_INTEGRABLE";
    case ErrorCode::IdealNotAbelian: return "IDEAL_NOT_ABELIAN";
    case ErrorCode::JNotCompatible: return "J_NOT_COMPATIBLE";
    case ErrorCode::NotAlmostAbelian: return "NOT_ALMOST_ABELIAN";
    case ErrorCode::CommutationFailure: return "COMMUTATION_FAILURE";
    case ErrorCode::Precondition: return "PRECONDITION";
    case ErrorCode::NotAdmissible: return "NOT_ADMISSIBLE";
    case ErrorCode::BadDimension: return "BAD_DIMENSION";
    case ErrorCode::ConstraintViolation: return "CONSTRAINT_VIOLATION";
    case ErrorCode::WitnessFailure: return "WITNESS_FAILURE";
    case ErrorCode::InexactSqrt: return "INEXACT_SQRT";
    case ErrorCode::Syntax: return "SYNTAX";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::UnboundParameter: return "UNBOUND_PARAMETER";
    case ErrorCode::Input: return "INPUT";
  }
  return "UNKNOWN";
}

double tolerance() noexcept { return tolerance_slot().load(std::memory_order_relaxed); }

void set_tolerance(double eps) noexcept { tolerance_slot().store(eps, std::memory_order_relaxed); }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::Input, "empty number");
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw Error(ErrorCode::Input, "bad rational literal '" + text + "'");
    if (r.get_den() == 0) throw Error(ErrorCode::Input, "zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
  }
  // Decimal: digits after the point become a power-of-ten denominator.
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const std::size_t frac = text.size() - dot - 1;
  mpz_class num;
  if (digits == "-" || digits == "+" || digits.empty() || num.set_str(digits, 10) != 0)
    throw Error(ErrorCode::Input, "bad decimal literal '" + text + "'");
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::optional<Rational> ScalarTraits<Rational>::sqrt(const Rational& x) {
  auto n = exact_isqrt(x.get_num());
  auto d = exact_isqrt(x.get_den());
  if (!n || !d) return std::nullopt;
  Rational r(*n, *d);
  r.canonicalize();
  return r;
}

std::string ScalarTraits<double>::to_string(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos && s.find("inf") == std::string::npos &&
      s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

}  // namespace aalg
