#include "aalg/lchk.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <numeric>

#include "aalg/polynomial.hpp"

namespace aalg {

namespace {

void check_dimension(std::size_t rows, std::size_t cols) {
  if (rows != cols) throw Error(ErrorCode::BadDimension, "D must be square");
  if (rows % 4 != 3) throw Error(ErrorCode::BadDimension, "D must have size 4m-1, got " + std::to_string(rows));
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  return out;
}

/// Rational roots of p, each once.
std::vector<Rational> rational_roots(const Polynomial<Rational>& p) {
  std::vector<Rational> roots;
  if (p.degree() < 1) return roots;
  Polynomial<Rational> f = p;
  if (sgn(f.coefficient(0)) == 0) {
    roots.push_back(0);
    while (f.degree() > 0 && sgn(f.coefficient(0)) == 0) f = divmod(f, Polynomial<Rational>::x()).first;
  }
  if (f.degree() < 1) return roots;
  mpz_class lcm = 1;
  for (const auto& c : f.coefficients()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : f.coefficients()) ints.push_back(mpz_class(c * lcm));
  for (const auto& num : divisors(ints.front()))
    for (const auto& den : divisors(ints.back()))
      for (int s : {1, -1}) {
        Rational cand(num * s, den);
        cand.canonicalize();
        if (sgn(f(cand)) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
      }
  return roots;
}

std::string complex_label(const std::string& a, const std::string& b) { return a + " +/- " + b + "i"; }

/// Columns u1..u4 per block, as in the canonical form, then ker(N).
template <Scalar T>
Matrix<T> assemble_basis(const Matrix<T>& n, const std::vector<std::pair<T, int>>& blocks) {
  const std::size_t dim = n.rows();
  const Matrix<T> id = Matrix<T>::identity(dim);
  std::vector<Vector<T>> cols;
  auto independent = [&](const std::vector<Vector<T>>& base, const Vector<T>& w) {
    auto all = base;
    all.push_back(w);
    return rank(Matrix<T>::from_columns(all, dim)) == all.size();
  };
  for (const auto& [b, count] : blocks) {
    auto w = null_space(n * n + (b * b) * id);
    int made = 0;
    std::vector<Vector<T>> local = cols;
    for (std::size_t s = 0; s < w.size() && made < count; ++s) {
      if (!independent(local, w[s])) continue;
      Vector<T> u1 = w[s];
      Vector<T> u2 = (T(-1) / b) * (n * u1);
      local.push_back(u1);
      local.push_back(u2);
      bool found = false;
      for (std::size_t t = 0; t < w.size(); ++t) {
        if (!independent(local, w[t])) continue;
        Vector<T> u3 = w[t];
        Vector<T> u4 = (T(1) / b) * (n * u3);
        local.push_back(u3);
        local.push_back(u4);
        found = true;
        break;
      }
      if (!found) throw Error(ErrorCode::WitnessFailure, "eigenspace too small for a quaternionic block");
      ++made;
    }
    if (made < count) throw Error(ErrorCode::WitnessFailure, "eigenspace too small for the block count");
    cols = std::move(local);
  }
  for (const auto& k : null_space(n)) cols.push_back(k);
  if (cols.size() != dim) throw Error(ErrorCode::WitnessFailure, "canonical basis is incomplete");
  return Matrix<T>::from_columns(cols, dim);
}

}  // namespace

LchkVerdict<Rational> lchk_admissible(const Matrix<Rational>& d) {
  check_dimension(d.rows(), d.cols());
  const long dim = static_cast<long>(d.rows());
  LchkVerdict<Rational> v;
  v.diagonalizable = is_squarefree(minimal_polynomial(d));
  if (!v.diagonalizable) v.diagnostics.push_back("D is not complex-diagonalizable (minimal polynomial has a repeated root)");
  v.a = d.trace() / Rational(dim);
  const std::string a_str = v.a.get_str();

  Polynomial<Rational> q = characteristic_polynomial(d).taylor_shift(v.a);
  const int deg = q.degree();
  int k = 0;
  while (k <= deg && sgn(q.coefficient(k)) == 0) ++k;
  v.mult_a = k;
  bool parity = true;
  for (int i = 0; i <= deg; ++i)
    if ((deg - i) % 2 == 1 && sgn(q.coefficient(i)) != 0) parity = false;
  std::vector<Rational> rc;
  if (parity)
    for (int i = k; i <= deg; i += 2) rc.push_back(q.coefficient(i));
  Polynomial<Rational> r(rc);
  if (parity) {
    if (r.degree() <= 0) {
      v.cond_i = true;
    } else {
      Polynomial<Rational> s = squarefree_part(r);
      v.cond_i = count_roots_below(s, Rational(0)) == s.degree();
    }
  }
  if (!v.cond_i) v.diagnostics.push_back("(i) fails: the spectrum is not contained in a + iR for a single a");
  v.cond_ii = v.cond_i && k >= 3;
  if (v.cond_i && !v.cond_ii)
    v.diagnostics.push_back("(ii) fails: m_D(" + a_str + ") = " + std::to_string(k) + " < 3");
  if (v.cond_i && v.cond_ii) v.a_candidates.push_back(v.a);

  if (v.cond_i) {
    v.table.push_back({a_str, k});
    v.cond_iii = true;
    auto factors = squarefree_decomposition(r);
    for (std::size_t idx = 0; idx < factors.size(); ++idx) {
      const int mult = static_cast<int>(idx + 1);
      const Polynomial<Rational>& f = factors[idx];
      if (f.degree() < 1) continue;
      if (mult % 2) v.cond_iii = false;
      auto roots = rational_roots(f);
      Polynomial<Rational> rest = f;
      for (const auto& z : roots) {
        rest = exact_quotient(rest, Polynomial<Rational>::linear_root(z));
        Rational beta = -z;
        auto b = ScalarTraits<Rational>::sqrt(beta);
        v.table.push_back({complex_label(a_str, b ? b->get_str() : "sqrt(" + beta.get_str() + ")"), mult});
        if (b)
          v.blocks.emplace_back(*b, mult / 2);
        else
          v.blocks_exact = false;
      }
      if (rest.degree() > 0) {
        v.blocks_exact = false;
        v.table.push_back({complex_label(a_str, "sqrt(-z)") + " for each root z of " + rest.to_string("z"), mult});
      }
    }
    if (!v.cond_iii) v.diagnostics.push_back("(iii) fails: some eigenvalue a + ib with b != 0 has odd multiplicity");
  }
  std::sort(v.blocks.begin(), v.blocks.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  v.admissible = v.diagonalizable && v.cond_i && v.cond_ii && v.cond_iii;
  v.hyperkahler = v.admissible && sgn(v.a) == 0;
  if (v.admissible) v.zero_blocks = (k - 3) / 4;
  if (!v.admissible) v.blocks.clear();
  return v;
}

LchkVerdict<double> lchk_admissible(const Matrix<double>& d) {
  check_dimension(d.rows(), d.cols());
  const Eigen::Index n = static_cast<Eigen::Index>(d.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double tol = 1e3 * tolerance() * scale;

  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  struct Cluster {
    std::complex<double> center;
    int size = 0;
  };
  std::vector<Cluster> clusters;
  for (const auto& z : ev) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) { return std::abs(c.center - z) <= tol; });
    if (it == clusters.end()) {
      clusters.push_back({z, 1});
    } else {
      it->center = (it->center * double(it->size) + z) / double(it->size + 1);
      ++it->size;
    }
  }

  LchkVerdict<double> v;
  v.diagonalizable = true;
  for (const auto& c : clusters) {
    Eigen::MatrixXcd shifted = m.cast<std::complex<double>>();
    shifted.diagonal().array() -= c.center;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    int nullity = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) <= tol) ++nullity;
    if (nullity < c.size) v.diagonalizable = false;
  }
  if (!v.diagonalizable) v.diagnostics.push_back("D is not complex-diagonalizable (geometric < algebraic multiplicity)");

  v.a = m.trace() / static_cast<double>(n);
  const std::string a_str = ScalarTraits<double>::to_string(v.a);
  v.cond_i = std::all_of(ev.begin(), ev.end(), [&](const auto& z) { return std::abs(z.real() - v.a) <= tol; });
  if (!v.cond_i) v.diagnostics.push_back("(i) fails: the spectrum is not contained in a + iR for a single a");
  int k = 0;
  for (const auto& c : clusters)
    if (std::abs(c.center.imag()) <= tol && std::abs(c.center.real() - v.a) <= tol) k += c.size;
  v.mult_a = k;
  v.cond_ii = v.cond_i && k >= 3;
  if (v.cond_i && !v.cond_ii)
    v.diagnostics.push_back("(ii) fails: m_D(" + a_str + ") = " + std::to_string(k) + " < 3");
  if (v.cond_i && v.cond_ii) v.a_candidates.push_back(v.a);
  if (v.cond_i) {
    v.table.push_back({a_str, k});
    v.cond_iii = true;
    for (const auto& c : clusters) {
      if (c.center.imag() <= tol) continue;
      v.table.push_back({complex_label(a_str, ScalarTraits<double>::to_string(c.center.imag())), c.size});
      if (c.size % 2) v.cond_iii = false;
      v.blocks.emplace_back(c.center.imag(), c.size / 2);
    }
    if (!v.cond_iii) v.diagnostics.push_back("(iii) fails: some eigenvalue a + ib with b != 0 has odd multiplicity");
  }
  std::sort(v.blocks.begin(), v.blocks.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  v.admissible = v.diagonalizable && v.cond_i && v.cond_ii && v.cond_iii;
  v.hyperkahler = v.admissible && std::abs(v.a) <= tol;
  if (v.admissible) v.zero_blocks = (k - 3) / 4;
  if (!v.admissible) v.blocks.clear();
  return v;
}

namespace {

template <Scalar T>
HypercomplexTriple<T> construct(const Matrix<T>& d, const LchkVerdict<T>& v) {
  if (!v.admissible) {
    std::string why = v.diagnostics.empty() ? "D is not admissible" : v.diagnostics.front();
    throw Error(ErrorCode::NotAdmissible, why);
  }
  if (!v.blocks_exact) throw Error(ErrorCode::InexactSqrt, "some b is irrational; use the float kernel");
  const std::size_t dim = d.rows();
  Matrix<T> n = d - v.a * Matrix<T>::identity(dim);
  Matrix<T> p = assemble_basis(n, v.blocks);
  Matrix<T> canonical = canonical_form(v.a, v.blocks, v.zero_blocks);
  Matrix<T> conj = inverse(p) * d * p;
  if constexpr (ScalarTraits<T>::exact) {
    if (!(conj == canonical)) throw Error(ErrorCode::WitnessFailure, "change of basis does not reach the canonical form");
  } else {
    if ((conj - canonical).max_abs() > 1e3 * tolerance() * std::max(1.0, d.max_abs()))
      throw Error(ErrorCode::WitnessFailure, "change of basis does not reach the canonical form");
  }
  return triple_from_canonical(v.a, canonical, std::move(p));
}

}  // namespace

HypercomplexTriple<Rational> construct_lchk(const Matrix<Rational>& d) { return construct(d, lchk_admissible(d)); }

HypercomplexTriple<double> construct_lchk(const Matrix<double>& d) { return construct(d, lchk_admissible(d)); }

}  // namespace aalg
