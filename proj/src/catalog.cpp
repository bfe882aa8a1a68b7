#include "aalg/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include "aalg/almost_abelian.hpp"
#include "aalg/catalog_manifest.hpp"

namespace aalg {

namespace {

using Q = Rational;

const std::string kManifestText = kCatalogManifest;

// ---------------------------------------------------------------------------
// Witness recipes

enum class J1Kind { Paired, Crossed, Standard };

struct Recipe {
  Q a;
  Vector<Q> v;
  Matrix<Q> A;
  J1Kind j1 = J1Kind::Paired;
};

Matrix<Q> rot(const Q& s, const Q& t) { return Matrix<Q>{{s, t}, {-t, s}}; }

Matrix<Q> scalar(const Q& s, std::size_t n) { return s * Matrix<Q>::identity(n); }

Matrix<Q> blocks(std::vector<Matrix<Q>> parts) { return block_diagonal(parts); }

/// [[q, 1, -1, 0], [-1, q, 0, -1], [0, 0, q, 1], [0, 0, -1, q]].
Matrix<Q> nilpotent_rotation(const Q& q) {
  return Matrix<Q>{{q, 1, -1, 0}, {-1, q, 0, -1}, {0, 0, q, 1}, {0, 0, -1, q}};
}

/// pI + E_{01} + E_{23}, commuting with the crossed J_1.
Matrix<Q> crossed_jordan(const Q& p) {
  Matrix<Q> a = scalar(p, 4);
  a(0, 1) = 1;
  a(2, 3) = 1;
  return a;
}

/// J_1 e_0 = e_2, J_1 e_1 = e_3.
Matrix<Q> crossed_j1() {
  Matrix<Q> j(4, 4);
  j(2, 0) = 1;
  j(0, 2) = -1;
  j(3, 1) = 1;
  j(1, 3) = -1;
  return j;
}

Vector<Q> unit4(std::size_t i) { return Vector<Q>::unit(4, i); }

Recipe s2n_recipe(int n, const Bindings& b) {
  const Q a = b.at("a");
  const Q c = b.at("c");
  std::vector<Matrix<Q>> parts{rot(-a / 2, 1)};
  for (int k = 1; k < n - 1; ++k) parts.push_back(rot(0, c));
  Matrix<Q> A = blocks(parts);
  return {a, Vector<Q>(A.rows()), A, J1Kind::Paired};
}

using RecipeFn = std::function<Recipe(const Bindings&)>;

const std::map<std::string, RecipeFn>& recipes() {
  static const std::map<std::string, RecipeFn> table = [] {
    std::map<std::string, RecipeFn> t;
    auto zero = [] { return Vector<Q>(4); };
    auto P = [](const Bindings& b, const char* n) { return b.at(n); };
    t["g1"] = [=](const Bindings& b) { return Recipe{1, zero(), scalar(P(b, "p"), 4)}; };
    t["g2"] = [=](const Bindings& b) {
      return Recipe{P(b, "p"), zero(), blocks({rot(P(b, "q"), 1), scalar(P(b, "q"), 2)})};
    };
    t["g3"] = [=](const Bindings& b) {
      return Recipe{P(b, "p"), zero(), blocks({rot(P(b, "q"), 1), rot(P(b, "q"), P(b, "r"))})};
    };
    t["g4"] = [=](const Bindings&) { return Recipe{0, zero(), scalar(1, 4)}; };
    t["g5"] = [=](const Bindings& b) { return Recipe{0, zero(), blocks({rot(1, P(b, "r")), scalar(1, 2)})}; };
    t["g6"] = [=](const Bindings& b) {
      return Recipe{0, zero(), blocks({rot(P(b, "p"), 1), rot(P(b, "p"), P(b, "r"))})};
    };
    t["n1"] = [=](const Bindings&) { return Recipe{0, unit4(2), Matrix<Q>(4, 4)}; };
    t["n2"] = [=](const Bindings&) { return Recipe{0, unit4(1), crossed_jordan(0), J1Kind::Crossed}; };
    t["l1"] = [=](const Bindings& b) {
      return Recipe{1, zero(), Matrix<Q>::diagonal({P(b, "p"), P(b, "p"), P(b, "q"), P(b, "q")})};
    };
    t["l2"] = [=](const Bindings& b) { return Recipe{1, zero(), crossed_jordan(P(b, "p")), J1Kind::Crossed}; };
    t["l3"] = [=](const Bindings& b) {
      return Recipe{P(b, "p"), zero(), blocks({scalar(P(b, "q"), 2), rot(P(b, "r"), 1)})};
    };
    t["l4"] = [=](const Bindings& b) {
      return Recipe{P(b, "p"), zero(), blocks({rot(P(b, "q"), 1), rot(P(b, "r"), P(b, "s"))})};
    };
    t["l5"] = [=](const Bindings& b) { return Recipe{P(b, "p"), zero(), nilpotent_rotation(P(b, "q"))}; };
    t["l6"] = [=](const Bindings&) { return Recipe{0, zero(), Matrix<Q>::diagonal({1, 1, 0, 0})}; };
    t["l7"] = [=](const Bindings&) {
      Matrix<Q> A(4, 4);
      A(0, 0) = A(0, 1) = A(3, 2) = A(3, 3) = 1;
      return Recipe{1, unit4(2), A, J1Kind::Standard};
    };
    t["l8"] = [=](const Bindings& b) { return Recipe{0, zero(), blocks({rot(P(b, "p"), 1), Matrix<Q>(2, 2)})}; };
    t["l9"] = [=](const Bindings& b) {
      return Recipe{1, zero(), Matrix<Q>::diagonal({P(b, "p"), P(b, "p"), 0, 0})};
    };
    t["l10"] = [=](const Bindings& b) {
      return Recipe{P(b, "p"), zero(), blocks({rot(P(b, "q"), 1), Matrix<Q>(2, 2)})};
    };
    t["l11"] = [=](const Bindings& b) {
      return Recipe{0, zero(), Matrix<Q>::diagonal({1, 1, P(b, "p"), P(b, "p")})};
    };
    t["l12"] = [=](const Bindings&) { return Recipe{0, unit4(2), Matrix<Q>::diagonal({1, 1, 0, 0})}; };
    t["l13"] = [=](const Bindings& b) {
      return Recipe{0, zero(), blocks({scalar(1, 2), rot(P(b, "q"), P(b, "r"))})};
    };
    t["l14"] = [=](const Bindings& b) {
      return Recipe{0, unit4(2), blocks({rot(P(b, "p"), 1), Matrix<Q>(2, 2)})};
    };
    t["l15"] = [=](const Bindings&) { return Recipe{0, zero(), crossed_jordan(1), J1Kind::Crossed}; };
    t["l16"] = [=](const Bindings& b) {
      return Recipe{0, zero(), blocks({rot(P(b, "p"), 1), rot(P(b, "q"), P(b, "r"))})};
    };
    t["l17"] = [=](const Bindings& b) { return Recipe{0, zero(), nilpotent_rotation(P(b, "p"))}; };
    t["s4"] = [](const Bindings& b) { return s2n_recipe(2, b); };
    t["s6"] = [](const Bindings& b) { return s2n_recipe(3, b); };
    t["s8"] = [](const Bindings& b) { return s2n_recipe(4, b); };
    return t;
  }();
  return table;
}

Matrix<Q> j1_of(J1Kind kind, std::size_t m) {
  switch (kind) {
    case J1Kind::Paired: return paired_j1<Q>(m);
    case J1Kind::Crossed: return crossed_j1();
    case J1Kind::Standard: return standard_j1<Q>(m);
  }
  return paired_j1<Q>(m);
}

/// Second metrics of the explicit examples, in the entry basis.
std::optional<Matrix<Q>> primed_metric(const std::string& name) {
  if (name == "aff2+2R") return Matrix<Q>{{2, 0, 1, 0}, {0, 2, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}};
  if (name == "b2") {
    Matrix<Q> g = Matrix<Q>::diagonal({3, 1, 1, 1, 1, 3});
    for (auto [i, j] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {3, 5}, {4, 5}}) g(i, j) = g(j, i) = 1;
    return g;
  }
  return std::nullopt;
}

bool is_explicit(const std::string& name) { return name == "aff2+2R" || name == "h3+R" || name == "b2"; }

bool is_lchk_entry(const std::string& name) { return name.rfind("lchk-", 0) == 0; }

std::vector<int> zero_based(const std::vector<int>& one_based) {
  std::vector<int> out;
  for (int i : one_based) out.push_back(i - 1);
  return out;
}

int missing_index(const std::vector<int>& ideal, int dim) {
  for (int k = 0; k < dim; ++k)
    if (std::find(ideal.begin(), ideal.end(), k) == ideal.end()) return k;
  throw Error(ErrorCode::Input, "ideal covers the whole algebra");
}

std::optional<HermitianData<Q>> try_extract(const HermitianStructure<Q>& h) {
  try {
    return extract_data(h);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Matrix<Q> lchk_matrix(const LieAlgebra<Q>& l) {
  const std::size_t k = static_cast<std::size_t>(l.dim() - 1);
  return l.ad_basis(l.dim() - 1).block(0, 0, k, k);
}

// ---------------------------------------------------------------------------
// Claims

struct Claim {
  std::string predicate;
  std::string label;  // witness label, empty for algebra claims
  std::string lhs;    // unimodular-iff
  std::string rhs;
};

Claim parse_claim(const std::string& text) {
  static const std::regex labelled(R"(^([a-z-]+)\(([A-Za-z0-9']+)\)(\s*=\s*(.+))?$)");
  static const std::regex locus(R"(^unimodular-iff\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$)");
  std::smatch m;
  Claim c;
  if (std::regex_match(text, m, labelled)) {
    c.predicate = m[1];
    c.label = m[2];
    c.rhs = m[4];
  } else if (std::regex_match(text, m, locus)) {
    c.predicate = "unimodular-iff";
    c.lhs = m[1];
    c.rhs = m[2];
  } else {
    c.predicate = text;
  }
  return c;
}

std::optional<Claim> locus_claim(const AlgebraDocument& doc) {
  for (const auto& text : doc.claims) {
    Claim c = parse_claim(text);
    if (c.predicate == "unimodular-iff") return c;
  }
  return std::nullopt;
}

/// "f5 + f6", "-1/2 f1 + 3 f4": signed sum of optionally scaled basis covectors.
KForm<Q> parse_one_form(const std::string& text, int dim) {
  static const std::regex term(R"(\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*f([0-9]+)\s*)");
  Vector<Q> coeffs(static_cast<std::size_t>(dim));
  auto begin = text.cbegin();
  std::smatch m;
  while (begin != text.cend()) {
    if (!std::regex_search(begin, text.cend(), m, term, std::regex_constants::match_continuous))
      throw Error(ErrorCode::Syntax, "cannot read one-form '" + text + "'");
    Q c = m[2].matched ? Q(m[2].str()) : Q(1);
    c.canonicalize();
    if (m[1] == "-") c = -c;
    int idx = std::stoi(m[3]);
    if (idx < 1 || idx > dim) throw Error(ErrorCode::IndexOutOfRange, "one-form index out of range");
    coeffs[static_cast<std::size_t>(idx - 1)] += c;
    begin = m[0].second;
  }
  return KForm<Q>::one_form(coeffs);
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

CheckResult make(const std::string& name, bool ok, std::string detail) {
  return {name, ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

CheckResult check_structure_claim(const Claim& c, const std::string& text, const Witness& w) {
  const auto& h = w.structure;
  const auto* d = w.data ? &*w.data : nullptr;
  auto both = [&](bool direct, std::optional<bool> data, bool expect) {
    std::string detail = "direct " + yes_no(direct);
    if (data) detail += ", data " + yes_no(*data);
    bool ok = direct == expect && (!data || *data == expect);
    return make(text, ok, detail);
  };
  auto data_value = [&](auto fn) -> std::optional<bool> {
    if (!d) return std::nullopt;
    return fn(*d);
  };
  const std::string& p = c.predicate;
  if (p == "lck") return both(is_lck_direct(h), data_value([](const auto& x) { return is_lck_data(x); }), true);
  if (p == "non-lck") return both(is_lck_direct(h), data_value([](const auto& x) { return is_lck_data(x); }), false);
  if (p == "lcb") return both(is_lcb_direct(h), data_value([](const auto& x) { return is_lcb_data(x); }), true);
  if (p == "skt") return both(is_skt_direct(h), data_value([](const auto& x) { return is_skt_data(x); }), true);
  if (p == "kahler")
    return both(is_kahler_direct(h), data_value([](const auto& x) { return is_kahler_data(x); }), true);
  if (p == "non-kahler")
    return both(is_kahler_direct(h), data_value([](const auto& x) { return is_kahler_data(x); }), false);
  if (p == "balanced")
    return both(is_balanced_direct(h), data_value([](const auto& x) { return is_balanced_data(x); }), true);
  if (p == "non-balanced")
    return both(is_balanced_direct(h), data_value([](const auto& x) { return is_balanced_data(x); }), false);
  if (p == "vaisman") {
    auto r = vaisman_report(h);
    return make(text, r.vaisman(), "lck " + yes_no(r.lck) + ", lee parallel " + yes_no(r.theta_parallel));
  }
  if (p == "v-zero") {
    if (!d) return make(text, false, "no adapted data");
    return make(text, d->v.is_zero(), "v = " + d->v.to_string());
  }
  if (p == "lck-decomposition") {
    if (!d) return make(text, false, "no adapted data");
    const std::size_t m = d->n1_dim();
    Q lambda = d->A.trace() / Q(static_cast<long>(m));
    Matrix<Q> u = d->A - lambda * Matrix<Q>::identity(m);
    bool ok = is_skew(u) && commutator(u, d->J1).is_zero();
    return make(text, ok, "lambda = " + lambda.get_str() + ", U skew " + yes_no(is_skew(u)));
  }
  if (p == "lee") {
    KForm<Q> theta = lee_form(h);
    KForm<Q> expected = parse_one_form(c.rhs, h.algebra().dim());
    return make(text, theta == expected, "theta = " + theta.as_vector().to_string());
  }
  throw Error(ErrorCode::Input, "unknown claim '" + text + "'");
}

CheckResult check_claim(const std::string& text, const LieAlgebra<Q>& l, const Bindings& b, const WitnessSet* ws) {
  Claim c = parse_claim(text);
  const std::string& p = c.predicate;
  if (p.rfind("admits-no-", 0) == 0)
    return {text, CheckStatus::NotChecked, "non-existence over all structures is not decided"};
  if (p == "nilpotent") return make(text, l.is_nilpotent(), "");
  if (p == "unimodular") return make(text, is_unimodular(l), "");
  if (p == "non-unimodular") return make(text, !is_unimodular(l), "");
  if (p == "unimodular-iff") {
    bool on = evaluate_expression(c.lhs, b) == evaluate_expression(c.rhs, b);
    bool uni = is_unimodular(l);
    return make(text, on == uni, "unimodular " + yes_no(uni) + ", on locus " + yes_no(on));
  }
  if (!ws) return make(text, false, "no witness");
  if (!c.label.empty()) {
    for (const auto& w : ws->structures)
      if (w.label == c.label) return check_structure_claim(c, text, w);
    return make(text, false, "no witness labelled " + c.label);
  }
  if (p == "lchk" || p == "hyperkahler" || p == "non-hyperkahler" || p == "flat") {
    if (!ws->triple) return make(text, false, "no hypercomplex witness");
    const auto& t = *ws->triple;
    auto verdict = lchk_admissible(lchk_matrix(l));
    if (p == "lchk") {
      auto chk = check_triple(t);
      return make(text, verdict.admissible && chk.all(),
                  "admissible " + yes_no(verdict.admissible) + ", triple " + yes_no(chk.all()) + ", a = " + t.a.get_str());
    }
    if (p == "flat") return make(text, hyperkahler_flatness(t), "");
    bool kahler = true;
    for (const auto* s : {&t.i1, &t.i2, &t.i3}) kahler = kahler && is_kahler_direct(HermitianStructure<Q>(t.algebra, *s, t.g));
    bool hk = verdict.hyperkahler && is_zero(t.a) && kahler;
    bool none = !verdict.hyperkahler && !is_zero(t.a) && !kahler;
    return make(text, p == "hyperkahler" ? hk : none, "a = " + t.a.get_str() + ", kahler " + yes_no(kahler));
  }
  throw Error(ErrorCode::Input, "unknown claim '" + text + "'");
}

std::string error_text(const std::exception& e) { return e.what(); }

SampleReport run_sample(const AlgebraDocument& doc, const ParameterSample& sample) {
  SampleReport r;
  r.params = sample.params;
  r.on_locus = sample.on_locus;
  std::optional<LieAlgebra<Q>> l;
  try {
    l = instantiate(doc, sample.params);
    r.checks.push_back(make("instantiate", true, ""));
  } catch (const std::exception& e) {
    r.checks.push_back(make("instantiate", false, error_text(e)));
    return r;
  }
  try {
    auto found = find_codim1_abelian_ideal(*l);
    bool ok = found.has_value();
    std::string detail = ok ? "" : "no codimension-one abelian ideal";
    if (ok && doc.ideal) {
      auto n = *ideal_of<Q>(doc);
      check_codim1_abelian_ideal(*l, n);
      for (const auto& x : l->derived_algebra()) ok = ok && n.contains(x);
      if (!ok) detail = "derived algebra leaves the declared ideal";
    }
    r.checks.push_back(make("almost-abelian", ok, detail));
  } catch (const std::exception& e) {
    r.checks.push_back(make("almost-abelian", false, error_text(e)));
  }
  std::optional<WitnessSet> ws;
  try {
    ws = witness(doc, sample.params);
    r.checks.push_back(make("witness", true, ""));
  } catch (const std::exception& e) {
    r.checks.push_back(make("witness", false, error_text(e)));
  }
  const Bindings b = resolve_bindings(doc, sample.params);
  for (const auto& claim : doc.claims) {
    try {
      r.checks.push_back(check_claim(claim, *l, b, ws ? &*ws : nullptr));
    } catch (const std::exception& e) {
      r.checks.push_back(make(claim, false, error_text(e)));
    }
  }
  return r;
}

template <typename V>
std::vector<V> evenly_spaced(const std::vector<V>& all, int n) {
  if (n <= 0) return {};
  if (all.size() <= static_cast<std::size_t>(n)) return all;
  std::vector<V> out;
  for (int i = 0; i < n; ++i) out.push_back(all[static_cast<std::size_t>(i) * all.size() / static_cast<std::size_t>(n)]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::string& catalog_text() { return kManifestText; }

const Manifest& catalog_manifest() {
  static const Manifest m = parse_manifest(kManifestText);
  return m;
}

const AlgebraDocument& find_entry(const std::string& name) {
  for (const auto& d : catalog_manifest().documents)
    if (d.name == name) return d;
  throw Error(ErrorCode::Input, "no catalog entry named '" + name + "'");
}

LieAlgebra<Rational> instantiate(const AlgebraDocument& entry, const Bindings& params) {
  if (entry.float_kernel()) throw Error(ErrorCode::Input, "catalog entries must be exact");
  return instantiate_document<Q>(entry, params);
}

Matrix<Rational> almost_abelian_isomorphism(const LieAlgebra<Rational>& l, const std::vector<int>& l_ideal, int l_top,
                                            const LieAlgebra<Rational>& target, const std::vector<int>& target_ideal,
                                            int target_top) {
  const std::size_t dim = static_cast<std::size_t>(l.dim());
  const std::size_t m = l_ideal.size();
  if (target.dim() != l.dim() || target_ideal.size() != m || m + 1 != dim)
    throw Error(ErrorCode::DimensionMismatch, "isomorphism: sizes differ");
  auto restricted = [m](const LieAlgebra<Q>& a, const std::vector<int>& ideal, int top) {
    Matrix<Q> ad = a.ad_basis(top);
    Matrix<Q> b(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        b(i, j) = ad(static_cast<std::size_t>(ideal[i]), static_cast<std::size_t>(ideal[j]));
    return b;
  };
  const Matrix<Q> bl = restricted(l, l_ideal, l_top);
  const Matrix<Q> bt = restricted(target, target_ideal, target_top);
  // bl X - X bt = 0, unknown X(r, c) at index r * m + c.
  Matrix<Q> sys(m * m, m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t row = i * m + j;
      for (std::size_t k = 0; k < m; ++k) {
        sys(row, k * m + j) += bl(i, k);
        sys(row, i * m + k) -= bt(k, j);
      }
    }
  std::vector<Vector<Q>> ns = null_space(sys);
  auto as_matrix = [m](const Vector<Q>& x) {
    Matrix<Q> out(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) out(r, c) = x[r * m + c];
    return out;
  };
  std::optional<Matrix<Q>> x;
  for (const auto& n : ns)
    if (!is_zero(determinant(as_matrix(n)))) {
      x = as_matrix(n);
      break;
    }
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long> coeff(-7, 7);
  for (int attempt = 0; !x && !ns.empty() && attempt < 200; ++attempt) {
    Vector<Q> comb(m * m);
    for (const auto& n : ns) comb += Q(coeff(rng)) * n;
    Matrix<Q> cand = as_matrix(comb);
    if (!is_zero(determinant(cand))) x = cand;
  }
  if (!x) throw Error(ErrorCode::WitnessFailure, "no invertible intertwiner between the two derivations");
  Matrix<Q> p(dim, dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < m; ++r)
      p(static_cast<std::size_t>(l_ideal[r]), static_cast<std::size_t>(target_ideal[i])) = (*x)(r, i);
  p(static_cast<std::size_t>(l_top), static_cast<std::size_t>(target_top)) = 1;
  if (!(l.change_basis(p).constants() == target.constants()))
    throw Error(ErrorCode::WitnessFailure, "intertwiner does not carry the brackets across");
  return p;
}

WitnessSet witness(const AlgebraDocument& entry, const Bindings& params) {
  const Bindings b = resolve_bindings(entry, params);
  const LieAlgebra<Q> l = instantiate(entry, b);
  const int dim = entry.dim;
  WitnessSet out;
  if (is_lchk_entry(entry.name)) {
    HypercomplexTriple<Q> t = construct_lchk(lchk_matrix(l));
    Matrix<Q> phi = Matrix<Q>::identity(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < t.change.rows(); ++i)
      for (std::size_t j = 0; j < t.change.cols(); ++j) phi(i, j) = t.change(i, j);
    Matrix<Q> p = inverse(phi);
    if (!(t.algebra.change_basis(p).constants() == l.constants()))
      throw Error(ErrorCode::WitnessFailure, "canonical basis does not reproduce the entry");
    auto move = [&](const ComplexStructure<Q>& j) { return ComplexStructure<Q>(phi * j.matrix() * p); };
    HypercomplexTriple<Q> moved{l,
                                move(t.i1),
                                move(t.i2),
                                move(t.i3),
                                Metric<Q>(p.transpose() * t.g.matrix() * p),
                                KForm<Q>(dim, 1),
                                t.a,
                                t.m,
                                Matrix<Q>::identity(static_cast<std::size_t>(dim - 1)),
                                t.canonical};
    moved.theta = lee_form(HermitianStructure<Q>(moved.algebra, moved.i1, moved.g));
    out.triple = std::move(moved);
    return out;
  }
  if (is_explicit(entry.name)) {
    ComplexStructure<Q> j = complex_structure_of<Q>(entry);
    HermitianStructure<Q> g(l, j, metric_of<Q>(entry));
    out.structures.push_back({"g", g, try_extract(g)});
    if (auto gp = primed_metric(entry.name)) {
      HermitianStructure<Q> h(l, j, Metric<Q>(*gp));
      out.structures.push_back({"g'", h, try_extract(h)});
    }
    return out;
  }
  auto it = recipes().find(entry.name);
  if (it == recipes().end()) throw Error(ErrorCode::Input, "no witness recipe for '" + entry.name + "'");
  if (!entry.ideal) throw Error(ErrorCode::Input, "entry '" + entry.name + "' declares no ideal");
  Recipe r = it->second(b);
  HermitianData<Q> data = make_data(r.a, r.v, r.A, j1_of(r.j1, r.A.rows()));
  HermitianStructure<Q> w = build_algebra(data);
  std::vector<int> w_ideal;
  for (int k = 0; k + 1 < dim; ++k) w_ideal.push_back(k);
  std::vector<int> e_ideal = zero_based(*entry.ideal);
  Matrix<Q> p = almost_abelian_isomorphism(w.algebra(), w_ideal, dim - 1, l, e_ideal, missing_index(e_ideal, dim));
  Matrix<Q> pinv = inverse(p);
  ComplexStructure<Q> j(pinv * w.complex_structure().matrix() * p);
  Metric<Q> g(p.transpose() * w.metric().matrix() * p);
  data.basis = pinv;
  out.structures.push_back({"w", HermitianStructure<Q>(l, j, g), data});
  return out;
}

const std::vector<Rational>& default_sample_values() {
  static const std::vector<Rational> values{Q(-1, 4), Q(1, 4), Q(-1, 2), Q(1, 2), Q(-1), Q(1), Q(2)};
  return values;
}

std::vector<ParameterSample> parameter_samples(const AlgebraDocument& entry, int n) {
  std::vector<std::string> free;
  for (const auto& p : entry.params)
    if (!p.value) free.push_back(p.name);
  const Bindings bound = entry.bound_params();
  std::optional<Claim> locus = locus_claim(entry);
  auto on_locus = [&](const Bindings& b) {
    return locus && evaluate_expression(locus->lhs, b) == evaluate_expression(locus->rhs, b);
  };
  if (free.empty()) {
    Bindings b = resolve_bindings(entry);
    return {{b, on_locus(b)}};
  }
  const auto& values = default_sample_values();
  std::vector<Bindings> generic, projected;
  std::vector<std::size_t> idx(free.size(), 0);
  while (true) {
    Bindings b = bound;
    for (std::size_t k = 0; k < free.size(); ++k) b[free[k]] = values[idx[k]];
    if (constraints_hold(entry, b) && !on_locus(b)) generic.push_back(b);
    if (locus) {
      Bindings proj = b;
      proj[locus->lhs] = evaluate_expression(locus->rhs, b);
      if (constraints_hold(entry, proj) && std::find(projected.begin(), projected.end(), proj) == projected.end())
        projected.push_back(proj);
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == values.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  std::vector<ParameterSample> out;
  for (auto& b : evenly_spaced(generic, n)) out.push_back({b, false});
  for (auto& b : evenly_spaced(projected, n)) out.push_back({b, true});
  return out;
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotChecked: return "NOT-CHECKED";
  }
  return "FAIL";
}

bool SampleReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

bool EntryReport::passed() const {
  return errors.empty() && !samples.empty() &&
         std::all_of(samples.begin(), samples.end(), [](const SampleReport& s) { return s.passed(); });
}

bool CatalogReport::passed() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const EntryReport& e) { return e.passed(); });
}

EntryReport verify_entry(const AlgebraDocument& entry, int samples) {
  EntryReport r;
  r.name = entry.name;
  std::vector<ParameterSample> chosen;
  try {
    chosen = parameter_samples(entry, samples);
  } catch (const std::exception& e) {
    r.errors.push_back(error_text(e));
    return r;
  }
  bool has_free = std::any_of(entry.params.begin(), entry.params.end(), [](const ParamDecl& p) { return !p.value; });
  if (has_free) {
    auto off = std::count_if(chosen.begin(), chosen.end(), [](const ParameterSample& s) { return !s.on_locus; });
    if (off < samples)
      r.errors.push_back("only " + std::to_string(off) + " admissible off-locus samples");
    if (locus_claim(entry) && off == static_cast<long>(chosen.size()))
      r.errors.push_back("no admissible sample on the unimodular locus");
  }
  for (const auto& s : chosen) r.samples.push_back(run_sample(entry, s));
  return r;
}

CatalogReport verify_all(int samples, const std::optional<std::string>& entry, unsigned threads) {
  std::vector<const AlgebraDocument*> docs;
  if (entry)
    docs.push_back(&find_entry(*entry));
  else
    for (const auto& d : catalog_manifest().documents) docs.push_back(&d);
  CatalogReport report;
  report.entries.resize(docs.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(docs.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < docs.size(); i = next++) report.entries[i] = verify_entry(*docs[i], samples);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return report;
}

}  // namespace aalg
