// One line per acceptance criterion; the exit status is nonzero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>
#include <thread>

#include "aalg/catalog.hpp"
#include "aalg/lattice.hpp"
#include "fixtures.hpp"
#include "lchk_lists.hpp"

using namespace aalg;
using namespace aalg::testing;
using H = HighFloat;

namespace {

/// Collects failures for one criterion; the first few are printed.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 5) notes_.push_back(what);
  }
  void note(const std::string& s) { info_ = s; }
  int failures() const { return failures_; }
  int checks() const { return checks_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::string& info() const { return info_; }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> notes_;
  std::string info_;
};

HermitianStructure<double> to_float(const HermitianStructure<Q>& h) {
  const int n = h.algebra().dim();
  StructureConstants<double> c(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(k, i, j) = h.algebra().constants()(k, i, j).get_d();
  return HermitianStructure<double>(LieAlgebra<double>::validate(c),
                                    ComplexStructure<double>(convert_matrix<double>(h.complex_structure().matrix())),
                                    Metric<double>(convert_matrix<double>(h.metric().matrix())));
}

HermitianData<double> to_float(const HermitianData<Q>& d) {
  HermitianData<double> f;
  f.n = d.n;
  f.a = d.a.get_d();
  f.v = convert_vector<double>(d.v);
  f.A = convert_matrix<double>(d.A);
  f.J1 = convert_matrix<double>(d.J1);
  f.basis = convert_matrix<double>(d.basis);
  return f;
}

double max_coeff(const KForm<double>& f) {
  double m = 0;
  for (const auto& [mask, c] : f.terms()) m = std::max(m, std::abs(c));
  return m;
}

/// Random orthogonal change of n_1 commuting with J_1, embedded in the full
/// adapted basis; keeps build_algebra output Hermitian for the same data.
Matrix<Q> unitary_frame(Draw& r, const HermitianData<Q>& d) {
  const std::size_t m = d.n1_dim();
  Matrix<Q> u = unitary(r, d.J1);
  Matrix<Q> p = Matrix<Q>::identity(m + 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) p(i + 1, j + 1) = u(i, j);
  return p;
}

/// A general change of basis keeping e_2n off the ideal.
Matrix<Q> general_frame(Draw& r, std::size_t dim) {
  Matrix<Q> p;
  do p = r.invertible(dim);
  while (sgn(p(dim - 1, dim - 1)) == 0);
  return p;
}

/// A coordinate permutation times three elementary shears: a general,
/// non-orthonormal basis whose inverse stays small in floats.
Matrix<Q> tame_frame(Draw& r, std::size_t dim) {
  std::vector<std::size_t> perm(dim);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), r.engine());
  Matrix<Q> p(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) p(perm[i], i) = 1;
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<std::size_t>(r.integer(0, static_cast<int>(dim) - 1));
    auto j = static_cast<std::size_t>(r.integer(0, static_cast<int>(dim) - 2));
    if (j >= i) ++j;
    Matrix<Q> shear = Matrix<Q>::identity(dim);
    shear(i, j) = r.coin() ? 1 : -1;
    p = p * shear;
  }
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 1 -------------------------------------------------------------------------

void lcb_equivalence(Tally& t) {
  Draw r(1001);
  int lcb = 0;
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + k % 3;
    const DataMode mode = kAllModes[(k / 3) % 7];
    auto d = draw_data(r, mode == DataMode::NTwoZero ? 2 : n, mode);
    auto h = disguise(build_algebra(d), k % 2 ? general_frame(r, static_cast<std::size_t>(2 * d.n)) : unitary_frame(r, d));
    const bool closed = h.algebra().d(lee_form(h)).is_zero();
    const bool data = is_lcb_data(d);
    lcb += data;
    t.expect(data == closed, "draw " + std::to_string(k) + " (" + mode_name(mode) + ")");
  }
  t.expect(lcb > 0 && lcb < 500, "both verdicts occur");
  t.note(std::to_string(lcb) + "/500 LCB");
}

// 2 -------------------------------------------------------------------------

void rho_b_cross_validation(Tally& t) {
  Draw r(1002);
  double worst = 0;
  int type11 = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 3;
    const DataMode mode = kAllModes[k % 7];
    auto d = draw_data(r, mode == DataMode::NTwoZero ? 2 : n, mode);
    auto h = build_algebra(d);
    const std::string tag = "draw " + std::to_string(k);
    KForm<Q> closed = rho_b_closed(d);
    t.expect(closed == bismut_ricci_oracle(h), tag + " exact");

    // Float path: the oracle runs in a general basis and is read back in the
    // adapted frame.
    const std::size_t dim = static_cast<std::size_t>(2 * d.n);
    Matrix<Q> p = tame_frame(r, dim);
    auto hf = to_float(disguise(h, p));
    KForm<double> oracle = bismut_ricci_oracle(hf).pullback(convert_matrix<double>(inverse(p)));
    const double res = max_coeff(rho_b_closed(to_float(d)) - oracle);
    worst = std::max(worst, res);
    t.expect(res <= 1e-8, tag + " float residual " + std::to_string(res));

    const bool is11 = is_type_11(closed, h.complex_structure().matrix());
    type11 += is11;
    t.expect(is11 == is_lcb_data(d), tag + " type (1,1)");
  }
  std::ostringstream os;
  os << "max float residual " << worst << ", " << type11 << "/100 of type (1,1)";
  t.note(os.str());
}

// 3 -------------------------------------------------------------------------

void predicate_concordance(Tally& t) {
  Draw r(1003);
  int hits[5] = {0, 0, 0, 0, 0};
  for (int k = 0; k < 500; ++k) {
    const DataMode mode = kAllModes[k % 7];
    const int n = mode == DataMode::NTwoZero ? 2 : 2 + (k / 7) % 3;
    auto d = draw_data(r, n, mode);
    auto h = build_algebra(d);
    const bool data[5] = {is_kahler_data(d), is_lck_data(d), is_balanced_data(d), is_skt_data(d), is_lcb_data(d)};
    const bool direct[5] = {is_kahler_direct(h), is_lck_direct(h), is_balanced_direct(h), is_skt_direct(h),
                            is_lcb_direct(h)};
    static const char* names[5] = {"kahler", "lck", "balanced", "skt", "lcb"};
    for (int i = 0; i < 5; ++i) {
      hits[i] += data[i];
      t.expect(data[i] == direct[i], "draw " + std::to_string(k) + " " + names[i]);
    }
  }
  for (int h : hits) t.expect(h > 0 && h < 500, "each predicate takes both values");
  std::ostringstream os;
  os << "true counts K/LCK/B/SKT/LCB " << hits[0] << "/" << hits[1] << "/" << hits[2] << "/" << hits[3] << "/"
     << hits[4];
  t.note(os.str());
}

// 4 -------------------------------------------------------------------------

void catalog_reproduction(Tally& t) {
  const auto start = std::chrono::steady_clock::now();
  CatalogReport all = verify_all(3, std::nullopt, std::max(1u, std::thread::hardware_concurrency()));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::regex classified("g[1-6]|l([1-9]|1[0-7])|n[12]");
  int entries = 0, samples = 0;
  for (const auto& e : all.entries) {
    if (!std::regex_match(e.name, classified)) continue;
    ++entries;
    samples += static_cast<int>(e.samples.size());
    t.expect(e.passed(), e.name);
    const AlgebraDocument& doc = find_entry(e.name);
    const bool free = std::any_of(doc.params.begin(), doc.params.end(), [](const ParamDecl& p) { return !p.value; });
    const auto off = std::count_if(e.samples.begin(), e.samples.end(), [](const SampleReport& s) { return !s.on_locus; });
    t.expect(!free || off >= 3, e.name + " has fewer than 3 samples");
    for (const auto& s : e.samples)
      for (const auto& c : s.checks) {
        const bool needed = c.name == "witness" || c.name.rfind("lck(", 0) == 0 || c.name.rfind("lcb(", 0) == 0 ||
                            c.name.rfind("non-kahler", 0) == 0 || c.name.rfind("unimodular", 0) == 0;
        if (needed) t.expect(c.status == CheckStatus::Pass, e.name + " " + c.name);
      }
  }
  t.expect(entries == 25, "25 classified entries, found " + std::to_string(entries));
  t.expect(secs < 120, "runtime");
  std::ostringstream os;
  os << entries << " entries, " << samples << " samples, " << std::fixed << std::setprecision(1) << secs << " s";
  t.note(os.str());
}

// 5 -------------------------------------------------------------------------

const Witness& labelled(const WitnessSet& w, const std::string& label) {
  for (const auto& s : w.structures)
    if (s.label == label) return s;
  throw std::runtime_error("missing witness " + label);
}

KForm<Q> covector(int dim, std::initializer_list<int> idx) {
  Vector<Q> v(static_cast<std::size_t>(dim));
  for (int i : idx) v[static_cast<std::size_t>(i)] = 1;
  return KForm<Q>::one_form(v);
}

void worked_examples(Tally& t) {
  auto b = witness(find_entry("b2"));
  const auto& g = labelled(b, "g").structure;
  const auto& gp = labelled(b, "g'").structure;
  t.expect(is_balanced_direct(g), "b2 g balanced");
  t.expect(is_lcb_direct(gp), "b2 g' LCB");
  t.expect(!is_balanced_direct(gp), "b2 g' not balanced");
  t.expect(lee_form(gp) == covector(6, {4, 5}), "b2 Lee form f5 + f6");
  t.expect(gp.algebra().constants() == b2().constants(), "b2 structure equations");

  auto a = witness(find_entry("aff2+2R"));
  const auto& k = labelled(a, "g").structure;
  const auto& kp = labelled(a, "g'").structure;
  t.expect(is_kahler_direct(k), "aff2 g Kahler");
  t.expect(is_lck_direct(kp), "aff2 g' LCK");
  t.expect(!is_kahler_direct(kp), "aff2 g' not Kahler");
  t.expect(kp.d_omega() == wedge(covector(4, {1, 3}), kp.omega()), "aff2 d omega' = (f2 + f4) ^ omega'");
  t.expect(kp.algebra().constants() == aff2_2r().constants(), "aff2 structure equations");

  for (int n = 2; n <= 4; ++n)
    for (const Q& av : {Q(1), q(-1, 2), Q(3)})
      for (const Q& c : {Q(1), Q(0), q(2, 3)}) {
        auto h = build_algebra(s2n_data(n, av, c));
        const std::string tag = "s" + std::to_string(2 * n) + " a=" + av.get_str() + " c=" + c.get_str();
        t.expect(is_skt_direct(h), tag + " SKT");
        t.expect(is_lcb_direct(h), tag + " LCB");
      }
  for (const char* name : {"s4", "s6", "s8"}) {
    const WitnessSet set = witness(find_entry(name));
    const auto& w = labelled(set, "w");
    t.expect(is_skt_direct(w.structure) && is_lcb_direct(w.structure), std::string(name) + " catalog witness");
  }
}

// 6 -------------------------------------------------------------------------

void skt_construction(Tally& t) {
  Draw r(1006);
  int nonzero = 0;
  for (int k = 0; k < 200; ++k) {
    auto d = draw_data(r, 2 + k % 3, DataMode::Skt);
    const std::string tag = "draw " + std::to_string(k);
    t.expect(is_skt_data(d), tag + " input SKT");
    auto out = skt_to_lcb(d);
    t.expect(is_lcb_data(out.data), tag + " LCB");
    if (sgn(d.a) != 0) {
      ++nonzero;
      t.expect(out.data.v.is_zero(), tag + " v = 0");
    }
    // The new metric realises the new data on the same algebra and J.
    auto h = build_algebra(d);
    HermitianStructure<Q> moved(h.algebra(), h.complex_structure(), Metric<Q>(out.metric));
    t.expect(is_lcb_direct(moved), tag + " LCB direct");
  }
  t.expect(nonzero > 0, "some draws have a != 0");
  t.note(std::to_string(nonzero) + "/200 with a != 0");
}

// 7 -------------------------------------------------------------------------

Matrix<Q> rotation_block(const Q& a, const Q& b) { return Matrix<Q>{{a, b}, {-b, a}}; }

void lchk_suite(Tally& t) {
  Draw r(1007);
  int listed = 0, rejected = 0, triples = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const Q p = r.nonzero_rational();
    const Q qq = r.nonzero_rational();
    for (const auto& e : lchk_lists(p, qq)) {
      ++listed;
      const std::string tag = e.name + " p=" + p.get_str();
      auto v = lchk_admissible(e.d);
      t.expect(v.admissible, tag + " admissible");
      t.expect(v.hyperkahler == e.hyperkahler, tag + " hyperkahler flag");
      auto tr = construct_lchk(e.d);
      auto c = check_triple(tr);
      ++triples;
      t.expect(c.quaternion, tag + " quaternion relations");
      t.expect(c.integrable, tag + " integrable");
      t.expect(c.hermitian && c.lck, tag + " LCK");
      t.expect(c.lee_equal && c.lee_closed, tag + " equal closed Lee forms");
      const int dim = 4 * tr.m;
      t.expect(tr.theta == KForm<Q>::monomial(dim, {dim - 1}, -Q(4 * tr.m - 2) * tr.a), tag + " theta");
      if (e.hyperkahler) t.expect(hyperkahler_flatness(tr), tag + " flat");
    }
    // Counterexamples in dimension 7, conjugated by a random basis change.
    const Q a = r.rational();
    Matrix<Q> conj = r.invertible(7);
    // m_D(a) = 1, which also leaves a +- 2i simple.
    Matrix<Q> small_a = block_diagonal<Q>({canonical_block(a, Q(1)), rotation_block(a, Q(2)), Matrix<Q>{{a}}});
    // a +- i and a +- 2i are simple while m_D(a) = 3.
    Matrix<Q> odd = block_diagonal<Q>({rotation_block(a, Q(1)), rotation_block(a, Q(2)), a * Matrix<Q>::identity(3)});
    auto v2 = lchk_admissible(conj * small_a * inverse(conj));
    auto v3 = lchk_admissible(conj * odd * inverse(conj));
    t.expect(!v2.admissible && !v2.cond_ii, "(ii) counterexample rejected");
    t.expect(!v3.admissible && v3.cond_ii && !v3.cond_iii, "(iii) counterexample rejected");
    rejected += 2;
  }
  t.note(std::to_string(listed) + " listed, " + std::to_string(triples) + " triples, " + std::to_string(rejected) +
         " counterexamples");
}

// 8 -------------------------------------------------------------------------

Matrix<H> cat_map_log() {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const H s5 = sqrt(H(5));
  const H lp = (3 + s5) / 2;
  const H lm = (3 - s5) / 2;
  auto unit = [](const H& l) {
    H x = l - 1;
    H n = sqrt(x * x + 1);
    return std::pair<H, H>{x / n, 1 / n};
  };
  auto [a, b] = unit(lp);
  auto [c, d] = unit(lm);
  Matrix<H> v{{a, c}, {b, d}};
  return v * Matrix<H>::diagonal({log(lp), log(lm)}) * v.transpose();
}

double hdist(const H& x, const H& y) { return H(abs(x - y)).convert_to<double>(); }

void lattice_probe(Tally& t) {
  double worst = 0;
  for (const Q& p : {q(1, 3), q(1, 2), Q(2)}) {
    auto doc = find_entry("l1");
    auto l = instantiate(doc, {{"p", p}, {"q", q(-1, 2) - p}});
    Matrix<Q> b = l.ad_basis(5).block(0, 0, 5, 5);
    ProbeOptions opt;
    opt.remark_pattern = true;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    auto report = integrality_probe(convert_matrix<H>(b), two_log_k_rule(50), opt);
    const std::string tag = "p=" + p.get_str();
    t.expect(report.points.size() == 49, tag + " k = 2..50");
    t.expect(!report.found, tag + " no integral sample");
    for (const auto& pt : report.points) {
      t.expect(pt.verdict != Integrality::Integer, tag + " k=" + std::to_string(pt.sample.k) + " integral");
      t.expect(pt.remark_residual && *pt.remark_residual <= 1e-9, tag + " k=" + std::to_string(pt.sample.k) + " residual");
      if (pt.remark_residual) worst = std::max(worst, *pt.remark_residual);
    }
  }
  auto report = integrality_probe(cat_map_log(), uniform_grid(H("0.25"), H("2.5"), 10));
  t.expect(report.overall() == "FOUND", "cat map FOUND");
  if (report.found) {
    const auto& pt = report.points[*report.found];
    t.expect(hdist(pt.sample.t, H(1)) <= 1e-30, "found at t = 1");
    t.expect(pt.char_coeffs.size() == 3 && hdist(pt.char_coeffs[0], H(1)) <= 1e-20 &&
                 hdist(pt.char_coeffs[1], H(-3)) <= 1e-20 && hdist(pt.char_coeffs[2], H(1)) <= 1e-20,
             "char poly x^2 - 3x + 1");
  }
  std::ostringstream os;
  os << "max residual " << worst;
  t.note(os.str());
}

// 9 -------------------------------------------------------------------------

void kernel_soundness(Tally& t) {
  Draw r(1009);
  int valid = 0, invalid = 0;
  for (int k = 0; k < 100; ++k) {
    const int dim = 3 + k % 3;
    StructureConstants<Q> c = random_valid_algebra(r, dim).constants();
    if (k % 2) {
      int i = r.integer(0, dim - 1), j = r.integer(0, dim - 1), l = r.integer(0, dim - 1);
      if (i == j) j = (i + 1) % dim;
      Q delta = r.nonzero_rational();
      c(l, i, j) += delta;
      c(l, j, i) -= delta;
    }
    const bool jac = jacobi_holds(c);
    (jac ? valid : invalid) += 1;
    t.expect(jac == dd_vanishes(c), "fixture " + std::to_string(k));
  }
  t.expect(valid > 0 && invalid > 0, "valid and invalid fixtures");

  double worst = 0;
  for (int k = 0; k < 30; ++k) {
    Matrix<H> b = convert_matrix<H>(r.matrix(4, 4));
    const H s = ScalarTraits<H>::from_rational(r.rational());
    const H u = ScalarTraits<H>::from_rational(r.rational());
    Matrix<H> lhs = matrix_exp(b, H(s + u));
    Matrix<H> rhs = matrix_exp(b, s) * matrix_exp(b, u);
    const double scale = std::max(1.0, lhs.max_abs().convert_to<double>());
    const double law = (lhs - rhs).max_abs().convert_to<double>() / scale;
    const H det = determinant(matrix_exp(b, u));
    const double dres = hdist(det, boost::multiprecision::exp(u * b.trace())) / std::max(1.0, det.convert_to<double>());
    worst = std::max({worst, law, dres});
    t.expect(law <= 1e-8, "group law " + std::to_string(k));
    t.expect(dres <= 1e-8, "determinant " + std::to_string(k));
  }

  const std::string& text = catalog_text();
  t.expect(render(parse_manifest(text)) == text, "manifest round trip");
  t.expect(read_file(AALG_CATALOG_FILE) == text, "embedded manifest matches the file");
  std::ostringstream os;
  os << valid << " valid, " << invalid << " invalid fixtures, exp residual " << worst;
  t.note(os.str());
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Tally&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<Criterion> criteria{
      {1, "LCB criterion equivalence", lcb_equivalence},
      {2, "Bismut-Ricci cross-validation", rho_b_cross_validation},
      {3, "predicate concordance", predicate_concordance},
      {4, "catalog reproduction", catalog_reproduction},
      {5, "worked examples b2, aff2+2R, s2n", worked_examples},
      {6, "SKT to LCB construction", skt_construction},
      {7, "LCHK suite", lchk_suite},
      {8, "lattice probe", lattice_probe},
      {9, "kernel soundness", kernel_soundness},
  };
  int failed = 0;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int run = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++run;
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    std::string crash;
    try {
      c.run(t);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = crash.empty() && t.failures() == 0;
    failed += !ok;
    std::printf("[%s] criterion %d: %s (%d checks, %.2f s", ok ? "PASS" : "FAIL", c.id, c.name, t.checks(), secs);
    if (!t.info().empty()) std::printf("; %s", t.info().c_str());
    std::printf(")\n");
    if (!crash.empty()) std::printf("    exception: %s\n", crash.c_str());
    for (const auto& n : t.notes()) std::printf("    failed: %s\n", n.c_str());
  }
  std::printf("%d/%d criteria passed\n", run - failed, run);
  return failed == 0 ? 0 : 1;
}
