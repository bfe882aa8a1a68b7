#include "aalg/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "aalg/catalog.hpp"
#include "aalg/lattice.hpp"
#include "json.hpp"

namespace aalg {

using Json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::UnboundParameter:
    case ErrorCode::ConstraintViolation:
    case ErrorCode::Input:
      return 1;
    default:
      return 2;
  }
}

namespace {

const char* const kProperties[] = {"kahler", "lck", "balanced", "skt", "lcb", "vaisman"};

struct Outcome {
  Json report;
  int code = 0;
  /// Replaces the generic rendering in human mode when set.
  std::string human;
};

// ---------------------------------------------------------------------------
// JSON helpers

template <Scalar T>
Json scalar_json(const T& x) {
  return to_string(x);
}

template <Scalar T>
Json vector_json(const Vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

template <Scalar T>
Json matrix_json(const Matrix<T>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

template <Scalar T>
Json form_json(const KForm<T>& f) {
  Json a = Json::array();
  for (const auto& [mask, c] : f.terms()) {
    if (is_zero(c)) continue;
    Json idx = Json::array();
    for (int i : mask_indices(mask)) idx.push_back(i + 1);
    a.push_back(Json{{"indices", idx}, {"coeff", scalar_json(c)}});
  }
  return a;
}

template <Scalar T>
Json poly_json(const Polynomial<T>& p) {
  Json a = Json::array();
  for (const auto& c : p.coefficients()) a.push_back(scalar_json(c));
  return a;
}

Json bindings_json(const Bindings& b) {
  Json o = Json::object();
  for (const auto& [k, v] : b) o[k] = v.get_str();
  return o;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

void render_human(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      render_human(v, out, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << pad << it.key() << ":\n";
      for (const auto& item : v) {
        out << pad << "  -\n";
        render_human(item, out, indent + 4);
      }
    } else if (v.is_array()) {
      out << pad << it.key() << ": [";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out << ", ";
        if (v[k].is_array()) {
          out << "[";
          for (std::size_t l = 0; l < v[k].size(); ++l) out << (l ? " " : "") << scalar_text(v[k][l]);
          out << "]";
        } else {
          out << scalar_text(v[k]);
        }
      }
      out << "]\n";
    } else {
      out << pad << it.key() << ": " << scalar_text(v) << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Inputs

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Input, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

AlgebraDocument load_document(const std::string& path, const std::string& name) {
  Manifest m = parse_manifest(read_text(path));
  if (m.documents.empty()) throw Error(ErrorCode::Input, "'" + path + "' holds no algebra");
  if (name.empty()) {
    if (m.documents.size() > 1) throw Error(ErrorCode::Input, "'" + path + "' holds several algebras; pick one with --name");
    return m.documents.front();
  }
  for (const auto& d : m.documents)
    if (d.name == name) return d;
  throw Error(ErrorCode::Input, "no algebra named '" + name + "' in '" + path + "'");
}

Bindings parse_params(const std::vector<std::string>& items) {
  Bindings b;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Input, "parameter '" + item + "' is not of the form name=value");
    std::string name = item.substr(0, eq);
    b[name] = evaluate_expression(item.substr(eq + 1), {});
  }
  return b;
}

std::string kernel_name(bool exact) { return exact ? "exact" : "float"; }

Json header(const std::string& command) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  return j;
}

template <Scalar T>
HermitianData<T> data_of(const AlgebraDocument& doc, const HermitianStructure<T>& h) {
  if (auto n = ideal_of<T>(doc)) return extract_data(h, *n);
  return extract_data(h);
}

template <Scalar T>
std::optional<bool> data_predicate(const std::string& p, const HermitianData<T>& d) {
  if (p == "kahler") return is_kahler_data(d);
  if (p == "lck") return is_lck_data(d);
  if (p == "balanced") return is_balanced_data(d);
  if (p == "skt") return is_skt_data(d);
  if (p == "lcb") return is_lcb_data(d);
  return std::nullopt;
}

template <Scalar T>
bool direct_predicate(const std::string& p, const HermitianStructure<T>& h) {
  if (p == "kahler") return is_kahler_direct(h);
  if (p == "lck") return is_lck_direct(h);
  if (p == "balanced") return is_balanced_direct(h);
  if (p == "skt") return is_skt_direct(h);
  if (p == "lcb") return is_lcb_direct(h);
  if (p == "vaisman") return is_vaisman(h);
  throw Error(ErrorCode::Input, "unknown property '" + p + "'");
}

// ---------------------------------------------------------------------------
// Commands

template <Scalar T>
Json check_with(const AlgebraDocument& doc, const Bindings& b, const std::vector<std::string>& props) {
  HermitianStructure<T> h = hermitian_of<T>(doc, b);
  h.require_integrable();
  Json j;
  j["kernel"] = kernel_name(ScalarTraits<T>::exact);
  std::optional<HermitianData<T>> data;
  std::optional<HermitianData<double>> fallback;
  try {
    data = data_of(doc, h);
    j["data_kernel"] = kernel_name(ScalarTraits<T>::exact);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InexactSqrt) throw;
    fallback = data_of(doc, hermitian_of<double>(doc, b));
    j["data_kernel"] = "float";
  }
  Json rows = Json::array();
  for (const auto& p : props) {
    bool direct = direct_predicate(p, h);
    std::optional<bool> via_data = data ? data_predicate(p, *data) : data_predicate(p, *fallback);
    Json row{{"property", p}, {"direct", direct}};
    row["data"] = via_data ? Json(*via_data) : Json(nullptr);
    row["agree"] = via_data ? Json(*via_data == direct) : Json(nullptr);
    rows.push_back(row);
  }
  j["results"] = rows;
  return j;
}

Outcome cmd_check(const AlgebraDocument& doc, const Bindings& b, std::vector<std::string> props) {
  if (props.empty()) props.assign(std::begin(kProperties), std::end(kProperties));
  Outcome o;
  o.report = header("check");
  o.report["document"] = doc.name;
  Json body = doc.float_kernel() ? check_with<double>(doc, b, props) : check_with<Rational>(doc, b, props);
  o.report.update(body);
  for (const auto& row : o.report["results"])
    if (row["agree"].is_boolean() && !row["agree"].get<bool>()) o.code = 2;
  std::ostringstream os;
  os << "document " << doc.name << " (" << o.report["kernel"].get<std::string>() << " kernel, data "
     << o.report["data_kernel"].get<std::string>() << ")\n";
  os << std::left << std::setw(10) << "property" << std::setw(8) << "direct" << std::setw(8) << "data"
     << "agree\n";
  for (const auto& row : o.report["results"])
    os << std::setw(10) << row["property"].get<std::string>() << std::setw(8) << scalar_text(row["direct"])
       << std::setw(8) << scalar_text(row["data"]) << scalar_text(row["agree"]) << "\n";
  o.human = os.str();
  return o;
}

template <Scalar T>
Json data_with(const AlgebraDocument& doc, const Bindings& b) {
  HermitianStructure<T> h = hermitian_of<T>(doc, b);
  HermitianData<T> d = data_of(doc, h);
  auto inv = gauge_invariants(d);
  Json j;
  j["kernel"] = kernel_name(ScalarTraits<T>::exact);
  j["n"] = d.n;
  j["a"] = scalar_json(d.a);
  j["v"] = vector_json(d.v);
  j["A"] = matrix_json(d.A);
  j["J1"] = matrix_json(d.J1);
  j["basis"] = matrix_json(d.basis);
  j["invariants"] = Json{{"a", scalar_json(inv.a)},
                         {"v_norm_sq", scalar_json(inv.v_norm_sq)},
                         {"trace_A", scalar_json(inv.trace_a)},
                         {"char_poly_A", poly_json(inv.char_poly_a)}};
  return j;
}

/// Runs an exact computation, retrying on the float kernel when a
/// normalisation needs an irrational square root.
template <typename F>
Json exact_or_float(const AlgebraDocument& doc, F&& run) {
  if (doc.float_kernel()) return run(double{});
  try {
    return run(Rational{});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InexactSqrt) throw;
    Json j = run(double{});
    j["fallback"] = std::string(e.what());
    return j;
  }
}

Outcome cmd_data(const AlgebraDocument& doc, const Bindings& b) {
  Outcome o;
  o.report = header("data");
  o.report["document"] = doc.name;
  o.report.update(exact_or_float(doc, [&](auto tag) { return data_with<decltype(tag)>(doc, b); }));
  return o;
}

template <Scalar T>
Json rho_b_with(const AlgebraDocument& doc, const Bindings& b) {
  HermitianStructure<T> h = hermitian_of<T>(doc, b);
  HermitianData<T> d = data_of(doc, h);
  KForm<T> closed = rho_b_closed(d);
  // The oracle runs on the input structure and is read in the adapted frame.
  KForm<T> oracle = bismut_ricci_oracle(h).pullback(d.basis);
  KForm<T> diff = closed - oracle;
  double residual = 0;
  for (const auto& [m, c] : diff.terms()) residual = std::max(residual, std::abs(to_double(c)));
  Json j;
  j["kernel"] = kernel_name(ScalarTraits<T>::exact);
  j["closed_form"] = form_json(closed);
  j["oracle"] = form_json(oracle);
  j["equal"] = closed == oracle;
  j["residual"] = residual;
  const bool type11 = is_type_11(closed, build_algebra(d).complex_structure().matrix());
  j["type_11"] = type11;
  j["lcb"] = is_lcb_data(d);
  j["agree"] = type11 == is_lcb_data(d);
  return j;
}

Outcome cmd_rho_b(const AlgebraDocument& doc, const Bindings& b) {
  Outcome o;
  o.report = header("rho-b");
  o.report["document"] = doc.name;
  o.report.update(exact_or_float(doc, [&](auto tag) { return rho_b_with<decltype(tag)>(doc, b); }));
  if (!o.report["equal"].get<bool>() || !o.report["agree"].get<bool>()) o.code = 2;
  return o;
}

MatrixLiteral matrix_argument(const std::string& arg) {
  if (arg.size() > 2 && arg.rfind("id", 0) == 0 && arg.find_first_not_of("0123456789", 2) == std::string::npos) {
    const int n = std::stoi(arg.substr(2));
    MatrixLiteral m;
    for (int i = 0; i < n; ++i) {
      std::vector<Literal> row(static_cast<std::size_t>(n), Literal{Rational(0), ""});
      row[static_cast<std::size_t>(i)].value = 1;
      m.rows.push_back(row);
    }
    return m;
  }
  std::string text = arg.find('[') != std::string::npos ? arg : read_text(arg);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  return parse_matrix_literal(text);
}

template <Scalar T>
Json lchk_with(const Matrix<T>& d, bool dump) {
  auto v = lchk_admissible(d);
  Json j;
  j["kernel"] = kernel_name(ScalarTraits<T>::exact);
  j["size"] = d.rows();
  j["admissible"] = v.admissible;
  j["diagonalizable"] = v.diagonalizable;
  j["cond_i"] = v.cond_i;
  j["cond_ii"] = v.cond_ii;
  j["cond_iii"] = v.cond_iii;
  j["hyperkahler"] = v.hyperkahler;
  j["a"] = v.cond_i ? scalar_json(v.a) : Json(nullptr);
  j["mult_a"] = v.mult_a;
  Json table = Json::array();
  for (const auto& e : v.table) table.push_back(Json{{"eigenvalue", e.eigenvalue}, {"multiplicity", e.multiplicity}});
  j["spectrum"] = table;
  Json blocks = Json::array();
  for (const auto& [b, count] : v.blocks) blocks.push_back(Json{{"b", scalar_json(b)}, {"count", count}});
  j["blocks"] = blocks;
  j["zero_blocks"] = v.zero_blocks;
  j["diagnostics"] = v.diagnostics;
  if (dump && v.admissible) {
    auto t = construct_lchk(d);
    auto chk = check_triple(t);
    j["witness"] = Json{{"change", matrix_json(t.change)},
                        {"canonical", matrix_json(t.canonical)},
                        {"I1", matrix_json(t.i1.matrix())},
                        {"I2", matrix_json(t.i2.matrix())},
                        {"I3", matrix_json(t.i3.matrix())},
                        {"theta", form_json(t.theta)},
                        {"checks_pass", chk.all()}};
  }
  return j;
}

Outcome cmd_lchk(const std::string& arg, bool dump) {
  Outcome o;
  o.report = header("lchk");
  MatrixLiteral m = matrix_argument(arg);
  bool decimal = false;
  for (const auto& row : m.rows)
    for (const auto& x : row) decimal = decimal || !x.decimal.empty();
  Json body;
  if (decimal) {
    body = lchk_with(matrix_value<double>(m), dump);
  } else {
    try {
      body = lchk_with(matrix_value<Rational>(m), dump);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InexactSqrt) throw;
      body = lchk_with(matrix_value<double>(m), dump);
      body["fallback"] = std::string(e.what());
    }
  }
  o.report.update(body);
  if (!o.report["admissible"].get<bool>()) o.code = 2;
  return o;
}

/// ad of a transversal element on a basis of the codimension-one abelian
/// ideal (declared or detected).
template <Scalar T>
Matrix<T> derivation_of(const AlgebraDocument& doc, const LieAlgebra<T>& l) {
  const int dim = l.dim();
  std::vector<Vector<T>> basis;
  Vector<T> top;
  if (doc.ideal) {
    auto n = *ideal_of<T>(doc);
    check_codim1_abelian_ideal(l, n);
    for (int i : *doc.ideal) basis.push_back(Vector<T>::unit(static_cast<std::size_t>(dim), static_cast<std::size_t>(i - 1)));
    for (int k = 0; k < dim; ++k)
      if (std::find(doc.ideal->begin(), doc.ideal->end(), k + 1) == doc.ideal->end())
        top = Vector<T>::unit(static_cast<std::size_t>(dim), static_cast<std::size_t>(k));
  } else {
    auto found = find_codim1_abelian_ideal(l);
    if (!found) throw Error(ErrorCode::NotAlmostAbelian, "no codimension-one abelian ideal");
    basis = found->ideal.basis();
    for (int k = 0; k < dim && top.size() == 0; ++k)
      if (!is_zero(found->covector[static_cast<std::size_t>(k)]))
        top = (T(1) / found->covector[static_cast<std::size_t>(k)]) *
              Vector<T>::unit(static_cast<std::size_t>(dim), static_cast<std::size_t>(k));
  }
  Matrix<T> cols = Matrix<T>::from_columns(basis, static_cast<std::size_t>(dim));
  Matrix<T> ad = l.ad(top);
  Matrix<T> out(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto c = solve(cols, ad * basis[j]);
    if (!c) throw Error(ErrorCode::NotAlmostAbelian, "ideal is not invariant");
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = (*c)[i];
  }
  return out;
}

HighFloat high_value(const std::string& s) {
  if (s.find('/') != std::string::npos) return ScalarTraits<HighFloat>::from_rational(evaluate_expression(s, {}));
  try {
    return HighFloat(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Input, "cannot read number '" + s + "'");
  }
}

std::vector<TSample> samples_argument(const std::string& rule, const std::string& grid) {
  if (!rule.empty() && !grid.empty()) throw Error(ErrorCode::Input, "give either --rule or --grid");
  if (!grid.empty()) {
    auto a = grid.find(':');
    auto b = grid.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) throw Error(ErrorCode::Input, "grid is lo:hi:n");
    int n = 0;
    try {
      n = std::stoi(grid.substr(b + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Input, "grid point count is not an integer");
    }
    return uniform_grid(high_value(grid.substr(0, a)), high_value(grid.substr(a + 1, b - a - 1)), n);
  }
  std::string r = rule.empty() ? "2logk:K=50" : rule;
  const std::string prefix = "2logk:K=";
  if (r.rfind(prefix, 0) != 0) throw Error(ErrorCode::Input, "unknown rule '" + r + "'");
  try {
    return two_log_k_rule(std::stoi(r.substr(prefix.size())));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::Input, "rule bound is not an integer");
  }
}

Outcome cmd_lattice(const AlgebraDocument& doc, const Bindings& b, const std::string& rule, const std::string& grid,
                    double eps_int, bool remark, unsigned threads) {
  Matrix<HighFloat> bh;
  if (doc.float_kernel()) {
    Matrix<double> m = derivation_of(doc, instantiate_document<double>(doc, b));
    bh = Matrix<HighFloat>(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) bh(i, j) = HighFloat(m(i, j));
  } else {
    bh = convert_matrix<HighFloat>(derivation_of(doc, instantiate_document<Rational>(doc, b)));
  }
  ProbeOptions opt;
  opt.eps_int = eps_int;
  opt.remark_pattern = remark;
  opt.threads = threads;
  auto report = integrality_probe(bh, samples_argument(rule, grid), opt);
  Outcome o;
  o.report = header("lattice");
  o.report["document"] = doc.name;
  o.report["B"] = matrix_json(bh);
  o.report["eps_int"] = report.eps_int;
  o.report["overall"] = report.overall();
  o.report["found_t"] = report.found ? Json(to_string(report.points[*report.found].sample.t)) : Json(nullptr);
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json row{{"t", to_string(p.sample.t)}};
    if (p.sample.k) row["k"] = p.sample.k;
    row["verdict"] = integrality_name(p.verdict);
    row["max_deviation"] = p.max_deviation;
    Json cc = Json::array(), mc = Json::array();
    for (const auto& c : p.char_coeffs) cc.push_back(to_string(c));
    for (const auto& c : p.min_coeffs) mc.push_back(to_string(c));
    row["char_poly"] = cc;
    row["min_poly"] = mc;
    if (p.remark_residual) {
      row["remark_value"] = to_string(*p.remark_value);
      row["remark_residual"] = *p.remark_residual;
    }
    points.push_back(row);
  }
  o.report["points"] = points;
  std::ostringstream os;
  os << "document " << doc.name << ": " << report.overall() << " (eps_int " << report.eps_int << ")\n";
  for (const auto& p : points) {
    os << "  t = " << p["t"].get<std::string>();
    if (p.contains("k")) os << " (k = " << p["k"].get<int>() << ")";
    os << "  " << p["verdict"].get<std::string>() << "  deviation " << p["max_deviation"].get<double>();
    if (p.contains("remark_residual")) os << "  remark residual " << p["remark_residual"].get<double>();
    os << "\n";
  }
  o.human = os.str();
  return o;
}

Json entry_json(const EntryReport& e) {
  Json samples = Json::array();
  for (const auto& s : e.samples) {
    Json checks = Json::array();
    for (const auto& c : s.checks)
      checks.push_back(Json{{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
    samples.push_back(Json{{"params", bindings_json(s.params)},
                           {"on_locus", s.on_locus},
                           {"passed", s.passed()},
                           {"checks", checks}});
  }
  return Json{{"name", e.name}, {"passed", e.passed()}, {"errors", e.errors}, {"samples", samples}};
}

Outcome cmd_catalog_verify(const std::string& entry, int samples, unsigned threads) {
  if (samples < 1) throw Error(ErrorCode::Input, "--samples must be positive");
  CatalogReport r = verify_all(samples, entry.empty() ? std::nullopt : std::optional<std::string>(entry), threads);
  Outcome o;
  o.report = header("catalog verify");
  o.report["samples"] = samples;
  o.report["passed"] = r.passed();
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back(entry_json(e));
  o.report["entries"] = entries;
  o.code = r.passed() ? 0 : 2;
  std::ostringstream os;
  for (const auto& e : r.entries) {
    os << std::left << std::setw(12) << e.name << (e.passed() ? "PASS" : "FAIL") << "  " << e.samples.size()
       << " samples\n";
    for (const auto& err : e.errors) os << "    error: " << err << "\n";
    for (const auto& s : e.samples) {
      const bool verbose = !entry.empty() || !s.passed();
      if (!verbose) continue;
      os << "    [";
      bool first = true;
      for (const auto& [k, v] : s.params) {
        os << (first ? "" : ", ") << k << " = " << v.get_str();
        first = false;
      }
      os << "]" << (s.on_locus ? " on locus" : "") << "\n";
      for (const auto& c : s.checks) {
        os << "      " << std::setw(12) << status_name(c.status) << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
      }
    }
  }
  os << (r.passed() ? "catalog: PASS\n" : "catalog: FAIL\n");
  o.human = os.str();
  return o;
}

Outcome cmd_catalog_list() {
  Outcome o;
  o.report = header("catalog list");
  Json names = Json::array();
  std::ostringstream os;
  for (const auto& d : catalog_manifest().documents) {
    names.push_back(Json{{"name", d.name}, {"dim", d.dim}});
    os << d.name << "  dim " << d.dim << "\n";
  }
  o.report["entries"] = names;
  o.human = os.str();
  return o;
}

Outcome cmd_catalog_show(const std::string& name) {
  const AlgebraDocument& d = find_entry(name);
  Outcome o;
  o.report = header("catalog show");
  o.report["name"] = d.name;
  o.report["document"] = render(d);
  o.human = render(d);
  return o;
}

std::string decimal_text(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(15) << x;
  std::string s = os.str();
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (s.back() == '.') s += '0';
  if (s == "-0.0") s = "0.0";
  return s;
}

template <Scalar T>
Literal literal_of(const T& x) {
  if constexpr (ScalarTraits<T>::exact) {
    return Literal{x, ""};
  } else {
    std::string s = decimal_text(x);
    return Literal{Rational(0), s};
  }
}

template <Scalar T>
Json skt_with(const AlgebraDocument& doc, const Bindings& b) {
  HermitianStructure<T> h = hermitian_of<T>(doc, b);
  HermitianData<T> d = data_of(doc, h);
  SktToLcb<T> r = skt_to_lcb(d);
  Matrix<T> einv = inverse(d.basis);
  Matrix<T> g = einv.transpose() * r.metric * einv;
  AlgebraDocument out = doc;
  out.name = doc.name + "-lcb";
  MatrixLiteral lit;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    std::vector<Literal> row;
    for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(literal_of(g(i, j)));
    lit.rows.push_back(row);
  }
  out.g = GSpec{lit};
  if (!out.j) out.j = JSpec{{}, MatrixLiteral{}};
  HermitianStructure<T> moved(h.algebra(), h.complex_structure(), Metric<T>(g));
  Json j;
  j["kernel"] = kernel_name(ScalarTraits<T>::exact);
  j["shift"] = vector_json(r.shift);
  j["v_before"] = vector_json(d.v);
  j["v_after"] = vector_json(r.data.v);
  j["a"] = scalar_json(d.a);
  j["lcb_data"] = is_lcb_data(r.data);
  j["lcb_direct"] = is_lcb_direct(moved);
  j["metric"] = matrix_json(g);
  j["output"] = render(out);
  return j;
}

Outcome cmd_skt_to_lcb(const AlgebraDocument& doc, const Bindings& b) {
  Outcome o;
  o.report = header("skt-to-lcb");
  o.report["document"] = doc.name;
  o.report.update(exact_or_float(doc, [&](auto tag) { return skt_with<decltype(tag)>(doc, b); }));
  o.human = o.report["output"].get<std::string>();
  if (!o.report["lcb_direct"].get<bool>() || !o.report["lcb_data"].get<bool>()) o.code = 2;
  return o;
}

void emit(const Outcome& o, bool json, std::ostream& out) {
  if (json) {
    out << o.report.dump(2) << "\n";
  } else if (!o.human.empty()) {
    out << o.human;
  } else {
    render_human(o.report, out, 0);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Special Hermitian structures on almost abelian Lie algebras", "aalg"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  double epsilon = 0;
  app.add_flag("--json", json, "Print the report as JSON");
  app.add_option("--epsilon", epsilon, "Float tolerance (default 1e-9 or AALG_EPSILON)");

  std::string file, name, matrix, rule, grid, entry;
  std::vector<std::string> params, props;
  bool dump = false, remark = false;
  double eps_int = 1e-6;
  int samples = 3;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  auto doc_options = [&](CLI::App* c) {
    c->add_option("file", file, "Algebra document")->required();
    c->add_option("--name", name, "Algebra to use when the file holds several");
    c->add_option("--param", params, "Parameter binding name=value (repeatable)");
  };
  auto* check = app.add_subcommand("check", "Evaluate special-metric predicates");
  doc_options(check);
  check->add_option("--property", props, "kahler|lck|balanced|skt|lcb|vaisman (repeatable, default all)")
      ->delimiter(',')
      ->check(CLI::IsMember({"kahler", "lck", "balanced", "skt", "lcb", "vaisman"}));
  auto* data = app.add_subcommand("data", "Extract (a, v, A) in an adapted unitary basis");
  doc_options(data);
  auto* rho = app.add_subcommand("rho-b", "Bismut-Ricci form: closed form against the oracle");
  doc_options(rho);
  auto* lchk = app.add_subcommand("lchk", "Admissibility of D for an LCHK structure");
  lchk->add_option("--matrix", matrix, "idN, an inline matrix [[..]] or a file holding one")->required();
  lchk->add_flag("--witness", dump, "Dump the constructed triple");
  auto* lattice = app.add_subcommand("lattice", "Integrality probe for exp(tB)");
  doc_options(lattice);
  lattice->add_option("--rule", rule, "Sample rule, e.g. 2logk:K=50");
  lattice->add_option("--grid", grid, "Uniform grid lo:hi:n");
  lattice->add_option("--eps-int", eps_int, "Integrality tolerance");
  lattice->add_flag("--remark", remark, "Evaluate k^2 (k^2 + a_2) + a_1 on cubic minimal polynomials");
  lattice->add_option("--threads", threads, "Worker threads");
  auto* catalog = app.add_subcommand("catalog", "Shipped catalog of named algebras");
  catalog->require_subcommand(1);
  auto* verify = catalog->add_subcommand("verify", "Run the verification harness");
  verify->add_option("--entry", entry, "Single entry");
  verify->add_option("--samples", samples, "Parameter samples per entry");
  verify->add_option("--threads", threads, "Worker threads");
  auto* list = catalog->add_subcommand("list", "List entries");
  auto* show = catalog->add_subcommand("show", "Print one entry");
  show->add_option("name", entry, "Entry name")->required();
  auto* skt = app.add_subcommand("skt-to-lcb", "Metric change turning SKT data into LCB data");
  doc_options(skt);

  std::vector<std::string> argv_store{"aalg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }
  if (epsilon > 0) set_tolerance(epsilon);

  std::string command = app.get_subcommands().front()->get_name();
  try {
    Outcome o;
    auto doc = [&] { return load_document(file, name); };
    if (*check) {
      o = cmd_check(doc(), parse_params(params), props);
    } else if (*data) {
      o = cmd_data(doc(), parse_params(params));
    } else if (*rho) {
      o = cmd_rho_b(doc(), parse_params(params));
    } else if (*lchk) {
      o = cmd_lchk(matrix, dump);
    } else if (*lattice) {
      o = cmd_lattice(doc(), parse_params(params), rule, grid, eps_int, remark, threads);
    } else if (*verify) {
      command = "catalog verify";
      o = cmd_catalog_verify(entry, samples, threads);
    } else if (*list) {
      command = "catalog list";
      o = cmd_catalog_list();
    } else if (*show) {
      command = "catalog show";
      o = cmd_catalog_show(entry);
    } else if (*skt) {
      o = cmd_skt_to_lcb(doc(), parse_params(params));
    }
    emit(o, json, out);
    return o.code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    if (json) {
      Json j = header(command);
      j["error"] = Json{{"code", std::string(code_name(e.code()))}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    } else {
      err << "aalg " << command << ": " << e.what() << "\n";
    }
    return code;
  }
}

}  // namespace aalg
