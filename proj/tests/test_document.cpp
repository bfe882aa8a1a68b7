#include "aalg/catalog.hpp"

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"

using namespace aalg;
using namespace aalg::testing;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// A random document over the parameters p, q, r with random terms.
AlgebraDocument random_document(Draw& r, int dim) {
  AlgebraDocument doc;
  doc.name = "rnd" + std::to_string(r.integer(0, 99));
  doc.dim = dim;
  const std::vector<std::string> names{"p", "q", "r"};
  const int nparams = r.integer(0, 3);
  for (int k = 0; k < nparams; ++k) {
    ParamDecl p{names[static_cast<std::size_t>(k)], std::nullopt};
    if (r.coin()) p.value = Literal{r.rational(), ""};
    doc.params.push_back(p);
  }
  if (nparams > 0 && r.coin()) doc.constraints.push_back({"p", "!=", "0"});
  doc.d.resize(static_cast<std::size_t>(dim));
  for (auto& expr : doc.d) {
    const int terms = r.integer(0, 3);
    for (int t = 0; t < terms; ++t) {
      DiffTerm term;
      const int choice = r.integer(0, 3);
      term.coeff.value = choice == 0 ? Q(1) : choice == 1 ? Q(-1) : r.nonzero_rational();
      for (int k = 0; k < nparams; ++k)
        if (r.integer(0, 2) == 0) term.params.push_back(names[static_cast<std::size_t>(k)]);
      term.i = r.integer(1, dim - 1);
      term.j = r.integer(term.i + 1, dim);
      expr.push_back(term);
    }
  }
  if (r.coin()) {
    JSpec j;
    for (int k = 1; k < dim; k += 2) j.pairs.emplace_back(k, k + 1);
    doc.j = j;
  }
  if (r.coin()) doc.g = GSpec{};
  if (r.coin()) {
    std::vector<int> ideal;
    for (int k = 1; k < dim; ++k) ideal.push_back(k);
    doc.ideal = ideal;
  }
  return doc;
}

bool same_terms(const AlgebraDocument& a, const AlgebraDocument& b) {
  if (a.d.size() != b.d.size()) return false;
  for (std::size_t k = 0; k < a.d.size(); ++k) {
    if (a.d[k].size() != b.d[k].size()) return false;
    for (std::size_t t = 0; t < a.d[k].size(); ++t) {
      const auto& x = a.d[k][t];
      const auto& y = b.d[k][t];
      if (x.coeff.value != y.coeff.value || x.params != y.params || x.i != y.i || x.j != y.j) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("h3+R and g4 from their tuples") {
  auto h3 = parse_document("algebra h3R dim 4\nd = (0,0,0,f12)");
  CHECK(h3.name == "h3R");
  CHECK(instantiate_document<Q>(h3).constants() == h3_r().constants());
  auto g = parse_document("algebra g4 dim 6\nd = (f16,f26,f36,f46,0,0)");
  CHECK(instantiate_document<Q>(g).constants() == g4().constants());
}

TEST_CASE("positioned syntax errors") {
  auto code = thrown_code([] { parse_document("algebra x dim 6\nd = (f16"); });
  REQUIRE(code);
  CHECK(*code == ErrorCode::Syntax);
  CHECK(thrown_message([] { parse_document("algebra x dim 6\nd = (f16"); }).find("line 2, column 9") != std::string::npos);
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nd = (f12 f13, 0, 0, 0)"); }) == ErrorCode::Syntax);
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nd = (3, 0, 0, 0)"); }) == ErrorCode::Syntax);
  CHECK(thrown_code([] { parse_document("algebra x dim four\nd = (0, 0, 0, 0)"); }) == ErrorCode::Syntax);
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nwhat = 3\nd = (0, 0, 0, 0)"); }) == ErrorCode::Syntax);
  CHECK(thrown_code([] { parse_document("algebra x dim 4"); }) == ErrorCode::Syntax);
}

TEST_CASE("index out of range") {
  CHECK(thrown_code([] { parse_document("algebra x dim 6\nd = (f17, 0, 0, 0, 0, 0)"); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown_code([] { parse_document("algebra x dim 6\nd = (f21, 0, 0, 0, 0, 0)"); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nd = (0, 0, 0, 0)\nJ: f1->f5"); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nd = (0, 0, 0)"); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("unbound parameters") {
  CHECK(thrown_code([] { parse_document("algebra x dim 4\nd = (qf14, 0, 0, 0)"); }) == ErrorCode::UnboundParameter);
  auto doc = parse_document("algebra x dim 4\nparams q\nd = (qf14, 0, 0, 0)");
  CHECK(thrown_code([&] { instantiate_document<Q>(doc); }) == ErrorCode::UnboundParameter);
  CHECK(thrown_code([&] { instantiate_document<Q>(doc, {{"z", Q(1)}}); }) == ErrorCode::UnboundParameter);
  auto l = instantiate_document<Q>(doc, {{"q", Q(3)}});
  CHECK(l.ad_basis(3)(0, 0) == Q(3));
}

TEST_CASE("comma form for dimension 10 and above") {
  auto doc = parse_document(
      "algebra big dim 12\nd = (f1,12, 2f2,12, 0, 0, 0, 0, 0, 0, 0, 0, -f10,12+f11,12, 0)");
  REQUIRE(doc.d[0].size() == 1);
  CHECK(doc.d[0][0].i == 1);
  CHECK(doc.d[0][0].j == 12);
  CHECK(doc.d[10].size() == 2);
  CHECK(render(doc).find("-f10,12+f11,12") != std::string::npos);
  CHECK(thrown_code([] { parse_document("algebra big dim 12\nd = (f112, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)"); }) ==
        ErrorCode::Syntax);
  CHECK(thrown_code([] { parse_document("algebra x dim 6\nd = (f1,6, 0, 0, 0, 0, 0)"); }) == ErrorCode::Syntax);
}

TEST_CASE("decimal literals select the float kernel") {
  auto exact = parse_document("algebra x dim 4\nparams p = -1/4\nd = (pf14, f24, 0, 0)");
  CHECK_FALSE(exact.float_kernel());
  CHECK(instantiate_document<Q>(exact).ad_basis(3)(0, 0) == q(-1, 4));
  auto fl = parse_document("algebra x dim 4\nparams p = -0.25\nd = (pf14, 1.5f24, 0, 0)");
  CHECK(fl.float_kernel());
  auto l = instantiate_document<double>(fl);
  CHECK(l.ad_basis(3)(0, 0) == doctest::Approx(-0.25));
  CHECK(l.ad_basis(3)(1, 1) == doctest::Approx(1.5));
  CHECK(render(fl).find("1.5f24") != std::string::npos);
  auto fm = parse_document("algebra x dim 2\nd = (f12, 0)\ng: matrix [[2.0, 0], [0, 1]]");
  CHECK(fm.float_kernel());
}

TEST_CASE("J and g specifications") {
  auto doc = parse_document(
      "algebra aff dim 4\nd = (f12, 0, 0, 0)\nJ: f1->f2, f3->f4\ng: matrix [[2, 0, 1, 0], [0, 2, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]]");
  auto h = hermitian_of<Q>(doc);
  CHECK(is_lck_direct(h));
  CHECK_FALSE(is_kahler_direct(h));
  auto jm = parse_document("algebra x dim 2\nd = (f12, 0)\nJ: matrix [[0, -1], [1, 0]]\ng: identity");
  CHECK(complex_structure_of<Q>(jm).matrix() == Matrix<Q>{{0, -1}, {1, 0}});
  CHECK(render(parse_document(render(jm))) == render(jm));
}

TEST_CASE("constraints and expressions") {
  Bindings b{{"p", q(1, 2)}, {"q", q(-3)}};
  CHECK(evaluate_expression("-p/2 - q", b) == q(11, 4));
  CHECK(evaluate_expression("p^2 + q^2", b) == q(37, 4));
  CHECK(evaluate_expression("(p - q) * 2", b) == q(7));
  CHECK(evaluate_expression("-1/2 - p", b) == q(-1));
  CHECK(thrown_code([&] { evaluate_expression("p +", b); }) == ErrorCode::Syntax);
  CHECK(thrown_code([&] { evaluate_expression("z", b); }) == ErrorCode::UnboundParameter);
  auto doc = parse_document("algebra x dim 4\nparams p, q\nconstraints p*q != 0, p != -q\nd = (pf14, qf24, 0, 0)");
  std::string why;
  CHECK(constraints_hold(doc, b));
  CHECK_FALSE(constraints_hold(doc, {{"p", Q(1)}, {"q", Q(-1)}}, &why));
  CHECK(why == "p != -q");
  CHECK(thrown_code([&] { resolve_bindings(doc, {{"p", Q(0)}, {"q", Q(1)}}); }) == ErrorCode::ConstraintViolation);
}

TEST_CASE("render then parse is the identity on random documents") {
  Draw r(91);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = std::vector<int>{4, 6, 8, 10, 12}[static_cast<std::size_t>(r.integer(0, 4))];
    AlgebraDocument doc = random_document(r, dim);
    const std::string text = render(doc);
    AlgebraDocument back = parse_document(text);
    CHECK(render(back) == text);
    CHECK(same_terms(doc, back));
    CHECK(back.params.size() == doc.params.size());
    CHECK(back.ideal == doc.ideal);
  }
}

TEST_CASE("the shipped manifest round-trips byte for byte") {
  const std::string& text = catalog_text();
  CHECK(read_file(AALG_CATALOG_FILE) == text);
  Manifest m = parse_manifest(text);
  CHECK(m.version == "aalg-catalog/1");
  CHECK(m.documents.size() == catalog_manifest().documents.size());
  CHECK(render(m) == text);
  for (const auto& doc : m.documents) CHECK(render(parse_document(render(doc))) == render(doc));
}
