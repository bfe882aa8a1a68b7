#pragma once

// Text format for algebras given by structure equations:
//
//   algebra g1 dim 6
//   params p = -1/4
//   constraints p != 0
//   claims lck, unimodular-iff p = -1/4
//   d = (f16, pf26, pf36, pf46, pf56, 0)
//   J: f1->f6, f2->f3, f4->f5
//   g: identity
//   ideal: f1, f2, f3, f4, f5
//
// Only the header and d are mandatory. With dim >= 10 every two-form is
// written f{i},{j} (f1,12); below that it is f{i}{j}. A decimal literal
// anywhere switches the document to the float kernel.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aalg/hermitian.hpp"

namespace aalg {

using Bindings = std::map<std::string, Rational>;

struct Literal {
  Rational value;
  /// Source text for decimals; empty for rationals.
  std::string decimal;
  std::string render() const { return decimal.empty() ? value.get_str() : decimal; }
  double to_double() const { return decimal.empty() ? value.get_d() : std::stod(decimal); }
};

/// coeff * params[0] * ... * f^{ij}, indices 1-based with i < j.
struct DiffTerm {
  Literal coeff;
  std::vector<std::string> params;
  int i = 0;
  int j = 0;
};

struct ParamDecl {
  std::string name;
  std::optional<Literal> value;
};

struct Constraint {
  std::string lhs;
  std::string op;  // "!=" or "="
  std::string rhs;
};

struct MatrixLiteral {
  std::vector<std::vector<Literal>> rows;
};

struct JSpec {
  std::vector<std::pair<int, int>> pairs;  // 1-based, J f_a = f_b
  std::optional<MatrixLiteral> matrix;
};

struct GSpec {
  std::optional<MatrixLiteral> matrix;  // identity when empty
};

struct AlgebraDocument {
  std::string name;
  int dim = 0;
  std::vector<ParamDecl> params;
  std::vector<Constraint> constraints;
  std::vector<std::string> claims;
  std::vector<std::vector<DiffTerm>> d;
  std::optional<JSpec> j;
  std::optional<GSpec> g;
  std::optional<std::vector<int>> ideal;  // 1-based basis indices

  bool float_kernel() const;
  Bindings bound_params() const;
  bool has_param(const std::string& name) const;
};

AlgebraDocument parse_document(const std::string& text);

/// A file holding several documents, optionally preceded by a
/// `manifest <version>` line.
struct Manifest {
  std::string version;
  std::vector<AlgebraDocument> documents;
};

Manifest parse_manifest(const std::string& text);

/// A bare matrix literal such as [[1, 0], [0, -1/2]].
MatrixLiteral parse_matrix_literal(const std::string& text);

std::string render(const AlgebraDocument& doc);
std::string render(const Manifest& m);

/// Evaluates a rational expression in the parameters: + - * / ^, parentheses,
/// rational and decimal literals and parameter names.
Rational evaluate_expression(const std::string& expr, const Bindings& b);

/// True when every constraint holds; fills `violated` with the first failure.
bool constraints_hold(const AlgebraDocument& doc, const Bindings& b, std::string* violated = nullptr);

/// Parameters of the document merged with extra bindings (extra wins).
/// Throws UNBOUND_PARAMETER for any parameter left without a value, and
/// CONSTRAINT_VIOLATION when a constraint fails.
Bindings resolve_bindings(const AlgebraDocument& doc, const Bindings& extra = {});

template <Scalar T>
T literal_value(const Literal& l) {
  if constexpr (ScalarTraits<T>::exact)
    return l.value;
  else
    return T(l.to_double());
}

template <Scalar T>
Matrix<T> matrix_value(const MatrixLiteral& m) {
  Matrix<T> out(m.rows.size(), m.rows.empty() ? 0 : m.rows.front().size());
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < m.rows[i].size(); ++j) out(i, j) = literal_value<T>(m.rows[i][j]);
  return out;
}

/// Structure constants from the tuple; df^k = sum c f^{ij} means [f_i, f_j] has
/// f_k-component -c.
template <Scalar T>
LieAlgebra<T> instantiate_document(const AlgebraDocument& doc, const Bindings& extra = {}) {
  Bindings b = resolve_bindings(doc, extra);
  std::map<std::string, T> values;
  for (const auto& p : doc.params) {
    if (p.value && p.value->decimal.size() && !extra.count(p.name))
      values[p.name] = literal_value<T>(*p.value);
    else if constexpr (ScalarTraits<T>::exact)
      values[p.name] = b.at(p.name);
    else
      values[p.name] = T(b.at(p.name).get_d());
  }
  StructureConstants<T> c(doc.dim);
  for (std::size_t k = 0; k < doc.d.size(); ++k)
    for (const auto& t : doc.d[k]) {
      T coeff = literal_value<T>(t.coeff);
      for (const auto& name : t.params) coeff *= values.at(name);
      c(static_cast<int>(k), t.i - 1, t.j - 1) -= coeff;
      c(static_cast<int>(k), t.j - 1, t.i - 1) += coeff;
    }
  return LieAlgebra<T>::validate(std::move(c));
}

template <Scalar T>
ComplexStructure<T> complex_structure_of(const AlgebraDocument& doc) {
  if (!doc.j) throw Error(ErrorCode::Input, "document has no J");
  if (doc.j->matrix) return ComplexStructure<T>(matrix_value<T>(*doc.j->matrix));
  std::vector<std::pair<int, int>> zero_based;
  for (auto [a, b] : doc.j->pairs) zero_based.emplace_back(a - 1, b - 1);
  return ComplexStructure<T>::from_pairs(static_cast<std::size_t>(doc.dim), zero_based);
}

template <Scalar T>
Metric<T> metric_of(const AlgebraDocument& doc) {
  if (!doc.g || !doc.g->matrix) return Metric<T>::identity(static_cast<std::size_t>(doc.dim));
  return Metric<T>(matrix_value<T>(*doc.g->matrix));
}

template <Scalar T>
HermitianStructure<T> hermitian_of(const AlgebraDocument& doc, const Bindings& extra = {}) {
  return HermitianStructure<T>(instantiate_document<T>(doc, extra), complex_structure_of<T>(doc), metric_of<T>(doc));
}

template <Scalar T>
std::optional<Subspace<T>> ideal_of(const AlgebraDocument& doc) {
  if (!doc.ideal) return std::nullopt;
  std::vector<Vector<T>> span;
  for (int i : *doc.ideal) span.push_back(Vector<T>::unit(static_cast<std::size_t>(doc.dim), static_cast<std::size_t>(i - 1)));
  return Subspace<T>::span(doc.dim, span);
}

}  // namespace aalg
