#include "aalg/document.hpp"

#include <cctype>
#include <sstream>

namespace aalg {

namespace {

[[noreturn]] void syntax(int line, std::size_t col, const std::string& msg) {
  throw Error(ErrorCode::Syntax, "line " + std::to_string(line) + ", column " + std::to_string(col + 1) + ": " + msg);
}

/// Cursor over one line of input.
class Cursor {
 public:
  Cursor(std::string text, int line, std::size_t offset = 0) : s_(std::move(text)), line_(line), pos_(offset) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
  bool accept(const std::string& tok) {
    skip_ws();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { syntax(line_, pos_, msg); }
  std::size_t pos() const { return pos_; }
  int line() const { return line_; }
  const std::string& text() const { return s_; }
  void advance(std::size_t n = 1) { pos_ += n; }

  std::string digits() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  /// Unsigned rational or decimal literal.
  Literal number() {
    skip_ws();
    std::size_t start = pos_;
    std::string whole = digits();
    if (whole.empty()) fail("expected a number");
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      digits();
      std::string text = s_.substr(start, pos_ - start);
      return {parse_rational(text), text};
    }
    if (peek() == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      std::string den = digits();
      if (mpz_class(den) == 0) syntax(line_, start, "zero denominator");
    }
    return {parse_rational(s_.substr(start, pos_ - start)), ""};
  }

  /// Signed literal.
  Literal signed_number() {
    skip_ws();
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = peek() == '-';
      ++pos_;
    }
    Literal l = number();
    if (neg) {
      l.value = -l.value;
      if (!l.decimal.empty()) l.decimal = "-" + l.decimal;
    }
    return l;
  }

  /// Identifier; stops before an 'f' that starts a two-form (f followed by a digit).
  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected a name");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      if (pos_ > start && peek() == 'f' && std::isdigit(static_cast<unsigned char>(peek(1)))) break;
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  /// Any non-space token.
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a word");
    return s_.substr(start, pos_ - start);
  }

  std::string rest() {
    skip_ws();
    std::string r = s_.substr(pos_);
    pos_ = s_.size();
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    return r;
  }

 private:
  std::string s_;
  int line_;
  std::size_t pos_;
};

/// Splits on commas that are outside parentheses and brackets.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += ch;
  }
  out.push_back(cur);
  for (auto& x : out) {
    auto b = x.find_first_not_of(" \t");
    auto e = x.find_last_not_of(" \t");
    x = b == std::string::npos ? "" : x.substr(b, e - b + 1);
  }
  return out;
}

int basis_index(Cursor& c, int dim) {
  c.skip_ws();
  std::size_t at = c.pos();
  if (!c.accept("f")) c.fail("expected a basis vector f<i>");
  std::string d = c.digits();
  if (d.empty()) c.fail("expected an index after 'f'");
  int i = std::stoi(d);
  if (i < 1 || i > dim)
    throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(c.line()) + ", column " + std::to_string(at + 1) +
                                                 ": index " + d + " outside 1.." + std::to_string(dim));
  return i;
}

DiffTerm parse_term(Cursor& c, int dim, const AlgebraDocument& doc, bool negative) {
  DiffTerm t;
  t.coeff.value = 1;
  bool has_number = false;
  c.skip_ws();
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    t.coeff = c.number();
    has_number = true;
    c.accept("*");
  }
  while (true) {
    c.skip_ws();
    if (c.peek() == 'f' && std::isdigit(static_cast<unsigned char>(c.peek(1)))) break;
    if (!std::isalpha(static_cast<unsigned char>(c.peek()))) {
      if (has_number && t.params.empty()) {
        if (c.peek() == ',' || c.peek() == ')' || c.peek() == '\0' || c.peek() == '+' || c.peek() == '-')
          c.fail("a bare number is only allowed as the whole expression 0");
      }
      c.fail("expected a two-form f<i><j>");
    }
    std::size_t at = c.pos();
    std::string name = c.identifier();
    if (!doc.has_param(name))
      throw Error(ErrorCode::UnboundParameter,
                  "line " + std::to_string(c.line()) + ", column " + std::to_string(at + 1) + ": unknown parameter '" + name + "'");
    t.params.push_back(name);
    c.accept("*");
  }
  std::size_t at = c.pos();
  c.advance();  // 'f'
  std::string first = c.digits();
  if (dim >= 10) {
    if (c.peek() != ',') c.fail("two-forms are written f<i>,<j> when dim >= 10");
    c.advance();
    std::string second = c.digits();
    if (second.empty()) c.fail("expected the second index");
    t.i = std::stoi(first);
    t.j = std::stoi(second);
  } else {
    if (first.size() != 2) syntax(c.line(), at, "two-forms are written f<i><j> with single-digit indices");
    t.i = first[0] - '0';
    t.j = first[1] - '0';
  }
  auto bad = [&](const std::string& msg) {
    throw Error(ErrorCode::IndexOutOfRange,
                "line " + std::to_string(c.line()) + ", column " + std::to_string(at + 1) + ": " + msg);
  };
  if (t.i < 1 || t.j < 1 || t.i > dim || t.j > dim) bad("index outside 1.." + std::to_string(dim));
  if (t.i >= t.j) bad("two-form indices must increase");
  if (negative) {
    t.coeff.value = -t.coeff.value;
    if (!t.coeff.decimal.empty()) t.coeff.decimal = "-" + t.coeff.decimal;
  }
  return t;
}

std::vector<DiffTerm> parse_expression(Cursor& c, int dim, const AlgebraDocument& doc) {
  std::vector<DiffTerm> terms;
  c.skip_ws();
  if (c.peek() == '0' && !std::isdigit(static_cast<unsigned char>(c.peek(1))) && c.peek(1) != '.' && c.peek(1) != '/' &&
      c.peek(1) != 'f' && c.peek(1) != '*' && !std::isalpha(static_cast<unsigned char>(c.peek(1)))) {
    c.advance();
    return terms;
  }
  bool first = true;
  while (true) {
    c.skip_ws();
    bool negative = false;
    if (c.peek() == '-' || c.peek() == '+') {
      negative = c.peek() == '-';
      c.advance();
    } else if (!first) {
      break;
    }
    terms.push_back(parse_term(c, dim, doc, negative));
    first = false;
  }
  return terms;
}

MatrixLiteral parse_matrix(Cursor& c) {
  MatrixLiteral m;
  c.expect("[");
  do {
    c.expect("[");
    std::vector<Literal> row;
    do row.push_back(c.signed_number());
    while (c.accept(","));
    c.expect("]");
    if (!m.rows.empty() && row.size() != m.rows.front().size()) c.fail("matrix rows have different lengths");
    m.rows.push_back(std::move(row));
  } while (c.accept(","));
  c.expect("]");
  return m;
}

bool literal_is_decimal(const Literal& l) { return !l.decimal.empty(); }

std::string render_literal_matrix(const MatrixLiteral& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t j = 0; j < m.rows[i].size(); ++j) {
      if (j) s += ", ";
      s += m.rows[i][j].render();
    }
    s += "]";
  }
  return s + "]";
}

std::string render_term(const DiffTerm& t, int dim, bool first) {
  std::string s;
  bool neg = t.coeff.decimal.empty() ? sgn(t.coeff.value) < 0 : t.coeff.decimal.front() == '-';
  if (neg)
    s += "-";
  else if (!first)
    s += "+";
  std::string mag = t.coeff.render();
  if (neg) mag = mag.substr(1);
  if (mag != "1" || !t.coeff.decimal.empty()) s += mag;
  for (std::size_t k = 0; k < t.params.size(); ++k) {
    if (k) s += "*";
    s += t.params[k];
  }
  s += "f" + std::to_string(t.i) + (dim >= 10 ? "," : "") + std::to_string(t.j);
  return s;
}

/// Recursive descent over + - * / ^ and parentheses.
class ExprParser {
 public:
  ExprParser(const std::string& s, const Bindings* b) : c_(s, 0), b_(b) {}

  Rational parse() {
    Rational v = sum();
    if (!c_.done()) c_.fail("unexpected text in expression");
    return v;
  }

 private:
  Rational sum() {
    Rational v = product();
    while (true) {
      if (c_.accept("+"))
        v += product();
      else if (c_.accept("-"))
        v -= product();
      else
        return v;
    }
  }
  Rational product() {
    Rational v = unary();
    while (true) {
      if (c_.accept("*")) {
        v *= unary();
      } else if (c_.accept("/")) {
        Rational d = unary();
        if (sgn(d) == 0) {
          if (b_) throw Error(ErrorCode::ConstraintViolation, "division by zero in expression");
          continue;
        }
        v /= d;
      } else {
        return v;
      }
    }
  }
  Rational unary() {
    if (c_.accept("-")) return -unary();
    if (c_.accept("+")) return unary();
    return power();
  }
  Rational power() {
    Rational base = atom();
    if (c_.accept("^")) {
      c_.skip_ws();
      std::string e = c_.digits();
      if (e.empty()) c_.fail("expected an integer exponent");
      Rational r = 1;
      for (int k = 0; k < std::stoi(e); ++k) r *= base;
      return r;
    }
    return base;
  }
  Rational atom() {
    c_.skip_ws();
    if (c_.accept("(")) {
      Rational v = sum();
      c_.expect(")");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c_.peek()))) return c_.number().value;
    std::string name = c_.identifier();
    if (!b_) return 1;  // syntax check only
    auto it = b_->find(name);
    if (it == b_->end()) throw Error(ErrorCode::UnboundParameter, "parameter '" + name + "' has no value");
    return it->second;
  }

  Cursor c_;
  const Bindings* b_;
};

void parse_line(AlgebraDocument& doc, const std::string& raw, int line) {
  Cursor c(raw, line);
  if (c.accept("params")) {
    for (const auto& part : split_top_level(c.rest())) {
      Cursor pc(part, line);
      ParamDecl p{pc.identifier(), std::nullopt};
      if (pc.accept("=")) p.value = pc.signed_number();
      if (!pc.done()) pc.fail("unexpected text in parameter declaration");
      doc.params.push_back(std::move(p));
    }
  } else if (c.accept("constraints")) {
    for (const auto& part : split_top_level(c.rest())) {
      auto ne = part.find("!=");
      auto eq = part.find('=');
      Constraint k;
      if (ne != std::string::npos) {
        k = {part.substr(0, ne), "!=", part.substr(ne + 2)};
      } else if (eq != std::string::npos) {
        k = {part.substr(0, eq), "=", part.substr(eq + 1)};
      } else {
        c.fail("constraint needs != or =");
      }
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(' ');
        auto e = s.find_last_not_of(' ');
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      k.lhs = trim(k.lhs);
      k.rhs = trim(k.rhs);
      ExprParser(k.lhs, nullptr).parse();
      ExprParser(k.rhs, nullptr).parse();
      doc.constraints.push_back(std::move(k));
    }
  } else if (c.accept("claims")) {
    for (auto& part : split_top_level(c.rest()))
      if (!part.empty()) doc.claims.push_back(part);
  } else if (c.accept("d")) {
    c.expect("=");
    c.expect("(");
    do {
      doc.d.push_back(parse_expression(c, doc.dim, doc));
    } while (c.accept(","));
    c.expect(")");
    if (!c.done()) c.fail("unexpected text after the tuple");
    if (static_cast<int>(doc.d.size()) != doc.dim)
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line) + ": tuple has " +
                                                    std::to_string(doc.d.size()) + " entries for dim " +
                                                    std::to_string(doc.dim));
  } else if (c.accept("J:")) {
    JSpec j;
    if (c.accept("matrix")) {
      j.matrix = parse_matrix(c);
    } else {
      do {
        int a = basis_index(c, doc.dim);
        c.expect("->");
        int b = basis_index(c, doc.dim);
        j.pairs.emplace_back(a, b);
      } while (c.accept(","));
    }
    if (!c.done()) c.fail("unexpected text after J");
    doc.j = std::move(j);
  } else if (c.accept("g:")) {
    GSpec g;
    if (c.accept("matrix"))
      g.matrix = parse_matrix(c);
    else if (!c.accept("identity"))
      c.fail("expected 'identity' or 'matrix'");
    if (!c.done()) c.fail("unexpected text after g");
    doc.g = std::move(g);
  } else if (c.accept("ideal:")) {
    std::vector<int> idx;
    do idx.push_back(basis_index(c, doc.dim));
    while (c.accept(","));
    if (!c.done()) c.fail("unexpected text after ideal");
    doc.ideal = std::move(idx);
  } else {
    c.fail("unknown directive");
  }
}

/// Lines of one document; the first must be the header.
AlgebraDocument parse_lines(const std::vector<std::pair<int, std::string>>& lines) {
  AlgebraDocument doc;
  const auto& [first_no, header] = lines.front();
  Cursor h(header, first_no);
  h.expect("algebra");
  doc.name = h.word();
  h.expect("dim");
  h.skip_ws();
  std::string d = h.digits();
  if (d.empty()) h.fail("expected the dimension");
  doc.dim = std::stoi(d);
  if (doc.dim < 1) h.fail("dimension must be positive");
  if (!h.done()) h.fail("unexpected text after the header");
  for (std::size_t k = 1; k < lines.size(); ++k) parse_line(doc, lines[k].second, lines[k].first);
  if (doc.d.empty()) syntax(first_no, 0, "document '" + doc.name + "' has no d = (...) line");
  return doc;
}

std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

bool starts_with(const std::string& s, const std::string& p) {
  auto b = s.find_first_not_of(" \t");
  return b != std::string::npos && s.compare(b, p.size(), p) == 0;
}

}  // namespace

bool AlgebraDocument::float_kernel() const {
  for (const auto& p : params)
    if (p.value && literal_is_decimal(*p.value)) return true;
  for (const auto& e : d)
    for (const auto& t : e)
      if (literal_is_decimal(t.coeff)) return true;
  auto matrix_decimal = [](const std::optional<MatrixLiteral>& m) {
    if (!m) return false;
    for (const auto& row : m->rows)
      for (const auto& x : row)
        if (literal_is_decimal(x)) return true;
    return false;
  };
  return (j && matrix_decimal(j->matrix)) || (g && matrix_decimal(g->matrix));
}

Bindings AlgebraDocument::bound_params() const {
  Bindings b;
  for (const auto& p : params)
    if (p.value) b[p.name] = p.value->value;
  return b;
}

bool AlgebraDocument::has_param(const std::string& n) const {
  for (const auto& p : params)
    if (p.name == n) return true;
  return false;
}

AlgebraDocument parse_document(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) syntax(1, 0, "empty document");
  for (std::size_t k = 1; k < lines.size(); ++k)
    if (starts_with(lines[k].second, "algebra ")) syntax(lines[k].first, 0, "a second algebra header; use a manifest");
  return parse_lines(lines);
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  auto lines = content_lines(text);
  std::size_t k = 0;
  if (!lines.empty() && starts_with(lines[0].second, "manifest")) {
    Cursor c(lines[0].second, lines[0].first);
    c.expect("manifest");
    m.version = c.word();
    if (!c.done()) c.fail("unexpected text after the manifest version");
    k = 1;
  }
  std::vector<std::pair<int, std::string>> block;
  for (; k < lines.size(); ++k) {
    if (starts_with(lines[k].second, "algebra ") && !block.empty()) {
      m.documents.push_back(parse_lines(block));
      block.clear();
    }
    if (block.empty() && !starts_with(lines[k].second, "algebra "))
      syntax(lines[k].first, 0, "expected an 'algebra' header");
    block.push_back(lines[k]);
  }
  if (!block.empty()) m.documents.push_back(parse_lines(block));
  return m;
}

MatrixLiteral parse_matrix_literal(const std::string& text) {
  Cursor c(text, 1);
  MatrixLiteral m = parse_matrix(c);
  if (!c.done()) c.fail("unexpected text after the matrix");
  return m;
}

std::string render(const AlgebraDocument& doc) {
  std::string s = "algebra " + doc.name + " dim " + std::to_string(doc.dim) + "\n";
  if (!doc.params.empty()) {
    s += "params ";
    for (std::size_t k = 0; k < doc.params.size(); ++k) {
      if (k) s += ", ";
      s += doc.params[k].name;
      if (doc.params[k].value) s += " = " + doc.params[k].value->render();
    }
    s += "\n";
  }
  if (!doc.constraints.empty()) {
    s += "constraints ";
    for (std::size_t k = 0; k < doc.constraints.size(); ++k) {
      if (k) s += ", ";
      s += doc.constraints[k].lhs + " " + doc.constraints[k].op + " " + doc.constraints[k].rhs;
    }
    s += "\n";
  }
  if (!doc.claims.empty()) {
    s += "claims ";
    for (std::size_t k = 0; k < doc.claims.size(); ++k) s += (k ? ", " : "") + doc.claims[k];
    s += "\n";
  }
  s += "d = (";
  for (std::size_t k = 0; k < doc.d.size(); ++k) {
    if (k) s += ", ";
    if (doc.d[k].empty()) s += "0";
    for (std::size_t t = 0; t < doc.d[k].size(); ++t) s += render_term(doc.d[k][t], doc.dim, t == 0);
  }
  s += ")\n";
  if (doc.j) {
    s += "J: ";
    if (doc.j->matrix) {
      s += "matrix " + render_literal_matrix(*doc.j->matrix);
    } else {
      for (std::size_t k = 0; k < doc.j->pairs.size(); ++k) {
        if (k) s += ", ";
        s += "f" + std::to_string(doc.j->pairs[k].first) + "->f" + std::to_string(doc.j->pairs[k].second);
      }
    }
    s += "\n";
  }
  if (doc.g) s += doc.g->matrix ? "g: matrix " + render_literal_matrix(*doc.g->matrix) + "\n" : "g: identity\n";
  if (doc.ideal) {
    s += "ideal: ";
    for (std::size_t k = 0; k < doc.ideal->size(); ++k) s += (k ? ", f" : "f") + std::to_string((*doc.ideal)[k]);
    s += "\n";
  }
  return s;
}

std::string render(const Manifest& m) {
  std::string s;
  if (!m.version.empty()) s += "manifest " + m.version + "\n";
  for (const auto& d : m.documents) s += "\n" + render(d);
  return s;
}

Rational evaluate_expression(const std::string& expr, const Bindings& b) { return ExprParser(expr, &b).parse(); }

bool constraints_hold(const AlgebraDocument& doc, const Bindings& b, std::string* violated) {
  for (const auto& k : doc.constraints) {
    Rational l = evaluate_expression(k.lhs, b);
    Rational r = evaluate_expression(k.rhs, b);
    bool ok = k.op == "!=" ? l != r : l == r;
    if (!ok) {
      if (violated) *violated = k.lhs + " " + k.op + " " + k.rhs;
      return false;
    }
  }
  return true;
}

Bindings resolve_bindings(const AlgebraDocument& doc, const Bindings& extra) {
  Bindings b = doc.bound_params();
  for (const auto& [k, v] : extra) {
    if (!doc.has_param(k)) throw Error(ErrorCode::UnboundParameter, "document has no parameter '" + k + "'");
    b[k] = v;
  }
  for (const auto& p : doc.params)
    if (!b.count(p.name)) throw Error(ErrorCode::UnboundParameter, "parameter '" + p.name + "' has no value");
  std::string why;
  if (!constraints_hold(doc, b, &why))
    throw Error(ErrorCode::ConstraintViolation, "constraint " + why + " fails for " + doc.name);
  return b;
}

}  // namespace aalg
