#include "milnorkit/germ_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "milnorkit/error.hpp"

namespace milnorkit {

namespace {

// Recursive-descent parser for
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | identifier | '(' expr ')'
// Division is only allowed by a nonzero constant.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, std::span<const std::string> vars, std::size_t line,
                   std::size_t column)
      : src_(src), vars_(vars), line0_(line), col0_(column) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + src_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    std::size_t line = line0_, col = col0_;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(line, col, what);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Polynomial rhs = term();
      acc = (c == '+') ? acc + rhs : acc - rhs;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return acc;
      ++pos_;
      skip_ws();
      const std::size_t rhs_at = pos_;
      Polynomial rhs = unary();
      if (c == '*') {
        acc = acc * rhs;
      } else {
        if (rhs.degree() != 0 || rhs.is_zero())
          fail_at(rhs_at, "division is only allowed by a nonzero constant");
        acc = acc * Polynomial::constant(vars_.size(), Rational(1) / rhs.constant_term());
      }
    }
  }

  Polynomial unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent after '^'");
    const std::string digits(src_.substr(start, pos_ - start));
    if (digits.size() > 4) fail_at(start, "exponent too large");
    return base.pow(static_cast<std::uint32_t>(std::stoul(digits)));
  }

  Polynomial primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of polynomial");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial number() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string int_part(src_.substr(start, pos_ - start));
    std::string frac_part;
    if (peek() == '.') {
      ++pos_;
      const std::size_t fstart = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      frac_part = std::string(src_.substr(fstart, pos_ - fstart));
    }
    if (int_part.empty() && frac_part.empty()) fail_at(start, "malformed number");
    using boost::multiprecision::cpp_int;
    cpp_int numerator(int_part.empty() ? "0" : int_part);
    cpp_int denominator = 1;
    for (char d : frac_part) {
      numerator = numerator * 10 + (d - '0');
      denominator *= 10;
    }
    return Polynomial::constant(vars_.size(), Rational(numerator, denominator));
  }

  Polynomial identifier() {
    const std::size_t start = pos_;
    while (!at_end() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) fail_at(start, "unknown variable '" + std::string(name) + "'");
    return Polynomial::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t line0_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail_node(const YAML::Node& node, const std::string& what) {
  const YAML::Mark m = node.Mark();
  throw SyntaxError(static_cast<std::size_t>(m.line + 1), static_cast<std::size_t>(m.column + 1),
                    what);
}

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::size_t read_size(const YAML::Node& node, const char* field) {
  if (!node.IsScalar()) fail_node(node, std::string("'") + field + "' must be an integer");
  const std::string s = node.Scalar();
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail_node(node, std::string("'") + field + "' must be a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(std::stoul(s));
}

bool read_bool(const YAML::Node& node, const char* field) {
  if (node.IsScalar()) {
    const std::string s = node.Scalar();
    if (s == "true") return true;
    if (s == "false") return false;
  }
  fail_node(node, std::string("flag '") + field + "' must be true or false");
}

}  // namespace

Polynomial parse_polynomial(std::string_view expr, std::span<const std::string> variables,
                            std::size_t line, std::size_t column) {
  return ExpressionParser(expr, variables, line, column).parse();
}

MapGerm parse_germ(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw SyntaxError(static_cast<std::size_t>(e.mark.line + 1),
                      static_cast<std::size_t>(e.mark.column + 1), e.msg);
  }
  if (!root.IsMap()) throw SyntaxError(1, 1, "germ file must be a mapping of fields");

  static const std::vector<std::string> known = {"source_dim", "target_dim", "variables",
                                                 "components", "flags", "name"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail_node(kv.first, "unknown field '" + key + "'");
  }

  const YAML::Node dim_node = root["source_dim"];
  if (!dim_node) throw SyntaxError(1, 1, "missing required field 'source_dim'");
  const std::size_t m = read_size(dim_node, "source_dim");

  std::vector<std::string> vars;
  if (const YAML::Node v = root["variables"]) {
    if (!v.IsSequence()) fail_node(v, "'variables' must be a list of names");
    for (const auto& item : v) {
      if (!item.IsScalar() || !valid_identifier(item.Scalar()))
        fail_node(item, "invalid variable name");
      if (std::find(vars.begin(), vars.end(), item.Scalar()) != vars.end())
        fail_node(item, "duplicate variable name '" + item.Scalar() + "'");
      vars.push_back(item.Scalar());
    }
    if (vars.size() != m)
      fail_node(v, "'variables' lists " + std::to_string(vars.size()) + " names but source_dim is " +
                       std::to_string(m));
  } else {
    vars = default_variable_names(m);
  }

  const YAML::Node comps = root["components"];
  if (!comps) throw SyntaxError(1, 1, "missing required field 'components'");
  if (!comps.IsSequence()) fail_node(comps, "'components' must be a list of polynomials");

  std::vector<Polynomial> polys;
  std::vector<YAML::Mark> marks;
  for (const auto& item : comps) {
    if (!item.IsScalar()) fail_node(item, "component must be a polynomial string");
    const YAML::Mark mk = item.Mark();
    // Quoted scalars carry the "!" tag; their text starts after the quote.
    const std::size_t shift = item.Tag() == "!" ? 1 : 0;
    polys.push_back(parse_polynomial(item.Scalar(), vars, static_cast<std::size_t>(mk.line + 1),
                                     static_cast<std::size_t>(mk.column + 1) + shift));
    marks.push_back(mk);
  }

  if (const YAML::Node t = root["target_dim"]) {
    const std::size_t k = read_size(t, "target_dim");
    if (k != polys.size())
      fail_node(t, "target_dim is " + std::to_string(k) + " but " + std::to_string(polys.size()) +
                       " components are listed");
  }

  GermFlags flags;
  if (const YAML::Node fl = root["flags"]) {
    if (!fl.IsMap()) fail_node(fl, "'flags' must be a mapping of booleans");
    for (const auto& kv : fl) {
      const auto key = kv.first.as<std::string>();
      if (key == "isolated_critical_point") {
        flags.isolated_critical_point = read_bool(kv.second, "isolated_critical_point");
      } else if (key == "isolated_critical_value") {
        flags.isolated_critical_value = read_bool(kv.second, "isolated_critical_value");
      } else {
        fail_node(kv.first, "unknown flag '" + key + "'");
      }
    }
  }

  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].constant_term() != 0)
      throw Error(Errc::constant_term,
                  "line " + std::to_string(marks[i].line + 1) + ": component " +
                      std::to_string(i + 1) + " has nonzero constant term " +
                      polys[i].constant_term().str() + "; germs must vanish at the origin");
  }
  return MapGerm(m, std::move(polys), flags, std::move(vars));
}

MapGerm load_germ_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open germ file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_germ(buf.str());
}

std::string format_germ(const MapGerm& f) {
  std::ostringstream os;
  os << "source_dim: " << f.source_dim() << "\n";
  os << "variables: [";
  for (std::size_t j = 0; j < f.variable_names().size(); ++j)
    os << (j ? ", " : "") << f.variable_names()[j];
  os << "]\n";
  os << "components:\n";
  for (const auto& p : f.components())
    os << "  - \"" << p.to_string(f.variable_names()) << "\"\n";
  os << "flags:\n";
  os << "  isolated_critical_point: " << (f.flags().isolated_critical_point ? "true" : "false")
     << "\n";
  os << "  isolated_critical_value: " << (f.flags().isolated_critical_value ? "true" : "false")
     << "\n";
  return os.str();
}

}  // namespace milnorkit
