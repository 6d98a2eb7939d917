#include "milnorkit/space_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "milnorkit/error.hpp"

namespace milnorkit {

// ChiValue ------------------------------------------------------------------

ChiValue::ChiValue(std::int64_t constant) {
  if (constant != 0) terms_[{}] = constant;
}

ChiValue ChiValue::indeterminate(const std::string& name) {
  ChiValue v;
  v.terms_[{name}] = 1;
  return v;
}

void ChiValue::add(const Monomial& m, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool ChiValue::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

std::int64_t ChiValue::constant() const noexcept {
  const auto it = terms_.find({});
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t ChiValue::coefficient(const std::string& name) const noexcept {
  const auto it = terms_.find({name});
  return it == terms_.end() ? 0 : it->second;
}

std::size_t ChiValue::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

ChiValue ChiValue::substitute(const std::string& name, const ChiValue& value) const {
  ChiValue out;
  for (const auto& [m, c] : terms_) {
    ChiValue term(c);
    Monomial rest;
    for (const auto& n : m) {
      if (n == name) {
        term = term * value;
      } else {
        rest.push_back(n);
      }
    }
    ChiValue rest_value(1);
    if (!rest.empty()) {
      rest_value = ChiValue();
      rest_value.terms_[rest] = 1;
    }
    out = out + term * rest_value;
  }
  return out;
}

std::int64_t ChiValue::evaluate(const std::map<std::string, std::int64_t>& values) const {
  std::int64_t sum = 0;
  for (const auto& [m, c] : terms_) {
    std::int64_t t = c;
    for (const auto& n : m) {
      const auto it = values.find(n);
      if (it == values.end())
        throw Error(Errc::precondition, "no value for indeterminate '" + n + "'");
      t *= it->second;
    }
    sum += t;
  }
  return sum;
}

std::string ChiValue::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest degree first, constant last.
  std::vector<std::pair<Monomial, std::int64_t>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [m, c] : ordered) {
    std::int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (m.empty()) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << '*';
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "*" : "") << m[i];
  }
  return os.str();
}

ChiValue operator+(const ChiValue& a, const ChiValue& b) {
  ChiValue out = a;
  for (const auto& [m, c] : b.terms_) out.add(m, c);
  return out;
}

ChiValue operator-(const ChiValue& a) {
  ChiValue out;
  for (const auto& [m, c] : a.terms_) out.terms_[m] = -c;
  return out;
}

ChiValue operator-(const ChiValue& a, const ChiValue& b) { return a + (-b); }

ChiValue operator*(const ChiValue& a, const ChiValue& b) {
  ChiValue out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      ChiValue::Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      out.add(m, ca * cb);
    }
  }
  return out;
}

// SpaceExpr -----------------------------------------------------------------

struct SpaceExpr::Node {
  Kind kind;
  int n = 0;
  std::string name;
  std::optional<std::int64_t> chi;
  std::vector<SpaceExpr> children;

  explicit Node(Kind k, int dim = 0, std::string atom_name = {},
                std::optional<std::int64_t> atom_chi = {}, std::vector<SpaceExpr> parts = {})
      : kind(k), n(dim), name(std::move(atom_name)), chi(atom_chi), children(std::move(parts)) {}
};

namespace {
const std::vector<SpaceExpr> kNoChildren;
const std::string kNoName;
}  // namespace

SpaceExpr SpaceExpr::empty() { return SpaceExpr(std::make_shared<const Node>(Node(Kind::empty))); }

SpaceExpr SpaceExpr::point() { return SpaceExpr(std::make_shared<const Node>(Node(Kind::point))); }

SpaceExpr SpaceExpr::sphere(int n) {
  if (n < -1) throw Error(Errc::range, "sphere dimension must be >= -1");
  return SpaceExpr(std::make_shared<const Node>(Node(Kind::sphere, n)));
}

SpaceExpr SpaceExpr::disk(int n) {
  if (n < 0) throw Error(Errc::range, "disk dimension must be >= 0");
  return SpaceExpr(std::make_shared<const Node>(Node(Kind::disk, n)));
}

SpaceExpr SpaceExpr::atom(const std::string& name) {
  return SpaceExpr(std::make_shared<const Node>(Node(Kind::atom, 0, name)));
}

SpaceExpr SpaceExpr::atom(const std::string& name, std::int64_t chi) {
  return SpaceExpr(std::make_shared<const Node>(Node(Kind::atom, 0, name, chi)));
}

SpaceExpr SpaceExpr::product(std::vector<SpaceExpr> factors) {
  return SpaceExpr(
      std::make_shared<const Node>(Node(Kind::product, 0, {}, {}, std::move(factors))));
}

SpaceExpr SpaceExpr::disjoint_union(std::vector<SpaceExpr> parts) {
  return SpaceExpr(
      std::make_shared<const Node>(Node(Kind::disjoint_union, 0, {}, {}, std::move(parts))));
}

SpaceExpr SpaceExpr::glue(SpaceExpr a, SpaceExpr b, SpaceExpr along) {
  return SpaceExpr(std::make_shared<const Node>(
      Node{Kind::glue, 0, {}, {}, {std::move(a), std::move(b), std::move(along)}}));
}

SpaceExpr SpaceExpr::double_of(SpaceExpr f, SpaceExpr boundary) {
  return SpaceExpr(std::make_shared<const Node>(
      Node{Kind::double_of, 0, {}, {}, {std::move(f), std::move(boundary)}}));
}

SpaceExpr::Kind SpaceExpr::kind() const noexcept { return node_->kind; }
int SpaceExpr::dimension_index() const noexcept { return node_->n; }
const std::string& SpaceExpr::name() const noexcept {
  return node_->kind == Kind::atom ? node_->name : kNoName;
}
std::optional<std::int64_t> SpaceExpr::atom_chi() const noexcept { return node_->chi; }
const std::vector<SpaceExpr>& SpaceExpr::children() const noexcept {
  return node_ ? node_->children : kNoChildren;
}

std::string SpaceExpr::to_string() const {
  const auto list = [](const std::vector<SpaceExpr>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].to_string();
    return s;
  };
  switch (node_->kind) {
    case Kind::empty: return "empty";
    case Kind::point: return "pt";
    case Kind::sphere: return "S" + std::to_string(node_->n);
    case Kind::disk: return "D" + std::to_string(node_->n);
    case Kind::atom: return node_->name;
    case Kind::product: return "prod(" + list(node_->children) + ")";
    case Kind::disjoint_union: return "union(" + list(node_->children) + ")";
    case Kind::glue:
      return "glue(" + node_->children[0].to_string() + ", " + node_->children[1].to_string() +
             "; " + node_->children[2].to_string() + ")";
    case Kind::double_of:
      return "double(" + node_->children[0].to_string() + "; " + node_->children[1].to_string() +
             ")";
  }
  return "?";
}

ChiValue chi(const SpaceExpr& expr) {
  using Kind = SpaceExpr::Kind;
  const auto& c = expr.children();
  switch (expr.kind()) {
    case Kind::empty: return 0;
    case Kind::point: return 1;
    case Kind::sphere: {
      const int n = expr.dimension_index();
      if (n < 0) return 0;
      return n % 2 == 0 ? 2 : 0;
    }
    case Kind::disk: return 1;
    case Kind::atom: {
      if (const auto v = expr.atom_chi()) return *v;
      return ChiValue::indeterminate(expr.name());
    }
    case Kind::product: {
      ChiValue p(1);
      for (const auto& f : c) p = p * chi(f);
      return p;
    }
    case Kind::disjoint_union: {
      ChiValue s(0);
      for (const auto& part : c) s = s + chi(part);
      return s;
    }
    case Kind::glue: return chi(c[0]) + chi(c[1]) - chi(c[2]);
    case Kind::double_of: return ChiValue(2) * chi(c[0]) - chi(c[1]);
  }
  return 0;
}

SpaceExpr boundary_decomposition(int m, int k, int i) {
  if (!(m > k && k >= 2)) throw Error(Errc::hypothesis, "M>K>=2 violated");
  if (!(i >= 1 && i < k)) throw Error(Errc::range, "stage must satisfy 1 <= I < K");
  const auto bf = SpaceExpr::atom("bF");
  const auto f = SpaceExpr::atom("F");
  const auto s = SpaceExpr::sphere(k - i - 1);
  return SpaceExpr::glue(SpaceExpr::product({bf, SpaceExpr::disk(k - i)}),
                         SpaceExpr::product({f, s}), SpaceExpr::product({bf, s}));
}

SpaceExpr double_decomposition(int k, int i) {
  if (!(i >= 1 && i < k)) throw Error(Errc::range, "stage must satisfy 1 <= I < K");
  const std::string next = std::to_string(i + 1);
  const auto bf = SpaceExpr::atom("bF" + next);
  const auto f = SpaceExpr::atom("F" + next);
  return SpaceExpr::glue(SpaceExpr::product({bf, SpaceExpr::disk(1)}),
                         SpaceExpr::product({f, SpaceExpr::sphere(0)}),
                         SpaceExpr::product({bf, SpaceExpr::sphere(0)}));
}

SpaceExpr tube_sphere_decomposition(int m, int k, int i) {
  if (!(i >= 1 && i <= k && k < m)) throw Error(Errc::range, "stage must satisfy 1 <= I <= K < M");
  const std::string idx = std::to_string(i);
  const auto s = SpaceExpr::sphere(i - 1);
  return SpaceExpr::glue(SpaceExpr::product({SpaceExpr::atom("F" + idx), s}),
                         SpaceExpr::atom("L" + idx),
                         SpaceExpr::product({SpaceExpr::atom("bF" + idx), s}));
}

}  // namespace milnorkit
