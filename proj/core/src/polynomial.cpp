#include "milnorkit/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "milnorkit/error.hpp"

namespace milnorkit {

namespace {

bool exponents_less(const Exponents& a, const Exponents& b) {
  // Higher total degree first, then lexicographically descending, so that
  // printing reads like "x^2 + x*y + y".
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da > db;
  return a > b;
}

}  // namespace

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  refresh_cache();
}

Polynomial::Polynomial(std::size_t num_vars, std::vector<Term> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != num_vars_)
      throw Error(Errc::dimension, "term exponent vector has length " +
                                       std::to_string(t.exponents.size()) +
                                       ", expected " + std::to_string(num_vars_));
  }
  normalize();
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& value) {
  return Polynomial(num_vars, {Term{value, Exponents(num_vars, 0)}});
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars)
    throw Error(Errc::dimension, "variable index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return Polynomial(num_vars, {Term{Rational(1), std::move(e)}});
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return exponents_less(a.exponents, b.exponents); });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coefficient == 0; });
  terms_ = std::move(merged);
  refresh_cache();
}

void Polynomial::refresh_cache() {
  coeff_cache_.clear();
  coeff_cache_.reserve(terms_.size());
  for (const auto& t : terms_) coeff_cache_.push_back(static_cast<double>(t.coefficient));
}

std::uint32_t Polynomial::degree() const noexcept {
  std::uint32_t d = 0;
  for (const auto& t : terms_) {
    std::uint32_t s = 0;
    for (auto e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

Rational Polynomial::constant_term() const {
  for (const auto& t : terms_) {
    if (std::all_of(t.exponents.begin(), t.exponents.end(), [](auto e) { return e == 0; }))
      return t.coefficient;
  }
  return Rational(0);
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= num_vars_) throw Error(Errc::dimension, "derivative variable out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Term d{t.coefficient * t.exponents[var], t.exponents};
    d.exponents[var] -= 1;
    out.push_back(std::move(d));
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::pow(std::uint32_t exponent) const {
  Polynomial result = constant(num_vars_, Rational(1));
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != num_vars_)
    throw Error(Errc::dimension, "evaluate: point has " + std::to_string(x.size()) +
                                     " coordinates, polynomial has " +
                                     std::to_string(num_vars_) + " variables");
  double sum = 0.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    double m = coeff_cache_[k];
    const auto& e = terms_[k].exponents;
    for (std::size_t j = 0; j < num_vars_; ++j) {
      for (std::uint32_t p = 0; p < e[j]; ++p) m *= x[j];
    }
    sum += m;
  }
  return sum;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  assert(names.size() == num_vars_);
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coefficient;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;

    bool has_vars = false;
    std::ostringstream mono;
    for (std::size_t j = 0; j < num_vars_; ++j) {
      if (t.exponents[j] == 0) continue;
      if (has_vars) mono << '*';
      mono << names[j];
      if (t.exponents[j] > 1) mono << '^' << t.exponents[j];
      has_vars = true;
    }
    if (!has_vars) {
      os << c.str();
    } else if (c == 1) {
      os << mono.str();
    } else {
      os << c.str() << '*' << mono.str();
    }
  }
  return os.str();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw Error(Errc::dimension, "polynomial variable count mismatch");
  std::vector<Term> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(a.num_vars_, std::move(terms));
}

Polynomial operator-(const Polynomial& a) {
  std::vector<Term> terms = a.terms_;
  for (auto& t : terms) t.coefficient = -t.coefficient;
  return Polynomial(a.num_vars_, std::move(terms));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw Error(Errc::dimension, "polynomial variable count mismatch");
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Term t{ta.coefficient * tb.coefficient, ta.exponents};
      for (std::size_t j = 0; j < a.num_vars_; ++j) t.exponents[j] += tb.exponents[j];
      terms.push_back(std::move(t));
    }
  }
  return Polynomial(a.num_vars_, std::move(terms));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].exponents != b.terms_[k].exponents ||
        a.terms_[k].coefficient != b.terms_[k].coefficient)
      return false;
  }
  return true;
}

std::vector<std::string> default_variable_names(std::size_t num_vars) {
  std::vector<std::string> names;
  names.reserve(num_vars);
  for (std::size_t j = 0; j < num_vars; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

}  // namespace milnorkit
