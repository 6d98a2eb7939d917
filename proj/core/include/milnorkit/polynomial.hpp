#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace milnorkit {

using Rational = boost::multiprecision::cpp_rational;
using Exponents = std::vector<std::uint32_t>;

struct Term {
  Rational coefficient;
  Exponents exponents;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted by exponent vector (lexicographic), with no
/// repeated exponent vectors and no zero coefficients. A binary64 copy of
/// each coefficient is cached for fast evaluation.
class Polynomial {
 public:
  explicit Polynomial(std::size_t num_vars = 0);
  Polynomial(std::size_t num_vars, std::vector<Term> terms);

  static Polynomial constant(std::size_t num_vars, const Rational& value);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::uint32_t degree() const noexcept;
  Rational constant_term() const;

  Polynomial derivative(std::size_t var) const;
  Polynomial pow(std::uint32_t exponent) const;

  /// Sum of c * prod x_j^e_j over terms, computed term by term in binary64.
  double evaluate(std::span<const double> x) const;

  /// Renders with the given variable names, e.g. "x1*x3 - x2*x4".
  std::string to_string(std::span<const std::string> names) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void normalize();
  void refresh_cache();

  std::size_t num_vars_ = 0;
  std::vector<Term> terms_;
  std::vector<double> coeff_cache_;
};

/// Variable names used when none are supplied: x1, x2, ...
std::vector<std::string> default_variable_names(std::size_t num_vars);

}  // namespace milnorkit
