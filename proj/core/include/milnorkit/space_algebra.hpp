#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace milnorkit {

/// Integer polynomial in named indeterminates such as "F" (chi of the Milnor
/// fiber) or "bF" (chi of its boundary). Monomials are multisets of names.
class ChiValue {
 public:
  using Monomial = std::vector<std::string>;  // sorted; empty = constant

  ChiValue(std::int64_t constant = 0);  // NOLINT(google-explicit-constructor)
  static ChiValue indeterminate(const std::string& name);

  bool is_constant() const noexcept;
  /// Constant coefficient (the value when every indeterminate is 0).
  std::int64_t constant() const noexcept;
  /// Coefficient of the degree-one monomial `name`.
  std::int64_t coefficient(const std::string& name) const noexcept;
  std::size_t degree() const noexcept;
  const std::map<Monomial, std::int64_t>& terms() const noexcept { return terms_; }

  /// Replaces `name` by `value` everywhere.
  ChiValue substitute(const std::string& name, const ChiValue& value) const;
  /// Full specialization; throws if an indeterminate has no value.
  std::int64_t evaluate(const std::map<std::string, std::int64_t>& values) const;

  /// e.g. "2*F - bF + 1".
  std::string to_string() const;

  friend ChiValue operator+(const ChiValue& a, const ChiValue& b);
  friend ChiValue operator-(const ChiValue& a, const ChiValue& b);
  friend ChiValue operator*(const ChiValue& a, const ChiValue& b);
  friend ChiValue operator-(const ChiValue& a);
  friend bool operator==(const ChiValue& a, const ChiValue& b) { return a.terms_ == b.terms_; }

 private:
  void add(const Monomial& m, std::int64_t c);

  std::map<Monomial, std::int64_t> terms_;
};

/// Immutable expression tree for spaces assembled from spheres, disks and
/// named atoms. Glue(A, B, C) means A and B glued along C.
class SpaceExpr {
 public:
  enum class Kind { empty, point, sphere, disk, atom, product, disjoint_union, glue, double_of };

  static SpaceExpr empty();
  static SpaceExpr point();
  static SpaceExpr sphere(int n);  // n >= -1; S^-1 is the empty set
  static SpaceExpr disk(int n);    // n >= 0
  static SpaceExpr atom(const std::string& name);  // symbolic chi named after the atom
  static SpaceExpr atom(const std::string& name, std::int64_t chi);
  static SpaceExpr product(std::vector<SpaceExpr> factors);
  static SpaceExpr disjoint_union(std::vector<SpaceExpr> parts);
  static SpaceExpr glue(SpaceExpr a, SpaceExpr b, SpaceExpr along);
  static SpaceExpr double_of(SpaceExpr f, SpaceExpr boundary);

  Kind kind() const noexcept;
  int dimension_index() const noexcept;  // n for spheres and disks
  const std::string& name() const noexcept;
  std::optional<std::int64_t> atom_chi() const noexcept;
  const std::vector<SpaceExpr>& children() const noexcept;

  /// Stable text form, e.g. "glue(prod(bF,D1), prod(F,S0); prod(bF,S0))".
  std::string to_string() const;

 private:
  struct Node;
  explicit SpaceExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Additive, multiplicative Euler characteristic; Glue uses
/// inclusion-exclusion and Double(F, dF) gives 2 chi(F) - chi(dF).
ChiValue chi(const SpaceExpr& expr);

/// Sphere-side boundary of the stage-I fiber:
/// glue(prod(bF, D^{K-I}), prod(F, S^{K-I-1}); prod(bF, S^{K-I-1})).
/// Requires M > K >= 2 and 1 <= I < K.
SpaceExpr boundary_decomposition(int m, int k, int i);

/// Double construction of the stage-I boundary from stage I+1:
/// glue(prod(bF<I+1>, D1), prod(F<I+1>, S0); prod(bF<I+1>, S0)).
/// Requires 1 <= I < K.
SpaceExpr double_decomposition(int k, int i);

/// Sphere S^{M-1} split into the Milnor tube of f_I and a neighbourhood of
/// the link: glue(prod(F<I>, S^{I-1}), L<I>; prod(bF<I>, S^{I-1})).
/// Requires 1 <= I <= K < M.
SpaceExpr tube_sphere_decomposition(int m, int k, int i);

}  // namespace milnorkit
