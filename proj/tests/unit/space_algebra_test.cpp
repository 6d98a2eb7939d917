#include <map>
#include <random>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/space_algebra.hpp"

using namespace milnorkit;

namespace {

// Reference evaluator for random trees: a plain integer recursion that
// mirrors the tree shape, independent of ChiValue.
struct Tree {
  SpaceExpr expr;
  std::int64_t value;
};

std::int64_t sphere_value(int n) { return n < 0 ? 0 : (n % 2 == 0 ? 2 : 0); }

Tree random_tree(std::mt19937_64& rng, int depth, const std::map<std::string, std::int64_t>& atoms) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 8);
  std::uniform_int_distribution<int> dim(-1, 5);
  switch (pick(rng)) {
    case 0: return {SpaceExpr::empty(), 0};
    case 1: return {SpaceExpr::point(), 1};
    case 2: {
      const int n = dim(rng);
      return {SpaceExpr::sphere(n), sphere_value(n)};
    }
    case 3: return {SpaceExpr::disk(std::max(0, dim(rng))), 1};
    case 4: {
      auto it = atoms.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng));
      return {SpaceExpr::atom(it->first), it->second};
    }
    case 5:
    case 6: {
      const auto a = random_tree(rng, depth - 1, atoms);
      const auto b = random_tree(rng, depth - 1, atoms);
      return {SpaceExpr::product({a.expr, b.expr}), a.value * b.value};
    }
    case 7: {
      const auto a = random_tree(rng, depth - 1, atoms);
      const auto b = random_tree(rng, depth - 1, atoms);
      return {SpaceExpr::disjoint_union({a.expr, b.expr}), a.value + b.value};
    }
    default: {
      const auto a = random_tree(rng, depth - 1, atoms);
      const auto b = random_tree(rng, depth - 1, atoms);
      const auto c = random_tree(rng, depth - 1, atoms);
      return {SpaceExpr::glue(a.expr, b.expr, c.expr), a.value + b.value - c.value};
    }
  }
}

}  // namespace

TEST_SUITE("space_algebra") {
  TEST_CASE("primitive values") {
    CHECK(chi(SpaceExpr::empty()) == ChiValue(0));
    CHECK(chi(SpaceExpr::point()) == ChiValue(1));
    CHECK(chi(SpaceExpr::sphere(0)) == ChiValue(2));
    CHECK(chi(SpaceExpr::sphere(-1)) == ChiValue(0));
    CHECK(chi(SpaceExpr::sphere(1)) == ChiValue(0));
    CHECK(chi(SpaceExpr::sphere(4)) == ChiValue(2));
    CHECK(chi(SpaceExpr::disk(0)) == ChiValue(1));
    CHECK(chi(SpaceExpr::disk(7)) == ChiValue(1));
    CHECK(chi(SpaceExpr::atom("X", -3)) == ChiValue(-3));
    CHECK_THROWS_AS(SpaceExpr::sphere(-2), Error);
    CHECK_THROWS_AS(SpaceExpr::disk(-1), Error);
  }

  TEST_CASE("double of a manifold with boundary") {
    const auto d = chi(SpaceExpr::double_of(SpaceExpr::atom("F"), SpaceExpr::atom("bF")));
    CHECK(d.coefficient("F") == 2);
    CHECK(d.coefficient("bF") == -1);
    CHECK(d.constant() == 0);
    CHECK(d.degree() == 1);
  }

  TEST_CASE("double parity") {
    for (std::int64_t f = -6; f <= 6; ++f)
      for (std::int64_t b = -6; b <= 6; ++b) {
        const auto v = chi(SpaceExpr::double_of(SpaceExpr::atom("F", f), SpaceExpr::atom("bF", b)))
                           .evaluate({});
        if (b % 2 == 0) CHECK(v % 2 == 0);
        if (2 * f == b) CHECK(v == 0);
      }
  }

  TEST_CASE("boundary decomposition examples") {
    const auto e = boundary_decomposition(3, 2, 1);
    CHECK(e.to_string() == "glue(prod(bF,D1), prod(F,S0); prod(bF,S0))");
    const auto v = chi(e);  // bF + 2F - 2bF
    CHECK(v.coefficient("F") == 2);
    CHECK(v.coefficient("bF") == -1);

    const auto w = chi(boundary_decomposition(5, 3, 1));  // D2, S1: only bF survives
    CHECK(w == ChiValue::indeterminate("bF"));
    CHECK(boundary_decomposition(5, 3, 2).to_string() == e.to_string());
    CHECK_THROWS_AS(boundary_decomposition(3, 2, 2), Error);
    CHECK_THROWS_AS(boundary_decomposition(2, 2, 1), Error);
  }

  TEST_CASE("double decomposition is the double of the next stage") {
    for (int k = 2; k <= 6; ++k)
      for (int i = 1; i < k; ++i) {
        const auto v = chi(double_decomposition(k, i));
        const std::string n = std::to_string(i + 1);
        CHECK(v == ChiValue::indeterminate("F" + n) * ChiValue(2) - ChiValue::indeterminate("bF" + n));
        CHECK(v.evaluate({{"F" + n, 3}, {"bF" + n, 0}}) == 6);
        CHECK(v.evaluate({{"F" + n, 1}, {"bF" + n, 2}}) == 0);
      }
    CHECK_THROWS_AS(double_decomposition(2, 2), Error);
  }

  TEST_CASE("tube and link split of the sphere, symbolic") {
    // chi = chi(F_I) chi(S^{I-1}) + chi(L_I) - chi(dF_I) chi(S^{I-1})
    for (int i = 1; i <= 4; ++i) {
      const auto v = chi(tube_sphere_decomposition(6, 4, i));
      const std::string n = std::to_string(i);
      const std::int64_t s = sphere_value(i - 1);
      CHECK(v.coefficient("F" + n) == s);
      CHECK(v.coefficient("L" + n) == 1);
      CHECK(v.coefficient("bF" + n) == -s);
    }
    CHECK_THROWS_AS(tube_sphere_decomposition(3, 3, 1), Error);
  }

  TEST_CASE("sphere and disk ladder") {
    for (int n = 0; n <= 20; ++n) {
      CHECK((chi(SpaceExpr::sphere(n)) + chi(SpaceExpr::sphere(n + 1))) == ChiValue(2));
      CHECK(chi(SpaceExpr::glue(SpaceExpr::disk(n), SpaceExpr::disk(n), SpaceExpr::sphere(n - 1))) ==
            chi(SpaceExpr::sphere(n)));
    }
  }

  TEST_CASE("chi is a semiring morphism on random trees") {
    const std::map<std::string, std::int64_t> atoms{{"F", 3}, {"bF", -2}, {"G", 0}, {"H", 5}};
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto t = random_tree(rng, 6, atoms);
      CHECK(chi(t.expr).evaluate(atoms) == t.value);
      const auto u = random_tree(rng, 3, atoms);
      CHECK(chi(SpaceExpr::product({t.expr, u.expr})) == chi(t.expr) * chi(u.expr));
      CHECK(chi(SpaceExpr::disjoint_union({t.expr, u.expr})) == chi(t.expr) + chi(u.expr));
    }
  }

  TEST_CASE("ChiValue arithmetic and substitution") {
    const auto f = ChiValue::indeterminate("F");
    const auto v = f * ChiValue(2) - ChiValue(1);
    CHECK(v.to_string() == "2*F - 1");
    CHECK(v.substitute("F", ChiValue(4)) == ChiValue(7));
    CHECK(v.evaluate({{"F", -3}}) == -7);
    CHECK_THROWS(v.evaluate({}));
    CHECK((f * f).degree() == 2);
    CHECK((v - v).is_constant());
  }

  TEST_CASE("printer covers every node kind") {
    const auto e = SpaceExpr::disjoint_union(
        {SpaceExpr::point(), SpaceExpr::empty(),
         SpaceExpr::double_of(SpaceExpr::atom("F"), SpaceExpr::atom("bF"))});
    const auto s = e.to_string();
    CHECK(s.find("double(") != std::string::npos);
    CHECK(s.find("union(") != std::string::npos);
  }
}
