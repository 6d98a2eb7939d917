#include <cmath>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/germ_parser.hpp"
#include "milnorkit/tameness.hpp"

using namespace milnorkit;

TEST_SUITE("tameness") {
  TEST_CASE("submersions have no hits") {
    const auto r = Radii::from_epsilon(0.5);
    const auto lin = parse_germ("source_dim: 3\ncomponents: [\"x1\", \"x2\"]\n");
    const auto rep = tameness_evidence(lin, r, 100, 1);
    CHECK(rep.starts == 100);
    CHECK_FALSE(rep.has_hits());
    CHECK(rep.min_relative_sv_df > 0.5);
    CHECK(rep.inclusion.violations == 0);
  }

  TEST_CASE("zw is singular only at the origin") {
    const auto zw = parse_germ("source_dim: 4\ncomponents: [\"x1*x3 - x2*x4\", \"x1*x4 + x2*x3\"]\n");
    const auto rep = tameness_evidence(zw, Radii::from_epsilon(0.5), 100, 2);
    CHECK_FALSE(rep.has_hits());
    CHECK(rep.inclusion.violations == 0);
  }

  TEST_CASE("singular axis off the zero set is found") {
    // df drops rank exactly on y = z = 0, where f = (x, 0) != 0.
    const auto f = parse_germ("source_dim: 3\ncomponents: [\"x1\", \"x2^2 + x3^2\"]\n");
    const auto r = Radii::from_epsilon(0.5);
    const auto rep = tameness_evidence(f, r, 100, 3);
    REQUIRE(rep.has_hits());
    CHECK(rep.hits.size() >= 50);
    for (const auto& h : rep.hits) {
      CHECK(h.norm >= r.epsilon / 10 * (1 - 1e-9));
      CHECK(h.norm <= r.epsilon * (1 + 1e-9));
      CHECK(std::hypot(h.point[1], h.point[2]) < 1e-4);
      CHECK(h.value_norm > 1e-8);
    }
    CHECK(rep.min_hit_norm <= rep.max_hit_norm);
  }

  TEST_CASE("ramified germ: singular set inside the zero set") {
    const auto f = parse_germ("source_dim: 3\ncomponents: [\"x1^2 - x2^2\", \"2*x1*x2\"]\n");
    const auto rep = tameness_evidence(f, Radii::from_epsilon(0.5), 100, 4);
    CHECK_FALSE(rep.has_hits());
    CHECK(rep.inclusion.points == 100);
    CHECK(rep.inclusion.violations == 0);
  }

  TEST_CASE("too few starts") {
    const auto lin = parse_germ("source_dim: 3\ncomponents: [\"x1\", \"x2\"]\n");
    try {
      tameness_evidence(lin, Radii::from_epsilon(0.5), 99, 1);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::precondition);
    }
  }
}
