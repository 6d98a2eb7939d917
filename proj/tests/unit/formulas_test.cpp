#include <cstdint>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/formulas.hpp"

using namespace milnorkit;

namespace {

// Reference values computed with plain integer arithmetic from sphere counts.
std::int64_t ref_sphere(int n) { return n < 0 ? 0 : (n % 2 == 0 ? 2 : 0); }
std::int64_t sign(int e) { return e % 2 == 0 ? 1 : -1; }
std::int64_t ref_boundary(int m, int i, std::int64_t chi_f) { return chi_f * ref_sphere(m - i - 1); }
std::int64_t ref_link(int m, int i, std::int64_t chi_f) {
  return ref_sphere(m - 1) + sign(m - i - 1) * chi_f * ref_sphere(i - 1);
}

template <class F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io;
}

}  // namespace

TEST_SUITE("formula_engine") {
  TEST_CASE("sphere values") {
    CHECK(sphere_chi(-1) == 0);
    CHECK(sphere_chi(0) == 2);
    CHECK(sphere_chi(1) == 0);
    CHECK(sphere_chi(2) == 2);
    CHECK(sphere_chi(11) == 0);
  }

  TEST_CASE("linear germ R^3 -> R^2 by hand") {
    // Fiber is a segment, dF_1 is a disk's boundary pair, L_1 = S^1 cut by a plane.
    CHECK(chi_boundary(3, 2, 1, 1) == 0);
    CHECK(chi_boundary(3, 2, 2, 1) == 2);
    CHECK(chi_link(3, 2, 1, 1) == 0);
    CHECK(chi_link(3, 2, 2, 1) == 2);
    CHECK(db_invariant(3, 2, 1) == 0);
    CHECK(chi_boundary_f(3, 2, 1) == 2);
    CHECK(chi_boundary_f(4, 2, 7) == 0);
    CHECK(chi_boundary_f(5, 2, 3) == 6);
  }

  TEST_CASE("closed forms agree with the reference over a grid") {
    for (int k = 2; k <= 8; ++k)
      for (int m = k + 1; m <= 10; ++m)
        for (std::int64_t c = -4; c <= 4; ++c) {
          for (int i = 1; i <= k; ++i) {
            CHECK(chi_boundary(m, k, i, c) == ref_boundary(m, i, c));
            CHECK(chi_boundary_parity_form(m, k, i, c) == ref_boundary(m, i, c));
            CHECK(chi_link(m, k, i, c) == ref_link(m, i, c));
            CHECK(chi_link_sphere_route(m, k, i, c) == ref_link(m, i, c));
          }
          for (int i = 1; i < k; ++i) {
            CHECK(le_greuel_boundary(m, k, i, c) == 2 * sign(m - i) * c);
            CHECK(le_greuel_link(m, k, i, c) == 2 * sign(m - i) * c);
          }
          CHECK(db_invariant(m, k, c) == ref_boundary(m, 1, c) - ref_link(m, 1, c));
          CHECK(chi_boundary_f(m, k, c) == ref_boundary(m, k, c));
        }
  }

  TEST_CASE("hypothesis and range errors") {
    CHECK(code_of([] { chi_boundary(2, 2, 1, 1); }) == Errc::hypothesis);
    CHECK(code_of([] { chi_boundary(3, 1, 1, 1); }) == Errc::hypothesis);
    CHECK(code_of([] { chi_link(3, 2, 0, 1); }) == Errc::range);
    CHECK(code_of([] { chi_link(3, 2, 3, 1); }) == Errc::range);
    CHECK(code_of([] { le_greuel_boundary(5, 3, 3, 1); }) == Errc::range);
    CHECK(code_of([] { build_stage_report(3, 3, 1); }) == Errc::hypothesis);
  }

  TEST_CASE("odd-M boundary/link equality") {
    for (int k = 2; k <= 6; ++k)
      for (int m = k + 1; m <= 11; m += 1) {
        if (m % 2 == 0) continue;
        for (std::int64_t c = -3; c <= 3; ++c)
          for (int i = 2; i <= k; ++i) {
            const bool equal = ref_boundary(m, i, c) == ref_link(m, i, c);
            CHECK(carac2_predicate(m, k, i, c) == equal);
            CHECK(equal == (c == 1));
          }
      }
    CHECK(code_of([] { carac2_predicate(4, 2, 2, 1); }) == Errc::hypothesis);
    CHECK(code_of([] { carac2_predicate(5, 2, 1, 1); }) == Errc::hypothesis);
  }

  TEST_CASE("even M: boundary minus link is DB at every stage") {
    for (int m = 4; m <= 10; m += 2)
      for (std::int64_t c = -3; c <= 3; ++c) {
        const auto r = build_stage_report(m, 2, c);
        CHECK(r.parity == ParityClass::even_m);
        for (const auto& row : r.stages) CHECK(row.boundary_minus_link() == r.db);
      }
  }

  TEST_CASE("stage report rows") {
    const auto r = build_stage_report(3, 2, 1);
    REQUIRE(r.stages.size() == 2);
    CHECK(r.at(1) == StageRow{1, 1, 0, 0});
    CHECK(r.at(2) == StageRow{2, 1, 2, 2});
    CHECK(r.db == 0);
    CHECK(r.parity == ParityClass::odd_m);
    CHECK(to_string(r.parity) == "odd-M");

    const auto s = build_stage_report(6, 4, -2);
    for (int i = 1; i <= 4; ++i) {
      CHECK(s.at(i).chi_fiber == -2);
      CHECK(s.at(i).chi_boundary == ref_boundary(6, i, -2));
      CHECK(s.at(i).chi_link == ref_link(6, i, -2));
    }
    // period two
    CHECK(s.at(1).chi_boundary == s.at(3).chi_boundary);
    CHECK(s.at(2).chi_link == s.at(4).chi_link);
  }

  TEST_CASE("isolated point consistency") {
    CHECK(isolated_point_consistent(3, 2, 1));
    CHECK_FALSE(isolated_point_consistent(3, 2, 0));
    CHECK_FALSE(isolated_point_consistent(5, 3, 2));
    CHECK(isolated_point_consistent(4, 2, 0));
  }
}
