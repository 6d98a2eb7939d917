#include <cmath>
#include <random>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/rips.hpp"
#include "oracles.hpp"

using namespace milnorkit;

namespace {

std::vector<std::vector<double>> rows(const PointCloud& c) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back(c.point(i).begin(), c.point(i).end());
  return out;
}

PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coords(n * dim);
  for (auto& v : coords) v = u(rng);
  return make_cloud(dim, coords);
}

}  // namespace

TEST_SUITE("rips") {
  TEST_CASE("two points") {
    const auto c = make_cloud(1, {0.0, 1.0});
    const auto near = rips_chi(c, 0.5, 0);
    CHECK(near.counts == std::vector<std::uint64_t>{2});
    CHECK(near.chi == 2);
    CHECK(near.components == 2);
    const auto far = rips_chi(c, 2.0, 0);
    CHECK(far.counts == std::vector<std::uint64_t>{2, 1});
    CHECK(far.chi == 1);
    CHECK(far.components == 1);
  }

  TEST_CASE("agrees with subset enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.1, 1.5);
    std::uniform_int_distribution<std::size_t> un(1, 14), ud(1, 3);
    for (int trial = 0; trial < 150; ++trial) {
      const auto c = random_cloud(rng, un(rng), ud(rng));
      const double r = ur(rng);
      const auto s = rips_chi(c, r, 1);
      const auto expected = oracle::power_set_counts(rows(c), r);
      CHECK(s.valid);
      CHECK(s.counts == expected);
      CHECK(s.chi == oracle::alternating_sum(expected));
      CHECK(s.chi == s.chi_from_counts());
    }
  }

  TEST_CASE("circle window complex") {
    // At three chord lengths each clique lies in a window of four
    // consecutive points: n * C(3, k) simplices of dimension k.
    const std::size_t n = 200;
    const auto c = make_cloud(2, oracle::circle(n));
    const double chord = 2.0 * std::sin(M_PI / n);
    const auto s = rips_chi(c, 3.0 * chord * (1 + 1e-9), 1);
    CHECK(s.counts == std::vector<std::uint64_t>{200, 600, 600, 200});
    CHECK(s.chi == 0);
    CHECK(s.components == 1);
  }

  TEST_CASE("edge count is monotone in the scale") {
    std::mt19937_64 rng(4);
    const auto c = random_cloud(rng, 60, 2);
    std::uint64_t prev = 0;
    for (double r = 0.05; r < 1.0; r += 0.05) {
      const auto e = edges_within(c, r);
      CHECK(e.size() >= prev);
      prev = e.size();
      for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i - 1].length <= e[i].length);
    }
  }

  TEST_CASE("budget exhaustion marks the complex invalid") {
    const auto c = make_cloud(2, oracle::circle(100));
    RipsOptions opts;
    opts.budget = 1;
    const auto s = rips_chi(c, 0.5, 1, opts);
    CHECK_FALSE(s.valid);
    CHECK(s.note == "clique budget exceeded");
  }

  TEST_CASE("thread count does not change the counts") {
    std::mt19937_64 rng(8);
    const auto c = random_cloud(rng, 300, 3);
    const auto one = rips_chi(c, 0.4, 2);
    for (unsigned t : {2u, 3u, 5u}) {
      RipsOptions opts;
      opts.threads = t;
      const auto many = rips_chi(c, 0.4, 2, opts);
      CHECK(many.counts == one.counts);
      CHECK(many.chi == one.chi);
    }
  }

  TEST_CASE("truncation caps the clique size") {
    const auto c = make_cloud(1, {0.0, 0.1, 0.2, 0.3});
    RipsOptions opts;
    opts.truncate_to_dim = true;
    const auto s = rips_chi(c, 1.0, 1, opts);
    CHECK(s.counts == std::vector<std::uint64_t>{4, 6});
    const auto full = rips_chi(c, 1.0, 1);
    CHECK(full.counts == std::vector<std::uint64_t>{4, 6, 4, 1});
    CHECK(full.chi == 1);
  }

  TEST_CASE("components and errors") {
    const std::vector<Edge> e{{0, 1, 1.0}, {2, 3, 1.0}};
    CHECK(count_components(5, e) == 3);
    CHECK(count_components(0, {}) == 0);
    const auto c = make_cloud(1, {0.0, 1.0});
    CHECK_THROWS_AS(rips_chi(c, 0.0, 0), Error);
    const std::vector<Edge> bad{{0, 7, 1.0}};
    CHECK_THROWS_AS(clique_complex_stats(2, bad, 0), Error);
  }
}
