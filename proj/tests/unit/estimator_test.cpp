#include <cmath>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/estimator.hpp"
#include "milnorkit/germ_parser.hpp"
#include "oracles.hpp"

using namespace milnorkit;

namespace {

ComplexStats stat(double scale, std::int64_t chi, bool valid = true) {
  ComplexStats s;
  s.scale = scale;
  s.chi = chi;
  s.valid = valid;
  return s;
}

}  // namespace

TEST_SUITE("euler_estimator") {
  TEST_CASE("geometric ladders") {
    const auto s = geometric_scales(0.1, 10.0, 5);
    REQUIRE(s.size() == 5);
    CHECK(s.front() == 0.1);
    CHECK(s.back() == 10.0);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] / s[i - 1] == doctest::Approx(std::sqrt(10.0)));
    CHECK_THROWS_AS(geometric_scales(0.0, 1.0, 3), Error);

    LadderSpec spec;
    const auto l = make_ladder(spec, 0.01);
    CHECK(l.size() == 40);
    CHECK(l.front() == doctest::Approx(0.02));
    CHECK(l.back() == doctest::Approx(0.3));
    spec.max_scale = 0.1;
    CHECK(make_ladder(spec, 0.01).back() == doctest::Approx(0.1));
    // Spacing above the cap: span [cap/15, cap].
    CHECK(make_ladder(spec, 1.0).front() == doctest::Approx(0.1 / 15.0));
  }

  TEST_CASE("plateau search prefers the longest run, then smaller scales") {
    std::vector<ComplexStats> scan;
    for (std::int64_t c : {3, 1, 1, 1, 2, 2, 2, 5}) scan.push_back(stat(0.1 * (scan.size() + 1), c));
    auto p = find_plateau(scan);
    REQUIRE(p);
    CHECK(p->length == 3);
    CHECK(p->first == 1);
    CHECK(p->r_min == doctest::Approx(0.2));
    CHECK(p->r_max == doctest::Approx(0.4));

    scan[2].valid = false;  // breaks the first run
    p = find_plateau(scan);
    CHECK(p->first == 4);
    CHECK_FALSE(find_plateau({stat(1.0, 0, false)}));
  }

  TEST_CASE("four collinear points give no plateau of five") {
    // Points 0,1,3,6: chi is 4, 3, 2, 1 on [0.5,1), [1,2), [2,3), [3,4).
    const auto c = make_cloud(1, {0.0, 1.0, 3.0, 6.0});
    const std::vector<double> scales{0.5, 0.6, 0.7, 0.8, 1.0, 1.2, 1.5, 1.8,
                                     2.0, 2.3, 2.6, 2.9, 3.0, 3.4, 3.8};
    const auto e = chi_scan(c, 0, scales);
    std::vector<std::int64_t> chis;
    for (const auto& s : e.scan) chis.push_back(s.chi);
    CHECK(chis == std::vector<std::int64_t>{4, 4, 4, 4, 3, 3, 3, 3, 2, 2, 2, 2, 1, 1, 1});
    CHECK(e.confidence == Confidence::unstable);
    CHECK(e.plateau.length == 4);
    CHECK(e.chi == 4);
    CHECK_THROWS_AS(chi_scan(c, 0, std::vector<double>{1.0, 0.5}), Error);
  }

  TEST_CASE("sampled circle is stable with chi 0") {
    const auto e = estimate_chi(make_cloud(2, oracle::circle(200)), 1);
    CHECK(e.confidence == Confidence::stable);
    CHECK(e.chi == 0);
    CHECK(e.components == 1);
    CHECK(e.subsample_chi == std::vector<std::int64_t>{0, 0, 0});
  }

  TEST_CASE("two exact points are stable with chi 2") {
    const double z = std::sqrt(0.25 - 0.025 * 0.025);
    const auto c = make_cloud(3, {0.025, 0.0, z, 0.025, 0.0, -z});
    EstimatorOptions opts;
    opts.ladder.max_scale = 0.25;
    const auto e = estimate_chi(c, 0, opts);
    CHECK(e.confidence == Confidence::stable);
    CHECK(e.chi == 2);
    CHECK(e.components == 2);
  }

  TEST_CASE("no-edge scales are not counted for positive dimension") {
    const auto c = make_cloud(2, oracle::circle(50));
    const auto e = chi_scan(c, 1, std::vector<double>{0.01, 0.02, 0.03});
    for (const auto& s : e.scan) CHECK_FALSE(s.valid);
    CHECK(e.confidence == Confidence::unstable);
  }

  TEST_CASE("farthest point net") {
    const auto c = make_cloud(1, {0.0, 0.1, 0.2, 1.0, 0.5});
    const auto idx = farthest_point_indices(c, 3);
    CHECK(idx == std::vector<std::size_t>{0, 3, 4});
    CHECK(mean_nearest_neighbor(make_cloud(1, {0.0, 1.0, 3.0})) == doctest::Approx(4.0 / 3.0));
    CHECK(default_net_size(0) == 200);
    CHECK(default_net_size(2) == 1000);
    CHECK(default_sample_count(1) == 4000);
  }

  TEST_CASE("target dimensions") {
    const auto f = parse_germ("source_dim: 5\ncomponents: [\"x1\", \"x2\", \"x3\"]\n");
    CHECK(target_dimension(f, 1, TargetKind::fiber) == 4);
    CHECK(target_dimension(f, 2, TargetKind::boundary) == 2);
    CHECK(target_dimension(f, 3, TargetKind::link) == 1);
    CHECK(target_dimension(f, 1, TargetKind::page) == 2);
  }

  TEST_CASE("linear germ boundaries") {
    const auto f = parse_germ("source_dim: 3\ncomponents: [\"x1\", \"x2\"]\n");
    StageParams p;
    p.radii = Radii::from_epsilon(0.5);
    p.seed = 3;
    const auto b1 = estimate_stage(f, 1, TargetKind::boundary, p);
    CHECK(b1.dimension == 1);
    CHECK(b1.estimate.confidence == Confidence::stable);
    CHECK(b1.estimate.chi == 0);
    const auto b2 = estimate_stage(f, 2, TargetKind::boundary, p);
    CHECK(b2.dimension == 0);
    CHECK(b2.estimate.confidence == Confidence::stable);
    CHECK(b2.estimate.chi == 2);
    CHECK_THROWS_AS(estimate_stage(f, 3, TargetKind::fiber, p), Error);
  }

  TEST_CASE("zw fiber is an annulus") {
    const auto f = parse_germ("source_dim: 4\ncomponents: [\"x1*x3 - x2*x4\", \"x1*x4 + x2*x3\"]\n");
    StageParams p;
    p.radii = Radii::from_epsilon(0.5);
    p.seed = 11;
    const auto e = estimate_stage(f, 2, TargetKind::fiber, p);
    CHECK(e.estimate.confidence == Confidence::stable);
    CHECK(e.estimate.chi == 0);
    CHECK(e.estimate.components == 1);
  }

  TEST_CASE("empty link counts as chi 0") {
    const auto f = parse_germ("source_dim: 3\ncomponents: [\"x1^2 + x2^2 + x3^2\", \"x1\"]\n");
    StageParams p;
    p.radii = Radii::from_epsilon(0.5);
    p.samples = 200;
    const auto e = estimate_stage(f, 1, TargetKind::link, p);
    CHECK(e.cloud.empty());
    CHECK(e.estimate.chi == 0);
    CHECK(e.estimate.confidence == Confidence::stable);
    CHECK(e.note.find("empty link") != std::string::npos);
  }
}
