#include <sstream>

#include "doctest.h"
#include "milnorkit/error.hpp"
#include "milnorkit/point_cloud.hpp"

using namespace milnorkit;

TEST_SUITE("point_cloud") {
  TEST_CASE("radii from epsilon and validation") {
    const auto r = Radii::from_epsilon(0.5);
    CHECK(r.eta == doctest::Approx(0.025));
    CHECK(r.tau == doctest::Approx(0.0025));
    CHECK_NOTHROW(r.validate());
    CHECK_THROWS_AS((Radii{0.5, 0.1, 0.001}.validate()), Error);  // eta > eps/10
    CHECK_THROWS_AS((Radii{0.5, 0.02, 0.01}.validate()), Error);  // tau > eta/10
    CHECK_THROWS_AS((Radii{0.0, 0.0, 0.0}.validate()), Error);
  }

  TEST_CASE("target kind names") {
    for (auto k : {TargetKind::fiber, TargetKind::boundary, TargetKind::link, TargetKind::page})
      CHECK(parse_target_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_target_kind("ribbon"), Error);
  }

  TEST_CASE("binary round trip is exact") {
    PointCloud c = make_cloud(3, {0.1, -0.2, 1.0 / 3.0, 4e-300, 5.5, -0.0});
    c.kind = TargetKind::link;
    c.stage = 2;
    c.seed = 0xdeadbeefcafeULL;
    c.radii = Radii::from_epsilon(0.25);
    c.regular_value = {0.0125, -1e-9};
    c.residual_equations = 1e-12;
    c.residual_sphere = 2e-13;
    std::stringstream buf;
    write_point_cloud_binary(buf, c);
    const auto d = read_point_cloud_binary(buf);
    CHECK(d.dim == 3);
    CHECK(d.size() == 2);
    CHECK(d.coords == c.coords);
    CHECK(d.kind == TargetKind::link);
    CHECK(d.stage == 2);
    CHECK(d.seed == c.seed);
    CHECK(d.radii.epsilon == c.radii.epsilon);
    CHECK(d.radii.eta == c.radii.eta);
    CHECK(d.radii.tau == c.radii.tau);
    CHECK(d.regular_value == c.regular_value);
    CHECK(d.residual_equations == c.residual_equations);
    CHECK(d.residual_sphere == c.residual_sphere);
  }

  TEST_CASE("binary reader rejects bad input") {
    std::stringstream bad("NOPE0000000000000000000000");
    CHECK_THROWS_AS(read_point_cloud_binary(bad), Error);
    PointCloud c = make_cloud(2, {1, 2, 3, 4});
    std::stringstream buf;
    write_point_cloud_binary(buf, c);
    std::string s = buf.str();
    s.resize(s.size() - 4);
    std::stringstream truncated(s);
    CHECK_THROWS_AS(read_point_cloud_binary(truncated), Error);
  }

  TEST_CASE("csv layout") {
    PointCloud c = make_cloud(2, {1.5, -2.0, 0.25, 0.0});
    c.kind = TargetKind::boundary;
    std::stringstream out;
    write_point_cloud_csv(out, c);
    const auto s = out.str();
    CHECK(s.find("# kind=boundary\n") != std::string::npos);
    CHECK(s.find("\nx1,x2\n1.5,-2\n0.25,0\n") != std::string::npos);
  }

  TEST_CASE("subset and make_cloud") {
    PointCloud c = make_cloud(1, {0, 1, 2, 3});
    c.multiplicity = {1, 2, 3, 4};
    const std::vector<std::size_t> rows{3, 1};
    const auto s = c.subset(rows);
    CHECK(s.coords == std::vector<double>{3, 1});
    CHECK(s.multiplicity == std::vector<std::uint32_t>{4, 2});
    CHECK_THROWS_AS(make_cloud(2, {1, 2, 3}), Error);
  }
}
