#include <algorithm>

#include "doctest.h"
#include "json.hpp"
#include "milnorkit/catalog.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/germ_parser.hpp"
#include "milnorkit/pipeline.hpp"
#include "milnorkit/report_io.hpp"

using namespace milnorkit;

namespace {

const char* kLinear = "source_dim: 3\ncomponents: [\"x1\", \"x2\"]\n";

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("verdict algebra and exit codes") {
    CHECK(combine(Verdict::pass, Verdict::pass) == Verdict::pass);
    CHECK(combine(Verdict::pass, Verdict::unstable) == Verdict::unstable);
    CHECK(combine(Verdict::unstable, Verdict::fail) == Verdict::fail);
    CHECK(combine(Verdict::fail, Verdict::pass) == Verdict::fail);
    CHECK(exit_code(Verdict::pass) == 0);
    CHECK(exit_code(Verdict::unstable) == 3);
    CHECK(exit_code(Verdict::fail) == 4);
    CHECK(to_string(Verdict::unstable) == "UNSTABLE");
  }

  TEST_CASE("set enumeration and seeds") {
    const auto f = parse_germ(kLinear);
    const auto sets = all_sets(f, {TargetKind::boundary, TargetKind::link});
    REQUIRE(sets.size() == 4);
    CHECK(sets[0] == SetSpec{TargetKind::boundary, 1});
    CHECK(sets[3] == SetSpec{TargetKind::link, 2});
    CHECK(derive_seed(1, TargetKind::fiber, 1) == derive_seed(1, TargetKind::fiber, 1));
    CHECK(derive_seed(1, TargetKind::fiber, 1) != derive_seed(1, TargetKind::fiber, 2));
    CHECK(derive_seed(1, TargetKind::fiber, 1) != derive_seed(1, TargetKind::link, 1));
    CHECK(derive_seed(1, TargetKind::fiber, 1) != derive_seed(2, TargetKind::fiber, 1));
  }

  TEST_CASE("catalog reports are consistent") {
    for (const auto& e : catalog()) {
      CAPTURE(e.name);
      const auto built = build_stage_report(e.expected.m, e.expected.k, e.chi_f);
      CHECK(built == e.expected);
      const auto f = e.germ();
      CHECK(static_cast<int>(f.source_dim()) == e.expected.m);
      CHECK(static_cast<int>(f.target_dim()) == e.expected.k);
    }
    for (const char* name : {"linear-3-2", "zw-4-2", "zwbar-4-2", "ramified-t2", "isolated-odd",
                             "isolated-odd-5-3", "nontame-demo"})
      CHECK(catalog_entry(name).name == name);
    const auto& zw = catalog_entry("zw-4-2").tags;
    CHECK(std::find(zw.begin(), zw.end(), "ICIS-real-form") != zw.end());
    const auto& ram = catalog_entry("ramified-t2").tags;
    CHECK(std::find(ram.begin(), ram.end(), "ramified-cover t=2") != ram.end());
    CHECK(catalog_entry("ramified-t2").chi_f == 2);
    CHECK(catalog_entry("zw-4-2").chi_f == 0);
    try {
      catalog_entry("no-such-germ");
      FAIL("expected unknown_name");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unknown_name);
    }
  }

  TEST_CASE("stage report formats") {
    const auto r = build_stage_report(3, 2, 1);
    const auto csv = stage_report_csv(r);
    CHECK(csv.find("I,chi_fiber,chi_boundary,chi_link,boundary_minus_link\n1,1,0,0,0\n2,1,2,2,0\n") !=
          std::string::npos);
    const auto j = nlohmann::json::parse(stage_report_json(r));
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["stages"].size() == 2);
    CHECK(j["stages"][1]["chi_link"] == 2);
    CHECK(parse_report_format("csv") == ReportFormat::csv);
    CHECK(extension(ReportFormat::json) == ".json");
    CHECK_THROWS_AS(parse_report_format("xml"), Error);
  }

  TEST_CASE("pinned verify on the linear germ is deterministic") {
    const auto f = parse_germ(kLinear);
    VerifyParams p;
    p.sets = all_sets(f, {TargetKind::boundary, TargetKind::link});
    p.chi_f = 1;
    p.measure.seed = 5;
    const auto a = run_verify(f, "linear", p);
    CHECK(a.overall == Verdict::pass);
    CHECK(a.chi_f_source == "pinned");
    REQUIRE(a.db_checks.size() == 2);
    for (const auto& d : a.db_checks) CHECK(d.measured == 0);
    const auto b = run_verify(f, "linear", p);
    CHECK(verify_text(a, ReportFormat::json) == verify_text(b, ReportFormat::json));
    CHECK(verify_scans_json(a) == verify_scans_json(b));

    const auto svg = scan_svg(a.sets[0].measured.estimate, "boundary I=1");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.size() > 7);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  }

  TEST_CASE("an exhausted clique budget is unstable, not a failure") {
    const auto f = parse_germ(kLinear);
    VerifyParams p;
    p.sets = {SetSpec{TargetKind::boundary, 1}};
    p.chi_f = 1;
    p.measure.clique_budget = 1;
    const auto r = run_verify(f, "linear", p);
    CHECK(r.sets[0].verdict == Verdict::unstable);
    CHECK(r.overall == Verdict::unstable);
  }

  TEST_CASE("open book argument checks") {
    const auto f = parse_germ(kLinear);
    OpenbookParams p;
    p.stage = 2;
    CHECK_THROWS_AS(run_openbook(f, "linear", p), Error);
    p.stage = 1;
    p.num_angles = 0;
    CHECK_THROWS_AS(run_openbook(f, "linear", p), Error);
  }

  TEST_CASE("open book of the linear germ") {
    // K - I = 1: two pages, each a half circle.
    const auto f = parse_germ(kLinear);
    OpenbookParams p;
    p.stage = 1;
    p.chi_f = 1;
    const auto r = run_openbook(f, "linear", p);
    REQUIRE(r.pages.size() == 2);
    CHECK(r.all_equal);
    CHECK(r.pages[0].estimate.chi == 1);
    CHECK(r.matches_chi_f == true);
    CHECK(r.verdict == Verdict::pass);
  }
}
