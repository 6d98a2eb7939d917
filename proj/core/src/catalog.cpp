#include "milnorkit/catalog.hpp"

#include <algorithm>

#include "milnorkit/error.hpp"
#include "milnorkit/germ_parser.hpp"

namespace milnorkit {

namespace {

using K = TargetKind;

StageReport report(int m, int k, std::int64_t chi_f, std::vector<StageRow> rows,
                   std::int64_t db) {
  StageReport r;
  r.m = m;
  r.k = k;
  r.chi_f = chi_f;
  r.stages = std::move(rows);
  r.db = db;
  r.parity = m % 2 == 0 ? ParityClass::even_m : ParityClass::odd_m;
  return r;
}

std::vector<SetSpec> every_set(std::size_t k) {
  std::vector<SetSpec> out;
  for (std::size_t i = 1; i <= k; ++i)
    for (K kind : {K::fiber, K::boundary, K::link}) out.push_back({kind, i});
  return out;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> c;

  {
    CatalogEntry e;
    e.name = "linear-3-2";
    e.summary = "coordinate projection (x, y, z) -> (x, y)";
    e.germ_text =
        "name: linear-3-2\n"
        "source_dim: 3\n"
        "variables: [x, y, z]\n"
        "components: [\"x\", \"y\"]\n"
        "flags: {isolated_critical_point: true, isolated_critical_value: true}\n";
    e.chi_f = 1;
    e.provenance = "fiber is a segment of the z-axis direction (contractible)";
    e.tags = {"isolated-point"};
    e.expected = report(3, 2, 1, {{1, 1, 0, 0}, {2, 1, 2, 2}}, 0);
    e.plan = every_set(2);
    e.components = {{{K::boundary, 2}, 2}, {{K::link, 2}, 2}};
    e.openbook_stage = 1;
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "zw-4-2";
    e.summary = "complex product (z, w) -> zw in real coordinates";
    e.germ_text =
        "name: zw-4-2\n"
        "source_dim: 4\n"
        "variables: [x1, x2, x3, x4]\n"
        "# z = x1 + i x2, w = x3 + i x4\n"
        "components: [\"x1*x3 - x2*x4\", \"x1*x4 + x2*x3\"]\n"
        "flags: {isolated_critical_point: true, isolated_critical_value: true}\n";
    e.chi_f = 0;
    e.provenance = "Milnor fiber of zw is an annulus";
    e.tags = {"ICIS-real-form", "isolated-point"};
    e.expected = report(4, 2, 0, {{1, 0, 0, 0}, {2, 0, 0, 0}}, 0);
    e.plan = every_set(2);
    e.components = {{{K::link, 2}, 2}};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "zwbar-4-2";
    e.summary = "(z, w) -> z conj(w) in real coordinates";
    e.germ_text =
        "name: zwbar-4-2\n"
        "source_dim: 4\n"
        "variables: [x1, x2, x3, x4]\n"
        "components: [\"x1*x3 + x2*x4\", \"x2*x3 - x1*x4\"]\n"
        "flags: {isolated_critical_point: true, isolated_critical_value: true}\n";
    e.chi_f = 0;
    e.provenance = "orientation-reversed copy of zw-4-2; fiber is an annulus";
    e.tags = {"isolated-point"};
    e.expected = report(4, 2, 0, {{1, 0, 0, 0}, {2, 0, 0, 0}}, 0);
    e.plan = every_set(2);
    e.components = {{{K::link, 2}, 2}};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "ramified-t2";
    e.summary = "linear-3-2 followed by the 2-sheeted cover u -> u^2 of C";
    e.germ_text =
        "name: ramified-t2\n"
        "source_dim: 3\n"
        "variables: [x, y, z]\n"
        "components: [\"x^2 - y^2\", \"2*x*y\"]\n"
        "flags: {isolated_critical_point: false, isolated_critical_value: true}\n";
    e.chi_f = 2;
    e.provenance = "t = 2 sheets over the fiber of linear-3-2, chi = 2 * 1";
    e.tags = {"ramified-cover t=2"};
    e.expected = report(3, 2, 2, {{1, 2, 0, -2}, {2, 2, 4, 2}}, 2);
    e.plan = every_set(2);
    e.components = {{{K::fiber, 2}, 2}, {{K::boundary, 2}, 4}, {{K::link, 2}, 2}};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "isolated-odd";
    e.summary = "(x, y (x^2 + y^2 + z^2)), critical only at the origin";
    e.germ_text =
        "name: isolated-odd\n"
        "source_dim: 3\n"
        "variables: [x, y, z]\n"
        "components: [\"x\", \"y*(x^2 + y^2 + z^2)\"]\n"
        "flags: {isolated_critical_point: true, isolated_critical_value: true}\n";
    e.chi_f = 1;
    e.provenance = "odd M with an isolated critical point forces chi = 1";
    e.tags = {"isolated-point"};
    e.expected = report(3, 2, 1, {{1, 1, 0, 0}, {2, 1, 2, 2}}, 0);
    e.plan = every_set(2);
    e.components = {{{K::link, 2}, 2}};
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "isolated-odd-5-3";
    e.summary = "(x1, x2, x3 |x|^2), critical only at the origin, pages over a circle";
    e.germ_text =
        "name: isolated-odd-5-3\n"
        "source_dim: 5\n"
        "variables: [x1, x2, x3, x4, x5]\n"
        "components: [\"x1\", \"x2\", \"x3*(x1^2 + x2^2 + x3^2 + x4^2 + x5^2)\"]\n"
        "flags: {isolated_critical_point: true, isolated_critical_value: true}\n";
    e.chi_f = 1;
    e.provenance = "odd M with an isolated critical point forces chi = 1; fiber is a 2-disk";
    e.tags = {"isolated-point"};
    e.expected = report(5, 3, 1, {{1, 1, 0, 0}, {2, 1, 2, 2}, {3, 1, 0, 0}}, 0);
    e.plan = {{K::fiber, 3}, {K::boundary, 3}, {K::link, 3}, {K::boundary, 2}, {K::link, 2}};
    e.openbook_stage = 1;
    c.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "nontame-demo";
    e.summary = "(x, y^2 + z^2): singular along the x-axis, off the zero set";
    e.germ_text =
        "name: nontame-demo\n"
        "source_dim: 3\n"
        "variables: [x, y, z]\n"
        "components: [\"x\", \"y^2 + z^2\"]\n";
    e.chi_f = 0;
    e.provenance =
        "nominal: the fiber is a point over (t, 0) and a circle over (0, t), so chi "
        "of the fiber is not defined";
    e.tags = {"non-tame-demo"};
    e.expected = report(3, 2, 0, {{1, 0, 0, 2}, {2, 0, 0, 2}}, -2);
    e.tameness_only = true;
    e.expect_tameness_hits = true;
    c.push_back(std::move(e));
  }
  return c;
}

}  // namespace

MapGerm CatalogEntry::germ() const { return parse_germ(germ_text); }

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw Error(Errc::unknown_name, "no catalog entry named '" + std::string(name) + "'");
}

CatalogRunResult run_catalog_entry(const CatalogEntry& entry, const MeasureParams& params) {
  const MapGerm f = entry.germ();
  CatalogRunResult out;
  out.name = entry.name;
  const int m = static_cast<int>(f.source_dim());
  const int k = static_cast<int>(f.target_dim());
  out.report_matches = build_stage_report(m, k, entry.chi_f) == entry.expected;
  Verdict overall = out.report_matches ? Verdict::pass : Verdict::fail;

  const Radii radii = resolve_radii(f, {1}, params);
  out.tameness = run_tameness(f, entry.name, radii, kCatalogTamenessStarts, params.seed);
  out.tameness_verdict =
      out.tameness.evidence.has_hits() == entry.expect_tameness_hits ? Verdict::pass : Verdict::fail;
  overall = combine(overall, out.tameness_verdict);
  if (entry.tameness_only) {
    out.overall = overall;
    return out;
  }

  if (f.flags().isolated_critical_point) {
    out.isolated_point_consistent = isolated_point_consistent(m, k, entry.chi_f);
    if (!*out.isolated_point_consistent) overall = combine(overall, Verdict::fail);
  }

  VerifyParams vp;
  vp.sets = entry.plan;
  vp.chi_f = entry.chi_f;
  vp.measure = params;
  vp.components = entry.components;
  out.verify = run_verify(f, entry.name, vp);
  overall = combine(overall, out.verify->overall);

  if (entry.openbook_stage) {
    OpenbookParams op;
    op.stage = *entry.openbook_stage;
    op.num_angles = entry.openbook_angles;
    op.measure = params;
    op.chi_f = entry.chi_f;
    out.openbook = run_openbook(f, entry.name, op);
    overall = combine(overall, out.openbook->verdict);
  }
  out.overall = overall;
  return out;
}

}  // namespace milnorkit
