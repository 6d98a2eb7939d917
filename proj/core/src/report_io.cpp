#include "milnorkit/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "milnorkit/error.hpp"

namespace milnorkit {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json header(const std::string& schema) {
  return json{{"schema", "milnorkit." + schema}, {"schema_version", kReportSchemaVersion}};
}

json radii_json(const Radii& r) {
  return json{{"epsilon", r.epsilon}, {"eta", r.eta}, {"tau", r.tau}};
}

json stage_report_obj(const StageReport& r) {
  json j = header("stage_report");
  j["M"] = r.m;
  j["K"] = r.k;
  j["chi_f"] = r.chi_f;
  j["db"] = r.db;
  j["parity_class"] = to_string(r.parity);
  json rows = json::array();
  for (const auto& s : r.stages)
    rows.push_back({{"I", s.stage},
                    {"chi_fiber", s.chi_fiber},
                    {"chi_boundary", s.chi_boundary},
                    {"chi_link", s.chi_link},
                    {"boundary_minus_link", s.boundary_minus_link()}});
  j["stages"] = rows;
  return j;
}

json estimate_summary(const ChiEstimate& e) {
  json j{{"chi", e.chi},
         {"confidence", to_string(e.confidence)},
         {"plateau",
          {{"r_min", e.plateau.r_min}, {"r_max", e.plateau.r_max}, {"length", e.plateau.length}}},
         {"components", e.components},
         {"cloud_size", e.cloud_size},
         {"net_size", e.net_size},
         {"subsample_chi", e.subsample_chi}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

json scan_obj(const ChiEstimate& e) {
  json j = estimate_summary(e);
  json scales = json::array();
  for (const auto& s : e.scan) {
    json row{{"scale", s.scale},
             {"counts", s.counts},
             {"chi", s.chi},
             {"components", s.components},
             {"work", s.work},
             {"valid", s.valid}};
    if (!s.note.empty()) row["note"] = s.note;
    scales.push_back(row);
  }
  j["scan"] = scales;
  return j;
}

json measurement_json(const Measurement& m) {
  json j{{"kind", to_string(m.set.kind)},
         {"I", m.set.stage},
         {"dimension", m.dimension},
         {"estimate", estimate_summary(m.estimate)},
         {"points", m.points},
         {"proposals", m.proposals},
         {"residual_equations", m.residual_equations},
         {"residual_sphere", m.residual_sphere},
         {"near_singular", m.near_singular},
         {"seed", m.seed}};
  if (m.shrunk) j["shrunk_estimate"] = estimate_summary(*m.shrunk);
  if (!m.note.empty()) j["note"] = m.note;
  return j;
}

json verify_obj(const VerifyResult& r) {
  json j = header("verdict");
  j["germ"] = r.germ_name;
  j["M"] = r.source_dim;
  j["K"] = r.target_dim;
  j["radii"] = radii_json(r.radii);
  j["chi_f"] = {{"value", r.chi_f}, {"source", r.chi_f_source}, {"verdict", to_string(r.chi_f_verdict)}};
  if (r.chi_f_measurement) j["chi_f"]["measurement"] = measurement_json(*r.chi_f_measurement);
  j["expected"] = stage_report_obj(r.expected);
  json sets = json::array();
  for (const auto& v : r.sets) {
    json s{{"kind", to_string(v.measured.set.kind)},
           {"I", v.measured.set.stage},
           {"expected", v.expected},
           {"measured", v.measured.estimate.chi},
           {"verdict", to_string(v.verdict)},
           {"measurement", measurement_json(v.measured)}};
    if (v.expected_components) s["expected_components"] = *v.expected_components;
    sets.push_back(s);
  }
  j["sets"] = sets;
  json db = json::array();
  for (const auto& d : r.db_checks)
    db.push_back({{"I", d.stage},
                  {"expected", d.expected},
                  {"measured", d.measured},
                  {"verdict", to_string(d.verdict)}});
  j["db_checks"] = db;
  j["overall"] = to_string(r.overall);
  return j;
}

std::string verify_csv(const VerifyResult& r) {
  std::ostringstream os;
  os << "# germ=" << r.germ_name << "\n# chi_f=" << r.chi_f << " (" << r.chi_f_source << ")\n"
     << "# epsilon=" << r.radii.epsilon << "\n# overall=" << to_string(r.overall) << "\n";
  os << "kind,I,dimension,expected,measured,confidence,components,expected_components,verdict\n";
  for (const auto& v : r.sets) {
    os << to_string(v.measured.set.kind) << ',' << v.measured.set.stage << ','
       << v.measured.dimension << ',' << v.expected << ',' << v.measured.estimate.chi << ','
       << to_string(v.measured.estimate.confidence) << ',' << v.measured.estimate.components << ',';
    if (v.expected_components) os << *v.expected_components;
    os << ',' << to_string(v.verdict) << '\n';
  }
  for (const auto& d : r.db_checks)
    os << "db," << d.stage << ",," << d.expected << ',' << d.measured << ",,,," << to_string(d.verdict)
       << '\n';
  return os.str();
}

json openbook_obj(const OpenbookResult& r) {
  json j = header("openbook");
  j["germ"] = r.germ_name;
  j["I"] = r.stage;
  j["page_dimension"] = r.page_dimension;
  j["radii"] = radii_json(r.radii);
  json pages = json::array();
  for (const auto& p : r.pages)
    pages.push_back({{"theta", p.theta},
                     {"estimate", estimate_summary(p.estimate)},
                     {"points", p.points},
                     {"max_angle", p.max_angle},
                     {"seed", p.seed}});
  j["pages"] = pages;
  j["all_equal"] = r.all_equal;
  if (r.chi_f) j["chi_f"] = *r.chi_f;
  if (r.matches_chi_f) j["page_chi_equals_chi_f"] = *r.matches_chi_f;
  j["verdict"] = to_string(r.verdict);
  return j;
}

std::string openbook_csv(const OpenbookResult& r) {
  std::ostringstream os;
  os << "# germ=" << r.germ_name << "\n# I=" << r.stage << "\n# verdict=" << to_string(r.verdict)
     << "\n";
  os << "page,theta,chi,confidence,points,max_angle\n";
  for (std::size_t i = 0; i < r.pages.size(); ++i) {
    const auto& p = r.pages[i];
    os << i << ',';
    for (std::size_t t = 0; t < p.theta.size(); ++t) os << (t ? ";" : "") << p.theta[t];
    os << ',' << p.estimate.chi << ',' << to_string(p.estimate.confidence) << ',' << p.points << ','
       << p.max_angle << '\n';
  }
  return os.str();
}

json tameness_obj(const TamenessRun& r) {
  json j = header("tameness");
  j["germ"] = r.germ_name;
  j["radii"] = radii_json(r.radii);
  j["starts"] = r.starts;
  j["seed"] = r.seed;
  const auto& ev = r.evidence;
  json hits = json::array();
  for (const auto& h : ev.hits)
    hits.push_back({{"point", h.point},
                    {"norm", h.norm},
                    {"min_sv_df", h.min_sv_df},
                    {"min_sv_df_with_g", h.min_sv_df_with_g},
                    {"value_norm", h.value_norm}});
  j["hits"] = hits;
  j["hit_count"] = ev.hits.size();
  if (ev.has_hits()) j["hit_norm_range"] = {ev.min_hit_norm, ev.max_hit_norm};
  j["min_relative_sv_df"] = ev.min_relative_sv_df;
  j["polar_points"] = ev.polar_points;
  j["inclusion"] = {{"points", ev.inclusion.points},
                    {"stage_deficient", ev.inclusion.stage_deficient},
                    {"violations", ev.inclusion.violations}};
  json radii = json::array();
  for (const auto& s : r.radius_search) {
    json row{{"I", s.stage}};
    if (s.choice) {
      row["epsilon"] = s.choice->radii.epsilon;
      json ladder = json::array();
      for (const auto& p : s.choice->ladder)
        ladder.push_back({{"epsilon", p.epsilon},
                          {"accepted", p.accepted},
                          {"probes", p.probes},
                          {"binding_probes", p.binding_probes},
                          {"min_sv_df_stage_with_g", p.min_sv_df_stage_with_g},
                          {"min_sv_a", p.min_sv_a},
                          {"min_sv_df_stage", p.min_sv_df_stage},
                          {"rank_failures", p.rank_failures},
                          {"reason", p.reason}});
      row["ladder"] = ladder;
    } else {
      row["error"] = s.error;
    }
    radii.push_back(row);
  }
  j["radius_search"] = radii;
  return j;
}

std::string tameness_csv(const TamenessRun& r) {
  std::ostringstream os;
  os << "# germ=" << r.germ_name << "\n# starts=" << r.starts
     << "\n# hits=" << r.evidence.hits.size()
     << "\n# inclusion_violations=" << r.evidence.inclusion.violations << "\n";
  os << "hit,norm,min_sv_df,value_norm\n";
  for (std::size_t i = 0; i < r.evidence.hits.size(); ++i) {
    const auto& h = r.evidence.hits[i];
    os << i << ',' << h.norm << ',' << h.min_sv_df << ',' << h.value_norm << '\n';
  }
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw Error(Errc::precondition, "unknown format '" + s + "' (expected json or csv)");
}

std::string extension(ReportFormat f) { return f == ReportFormat::json ? ".json" : ".csv"; }

std::string stage_report_json(const StageReport& r) { return dump(stage_report_obj(r)); }

std::string stage_report_csv(const StageReport& r) {
  std::ostringstream os;
  os << "# M=" << r.m << "\n# K=" << r.k << "\n# chi_f=" << r.chi_f << "\n# db=" << r.db << "\n";
  os << "I,chi_fiber,chi_boundary,chi_link,boundary_minus_link\n";
  for (const auto& s : r.stages)
    os << s.stage << ',' << s.chi_fiber << ',' << s.chi_boundary << ',' << s.chi_link << ','
       << s.boundary_minus_link() << '\n';
  return os.str();
}

std::string stage_report_text(const StageReport& r, ReportFormat f) {
  return f == ReportFormat::json ? stage_report_json(r) : stage_report_csv(r);
}

std::string scan_json(const ChiEstimate& e) { return dump(scan_obj(e)); }

std::string scan_svg(const ChiEstimate& e, const std::string& title) {
  constexpr double width = 640, height = 360, left = 60, right = 20, top = 40, bottom = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"" << left << "\" y=\"20\">" << title << "</text>\n";
  std::vector<const ComplexStats*> valid;
  for (const auto& s : e.scan)
    if (s.valid) valid.push_back(&s);
  if (e.scan.empty() || valid.empty()) {
    os << "<text x=\"" << left << "\" y=\"" << height / 2 << "\">no valid scales</text>\n</svg>\n";
    return os.str();
  }
  const double lx0 = std::log(e.scan.front().scale);
  const double lx1 = std::max(std::log(e.scan.back().scale), lx0 + 1e-12);
  std::int64_t lo = valid.front()->chi, hi = lo;
  for (const auto* s : valid) {
    lo = std::min(lo, s->chi);
    hi = std::max(hi, s->chi);
  }
  if (hi == lo) {
    --lo;
    ++hi;
  }
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double r) { return left + pw * (std::log(r) - lx0) / (lx1 - lx0); };
  auto py = [&](double c) {
    return top + ph * (static_cast<double>(hi) - c) / static_cast<double>(hi - lo);
  };
  if (e.plateau.length > 0)
    os << "<rect x=\"" << fmt(px(e.plateau.r_min)) << "\" y=\"" << top << "\" width=\""
       << fmt(std::max(1.0, px(e.plateau.r_max) - px(e.plateau.r_min))) << "\" height=\"" << ph
       << "\" fill=\"#dde8f5\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (std::int64_t c = lo; c <= hi; ++c)
    if (hi - lo <= 12 || c % ((hi - lo) / 6 + 1) == 0)
      os << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py(static_cast<double>(c)) + 4)
         << "\" text-anchor=\"end\">" << c << "</text>\n";
  os << "<text x=\"" << left << "\" y=\"" << height - 15 << "\">" << fmt(e.scan.front().scale)
     << "</text>\n<text x=\"" << left + pw << "\" y=\"" << height - 15 << "\" text-anchor=\"end\">"
     << fmt(e.scan.back().scale) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\">scale (log)</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < valid.size(); ++i)
    os << (i ? " " : "") << fmt(px(valid[i]->scale)) << ',' << fmt(py(static_cast<double>(valid[i]->chi)));
  os << "\"/>\n";
  for (const auto& s : e.scan)
    if (!s.valid)
      os << "<text x=\"" << fmt(px(s.scale)) << "\" y=\"" << top + ph - 4
         << "\" text-anchor=\"middle\" fill=\"#b00\">x</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"20\" text-anchor=\"end\">chi=" << e.chi << " ("
     << to_string(e.confidence) << ")</text>\n</svg>\n";
  return os.str();
}

std::string verify_text(const VerifyResult& r, ReportFormat f) {
  return f == ReportFormat::json ? dump(verify_obj(r)) : verify_csv(r);
}

std::string verify_scans_json(const VerifyResult& r) {
  json j = header("scans");
  j["germ"] = r.germ_name;
  json sets = json::object();
  for (const auto& v : r.sets)
    sets[to_string(v.measured.set.kind) + "-" + std::to_string(v.measured.set.stage)] =
        scan_obj(v.measured.estimate);
  j["sets"] = sets;
  return dump(j);
}

std::string openbook_text(const OpenbookResult& r, ReportFormat f) {
  return f == ReportFormat::json ? dump(openbook_obj(r)) : openbook_csv(r);
}

std::string tameness_text(const TamenessRun& r, ReportFormat f) {
  return f == ReportFormat::json ? dump(tameness_obj(r)) : tameness_csv(r);
}

std::string catalog_run_text(const CatalogRunResult& r, ReportFormat f) {
  if (f == ReportFormat::csv) {
    std::ostringstream os;
    os << "# catalog entry " << r.name << "\n# expected report matches closed forms: "
       << (r.report_matches ? "yes" : "no") << "\n# tameness=" << to_string(r.tameness_verdict)
       << "\n# overall=" << to_string(r.overall) << "\n";
    if (r.verify) os << verify_csv(*r.verify);
    if (r.openbook) os << openbook_csv(*r.openbook);
    return os.str();
  }
  json j = header("catalog_run");
  j["entry"] = r.name;
  j["expected_report_matches"] = r.report_matches;
  if (r.isolated_point_consistent) j["isolated_point_consistent"] = *r.isolated_point_consistent;
  if (r.verify) j["verify"] = verify_obj(*r.verify);
  if (r.openbook) j["openbook"] = openbook_obj(*r.openbook);
  j["tameness"] = tameness_obj(r.tameness);
  j["tameness_verdict"] = to_string(r.tameness_verdict);
  j["overall"] = to_string(r.overall);
  return dump(j);
}

std::string catalog_list_text(ReportFormat f) {
  if (f == ReportFormat::csv) {
    std::ostringstream os;
    os << "name,M,K,chi_f,tags,summary\n";
    for (const auto& e : catalog()) {
      std::string tags;
      for (const auto& t : e.tags) tags += (tags.empty() ? "" : ";") + t;
      os << e.name << ',' << e.expected.m << ',' << e.expected.k << ',' << e.chi_f << ',' << tags
         << ",\"" << e.summary << "\"\n";
    }
    return os.str();
  }
  json list = json::array();
  for (const auto& e : catalog())
    list.push_back({{"name", e.name},
                    {"M", e.expected.m},
                    {"K", e.expected.k},
                    {"chi_f", e.chi_f},
                    {"tags", e.tags},
                    {"summary", e.summary}});
  json j = header("catalog");
  j["entries"] = list;
  return dump(j);
}

std::string catalog_show_text(const CatalogEntry& e, ReportFormat f) {
  if (f == ReportFormat::csv) return e.germ_text;
  json j = header("catalog_entry");
  j["name"] = e.name;
  j["summary"] = e.summary;
  j["germ"] = e.germ_text;
  j["chi_f"] = e.chi_f;
  j["provenance"] = e.provenance;
  j["tags"] = e.tags;
  j["expected"] = stage_report_obj(e.expected);
  json plan = json::array();
  for (const auto& s : e.plan) plan.push_back({{"kind", to_string(s.kind)}, {"I", s.stage}});
  j["plan"] = plan;
  if (e.openbook_stage) j["openbook"] = {{"I", *e.openbook_stage}, {"angles", e.openbook_angles}};
  j["tameness_only"] = e.tameness_only;
  return dump(j);
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw Error(Errc::io, "cannot create directory for " + path + ": " + ec.message());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

}  // namespace milnorkit
