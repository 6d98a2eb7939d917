#pragma once

#include <string>

#include "milnorkit/catalog.hpp"
#include "milnorkit/estimator.hpp"
#include "milnorkit/formulas.hpp"
#include "milnorkit/pipeline.hpp"

namespace milnorkit {

// Serialized reports contain no timestamps or timings, so identical runs
// produce identical bytes. JSON is pretty-printed with two-space indent.

/// Version of the verdict/report JSON layouts; bumped on any field change.
inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(const std::string& s);
std::string extension(ReportFormat f);

/// {schema, schema_version, M, K, chi_f, db, parity_class, stages: [{I,
/// chi_fiber, chi_boundary, chi_link, boundary_minus_link}]}
std::string stage_report_json(const StageReport& r);
/// Header "I,chi_fiber,chi_boundary,chi_link,boundary_minus_link" after
/// "# key=value" lines for M, K, chi_f, db.
std::string stage_report_csv(const StageReport& r);
std::string stage_report_text(const StageReport& r, ReportFormat f);

/// Per-scale counts, chi and validity, plus the plateau and confidence.
std::string scan_json(const ChiEstimate& e);
/// Static line chart of chi against log scale with the plateau shaded.
std::string scan_svg(const ChiEstimate& e, const std::string& title);

std::string verify_text(const VerifyResult& r, ReportFormat f);
/// Scans of every measured set, keyed "<kind>-<I>".
std::string verify_scans_json(const VerifyResult& r);

std::string openbook_text(const OpenbookResult& r, ReportFormat f);
std::string tameness_text(const TamenessRun& r, ReportFormat f);
std::string catalog_run_text(const CatalogRunResult& r, ReportFormat f);
std::string catalog_list_text(ReportFormat f);
std::string catalog_show_text(const CatalogEntry& e, ReportFormat f);

/// Writes `content` to `path`, creating parent directories. Throws
/// Error{io} on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace milnorkit
