#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "milnorkit/formulas.hpp"
#include "milnorkit/germ.hpp"
#include "milnorkit/pipeline.hpp"

namespace milnorkit {

struct CatalogEntry {
  std::string name;
  std::string summary;
  /// Germ file text (docs/germ-format.md).
  std::string germ_text;
  std::int64_t chi_f = 0;
  /// Where chi_f comes from.
  std::string provenance;
  std::vector<std::string> tags;
  /// Written out by hand; must equal build_stage_report(M, K, chi_f).
  StageReport expected;
  /// Sets measured by `catalog run`.
  std::vector<SetSpec> plan;
  std::vector<ComponentExpectation> components;
  std::optional<std::size_t> openbook_stage;
  std::size_t openbook_angles = 8;
  /// Only the tameness search is run (chi_f is nominal).
  bool tameness_only = false;
  bool expect_tameness_hits = false;

  MapGerm germ() const;
};

const std::vector<CatalogEntry>& catalog();

/// Throws Error{unknown_name}.
const CatalogEntry& catalog_entry(std::string_view name);

struct CatalogRunResult {
  std::string name;
  /// expected == build_stage_report(M, K, chi_f).
  bool report_matches = false;
  /// For germs flagged with an isolated critical point.
  std::optional<bool> isolated_point_consistent;
  std::optional<VerifyResult> verify;
  std::optional<OpenbookResult> openbook;
  TamenessRun tameness;
  Verdict tameness_verdict = Verdict::pass;
  Verdict overall = Verdict::unstable;
};

/// Tameness starts used by `catalog run`.
inline constexpr std::size_t kCatalogTamenessStarts = 200;

CatalogRunResult run_catalog_entry(const CatalogEntry& entry, const MeasureParams& params);

}  // namespace milnorkit
