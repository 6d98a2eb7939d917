#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "milnorkit/estimator.hpp"
#include "milnorkit/formulas.hpp"
#include "milnorkit/germ.hpp"
#include "milnorkit/point_cloud.hpp"
#include "milnorkit/sampler.hpp"
#include "milnorkit/tameness.hpp"

namespace milnorkit {

enum class Verdict { pass, fail, unstable };

std::string to_string(Verdict v);

/// fail dominates unstable, which dominates pass.
Verdict combine(Verdict a, Verdict b);

/// Command exit status: 0 pass, 3 unstable, 4 fail.
int exit_code(Verdict v);

/// One set to measure: fiber, boundary or link at a stage.
struct SetSpec {
  TargetKind kind = TargetKind::fiber;
  std::size_t stage = 1;
  friend bool operator==(const SetSpec&, const SetSpec&) = default;
};

/// Every (kind, stage) for the given kinds, stage-major.
std::vector<SetSpec> all_sets(const MapGerm& f, const std::vector<TargetKind>& kinds);

struct MeasureParams {
  /// Ball radius; 0 runs choose_radii for every stage measured and keeps the
  /// smallest accepted radius.
  double epsilon = 0.5;
  /// Accepted proposals per set; 0 uses the per-dimension default.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool shrink_fiber = false;
  /// Clique budget per scale.
  std::uint64_t clique_budget = RipsOptions{}.budget;
};

/// Seed for one set, derived from the run seed so that sets are independent
/// and reproducible.
std::uint64_t derive_seed(std::uint64_t seed, TargetKind kind, std::size_t stage,
                          std::uint64_t salt = 0);

struct Measurement {
  SetSpec set;
  int dimension = 0;
  ChiEstimate estimate;
  std::optional<ChiEstimate> shrunk;
  std::size_t points = 0;
  std::uint64_t proposals = 0;
  double residual_equations = 0.0;
  double residual_sphere = 0.0;
  std::size_t near_singular = 0;
  std::uint64_t seed = 0;
  std::string note;
};

/// Radius for a run: the fixed epsilon, or the smallest radius accepted by
/// choose_radii over the given stages.
Radii resolve_radii(const MapGerm& f, const std::vector<std::size_t>& stages,
                    const MeasureParams& params);

Measurement measure_set(const MapGerm& f, const SetSpec& set, const Radii& radii,
                        const MeasureParams& params);

struct ComponentExpectation {
  SetSpec set;
  std::size_t components = 0;
};

struct SetVerdict {
  Measurement measured;
  std::int64_t expected = 0;
  std::optional<std::size_t> expected_components;
  Verdict verdict = Verdict::unstable;
};

/// Measured chi(dF_I) - chi(L_I) against DB(f) at a stage where both sets
/// were measured.
struct DbCheck {
  std::size_t stage = 0;
  std::int64_t expected = 0;
  std::int64_t measured = 0;
  Verdict verdict = Verdict::unstable;
};

struct VerifyParams {
  std::vector<SetSpec> sets;
  /// Pinned chi(F_f); when empty it is measured from the fiber at stage K.
  std::optional<std::int64_t> chi_f;
  MeasureParams measure;
  std::vector<ComponentExpectation> components;
};

struct VerifyResult {
  std::string germ_name;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::int64_t chi_f = 0;
  /// "pinned" or "measured".
  std::string chi_f_source;
  std::optional<Measurement> chi_f_measurement;
  Verdict chi_f_verdict = Verdict::pass;
  Radii radii;
  StageReport expected;
  std::vector<SetVerdict> sets;
  std::vector<DbCheck> db_checks;
  Verdict overall = Verdict::unstable;
};

VerifyResult run_verify(const MapGerm& f, const std::string& name, const VerifyParams& params);

struct OpenbookParams {
  std::size_t stage = 1;
  /// Pages to sample; K - I = 1 always has exactly two (theta = +1, -1).
  std::size_t num_angles = 8;
  MeasureParams measure;
  std::optional<std::int64_t> chi_f;
};

struct PageMeasurement {
  std::vector<double> theta;
  ChiEstimate estimate;
  std::size_t points = 0;
  double max_angle = 0.0;
  std::uint64_t seed = 0;
};

struct OpenbookResult {
  std::string germ_name;
  std::size_t stage = 0;
  int page_dimension = 0;
  Radii radii;
  std::vector<PageMeasurement> pages;
  bool all_equal = false;
  std::optional<std::int64_t> chi_f;
  /// Whether the common page chi equals chi(F_f); reported, not enforced.
  std::optional<bool> matches_chi_f;
  /// pass iff every page is stable and all pages agree.
  Verdict verdict = Verdict::unstable;
};

OpenbookResult run_openbook(const MapGerm& f, const std::string& name,
                            const OpenbookParams& params);

struct StageRadii {
  std::size_t stage = 0;
  std::optional<RadiiChoice> choice;
  std::string error;
};

struct TamenessRun {
  std::string germ_name;
  Radii radii;
  std::size_t starts = 0;
  std::uint64_t seed = 0;
  TamenessReport evidence;
  std::vector<StageRadii> radius_search;
};

TamenessRun run_tameness(const MapGerm& f, const std::string& name, const Radii& radii,
                         std::size_t starts, std::uint64_t seed);

}  // namespace milnorkit
