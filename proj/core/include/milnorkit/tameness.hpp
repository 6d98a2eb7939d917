#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "milnorkit/germ.hpp"
#include "milnorkit/point_cloud.hpp"

namespace milnorkit {

struct TamenessOptions {
  /// Relative singular-value threshold for "rank deficient" at a minimiser.
  double hit_tol = 1e-6;
  /// |f(x)| above this counts as f(x) != 0.
  double min_value = 1e-8;
  int iterations = 300;
  double rank_tol = kDefaultRankTolerance;
};

/// A point of Sing f outside V(f) in the shell eps/10 <= |x| <= eps.
struct TamenessHit {
  std::vector<double> point;
  double norm = 0.0;
  double min_sv_df = 0.0;
  double min_sv_df_with_g = 0.0;
  double value_norm = 0.0;
};

/// Singular-set inclusions along the projection diagram: rank df_I < I must
/// force rank df < K. Checked at every minimiser.
struct InclusionCheck {
  std::size_t points = 0;
  std::size_t stage_deficient = 0;
  std::size_t violations = 0;
};

struct TamenessReport {
  std::size_t starts = 0;
  std::vector<TamenessHit> hits;
  double min_hit_norm = 0.0;
  double max_hit_norm = 0.0;
  /// Smallest relative singular value of df reached over all starts.
  double min_relative_sv_df = 0.0;
  /// Minimisers where [df; dg] is rank deficient (polar points).
  std::size_t polar_points = 0;
  InclusionCheck inclusion;

  bool has_hits() const noexcept { return !hits.empty(); }
};

/// Minimises the smallest singular value of df from n random starts in the
/// shell eps/10 <= |x| <= eps (a rank drop of df forces one of [df; dg]),
/// and reports minimisers where df is rank deficient while f(x) != 0. This
/// gathers evidence only: no hits does not prove the germ tame.
TamenessReport tameness_evidence(const MapGerm& f, const Radii& radii, std::size_t n,
                                 std::uint64_t seed, const TamenessOptions& opts = {});

}  // namespace milnorkit
