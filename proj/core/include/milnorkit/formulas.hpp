#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace milnorkit {

/// chi(S^n): 2 for even n >= 0, 0 for odd n, and 0 for S^-1 (the empty set).
std::int64_t sphere_chi(int n);

// Closed forms. All take chi(F_f) as the single free input and throw
// Error{hypothesis} unless M > K >= 2, Error{range} for stages out of range.

/// chi(dF_f): 0 when M-K is even, 2 chi(F_f) when M-K is odd.
std::int64_t chi_boundary_f(int m, int k, std::int64_t chi_f);

/// chi(dF_I) = chi(F_f) * chi(S^{M-I-1}), 1 <= I <= K.
std::int64_t chi_boundary(int m, int k, int i, std::int64_t chi_f);

/// The same quantity through the parity split on M-K:
/// chi(F_f) chi(S^{K-I-1}) for M-K even, chi(F_f) chi(S^{K-I}) for M-K odd.
std::int64_t chi_boundary_parity_form(int m, int k, int i, std::int64_t chi_f);

/// chi(dF_{I+1}) - chi(dF_I) = 2 (-1)^{M-I} chi(F_f), 1 <= I < K. Throws
/// Error{invariant_breach} if the closed forms disagree.
std::int64_t le_greuel_boundary(int m, int k, int i, std::int64_t chi_f);

/// chi(L_I) = chi(S^{M-1}) + (-1)^{M-I-1} chi(F_f) chi(S^{I-1}), 1 <= I <= K.
std::int64_t chi_link(int m, int k, int i, std::int64_t chi_f);

/// chi(L_I) assembled from the sphere splitting
/// chi(S^{M-1}) - chi(F_f) chi(S^{I-1}) + chi(dF_I) chi(S^{I-1}).
std::int64_t chi_link_sphere_route(int m, int k, int i, std::int64_t chi_f);

/// chi(L_{I+1}) - chi(L_I) = 2 (-1)^{M-I} chi(F_f), 1 <= I < K, with the same
/// internal consistency check as le_greuel_boundary.
std::int64_t le_greuel_link(int m, int k, int i, std::int64_t chi_f);

/// DB(f) = chi(dF_1) - chi(L_1); verified to be stage independent.
std::int64_t db_invariant(int m, int k, std::int64_t chi_f);

/// For odd M and 2 <= I <= K: chi(dF_I) == chi(L_I). Always equals
/// (chi_f == 1) and never depends on I. Throws Error{hypothesis} for even M
/// or I < 2.
bool carac2_predicate(int m, int k, int i, std::int64_t chi_f);

struct StageRow {
  int stage = 0;
  std::int64_t chi_fiber = 0;
  std::int64_t chi_boundary = 0;
  std::int64_t chi_link = 0;
  std::int64_t boundary_minus_link() const noexcept { return chi_boundary - chi_link; }
  friend bool operator==(const StageRow&, const StageRow&) = default;
};

enum class ParityClass { even_m, odd_m };

struct StageReport {
  int m = 0;
  int k = 0;
  std::int64_t chi_f = 0;
  std::vector<StageRow> stages;  // I = 1..K
  std::int64_t db = 0;
  ParityClass parity = ParityClass::even_m;

  const StageRow& at(int i) const { return stages.at(static_cast<std::size_t>(i - 1)); }
  friend bool operator==(const StageReport&, const StageReport&) = default;
};

/// Fills every stage and runs all cross-consistency checks (fiber constancy,
/// even-M equalities, period two, both difference formulas, stage-independent
/// DB). Throws Error{invariant_breach} on any failure.
StageReport build_stage_report(int m, int k, std::int64_t chi_f);

/// For an isolated critical point with M odd, chi(F_f) = 1 is the only value
/// for which boundary and link agree at every stage. Returns true when the
/// supplied chi_f is consistent with that (always true for even M).
bool isolated_point_consistent(int m, int k, std::int64_t chi_f);

std::string to_string(ParityClass p);

}  // namespace milnorkit
