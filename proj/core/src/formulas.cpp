#include "milnorkit/formulas.hpp"

#include "milnorkit/error.hpp"

namespace milnorkit {

namespace {

void require_germ_dims(int m, int k) {
  if (!(m > k && k >= 2))
    throw Error(Errc::hypothesis, "M>K>=2 violated (M=" + std::to_string(m) +
                                      ", K=" + std::to_string(k) + ")");
}

void require_stage(int k, int i) {
  if (i < 1 || i > k)
    throw Error(Errc::range, "stage I=" + std::to_string(i) + " outside 1.." + std::to_string(k));
}

void require_inner_stage(int k, int i) {
  if (i < 1 || i >= k)
    throw Error(Errc::range,
                "stage I=" + std::to_string(i) + " outside 1.." + std::to_string(k - 1));
}

std::int64_t sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

[[noreturn]] void breach(const std::string& what) { throw Error(Errc::invariant_breach, what); }

}  // namespace

std::int64_t sphere_chi(int n) {
  if (n < -1) throw Error(Errc::range, "sphere dimension must be >= -1");
  if (n == -1) return 0;
  return n % 2 == 0 ? 2 : 0;
}

std::int64_t chi_boundary_f(int m, int k, std::int64_t chi_f) {
  require_germ_dims(m, k);
  return (m - k) % 2 == 0 ? 0 : 2 * chi_f;
}

std::int64_t chi_boundary(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_stage(k, i);
  return chi_f * sphere_chi(m - i - 1);
}

std::int64_t chi_boundary_parity_form(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_stage(k, i);
  return (m - k) % 2 == 0 ? chi_f * sphere_chi(k - i - 1) : chi_f * sphere_chi(k - i);
}

std::int64_t le_greuel_boundary(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_inner_stage(k, i);
  const std::int64_t value = 2 * sign_pow(m - i) * chi_f;
  const std::int64_t diff = chi_boundary(m, k, i + 1, chi_f) - chi_boundary(m, k, i, chi_f);
  if (value != diff)
    breach("boundary difference formula: 2(-1)^(M-I) chi_F = " + std::to_string(value) +
           " but chi(dF_{I+1}) - chi(dF_I) = " + std::to_string(diff));
  return value;
}

std::int64_t chi_link(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_stage(k, i);
  return sphere_chi(m - 1) + sign_pow(m - i - 1) * chi_f * sphere_chi(i - 1);
}

std::int64_t chi_link_sphere_route(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_stage(k, i);
  const std::int64_t s = sphere_chi(i - 1);
  return sphere_chi(m - 1) - chi_f * s + chi_boundary(m, k, i, chi_f) * s;
}

std::int64_t le_greuel_link(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  require_inner_stage(k, i);
  const std::int64_t value = 2 * sign_pow(m - i) * chi_f;
  const std::int64_t diff = chi_link(m, k, i + 1, chi_f) - chi_link(m, k, i, chi_f);
  if (value != diff)
    breach("link difference formula: 2(-1)^(M-I) chi_F = " + std::to_string(value) +
           " but chi(L_{I+1}) - chi(L_I) = " + std::to_string(diff));
  return value;
}

std::int64_t db_invariant(int m, int k, std::int64_t chi_f) {
  require_germ_dims(m, k);
  const std::int64_t db = chi_boundary(m, k, 1, chi_f) - chi_link(m, k, 1, chi_f);
  for (int i = 2; i <= k; ++i) {
    const std::int64_t d = chi_boundary(m, k, i, chi_f) - chi_link(m, k, i, chi_f);
    if (d != db)
      breach("DB is not stage independent: stage 1 gives " + std::to_string(db) + ", stage " +
             std::to_string(i) + " gives " + std::to_string(d));
  }
  return db;
}

bool carac2_predicate(int m, int k, int i, std::int64_t chi_f) {
  require_germ_dims(m, k);
  if (m % 2 == 0) throw Error(Errc::hypothesis, "characterization requires odd M");
  if (i < 2 || i > k) throw Error(Errc::hypothesis, "characterization requires 2 <= I <= K");
  const bool equal = chi_boundary(m, k, i, chi_f) == chi_link(m, k, i, chi_f);
  if (equal != (chi_f == 1))
    breach("boundary/link equality at stage " + std::to_string(i) +
           " does not match chi_F == 1 (chi_F=" + std::to_string(chi_f) + ")");
  for (int j = 2; j <= k; ++j) {
    if ((chi_boundary(m, k, j, chi_f) == chi_link(m, k, j, chi_f)) != equal)
      breach("boundary/link equality depends on the stage");
  }
  return equal;
}

StageReport build_stage_report(int m, int k, std::int64_t chi_f) {
  require_germ_dims(m, k);
  StageReport r;
  r.m = m;
  r.k = k;
  r.chi_f = chi_f;
  r.parity = (m % 2 == 0) ? ParityClass::even_m : ParityClass::odd_m;
  for (int i = 1; i <= k; ++i) {
    StageRow row;
    row.stage = i;
    // F_I is F_f times a (K-I)-disk.
    row.chi_fiber = chi_f;
    row.chi_boundary = chi_boundary(m, k, i, chi_f);
    row.chi_link = chi_link(m, k, i, chi_f);
    if (row.chi_boundary != chi_boundary_parity_form(m, k, i, chi_f))
      breach("parity form of chi(dF_I) disagrees at stage " + std::to_string(i));
    if (row.chi_link != chi_link_sphere_route(m, k, i, chi_f))
      breach("sphere-splitting route for chi(L_I) disagrees at stage " + std::to_string(i));
    r.stages.push_back(row);
  }
  r.db = db_invariant(m, k, chi_f);

  for (int i = 1; i < k; ++i) {
    if (le_greuel_boundary(m, k, i, chi_f) != le_greuel_link(m, k, i, chi_f))
      breach("boundary and link difference formulas disagree at stage " + std::to_string(i));
  }
  for (int i = 1; i + 2 <= k; ++i) {
    if (r.at(i).chi_boundary != r.at(i + 2).chi_boundary || r.at(i).chi_link != r.at(i + 2).chi_link)
      breach("period-two identity fails at stage " + std::to_string(i));
  }
  if (r.parity == ParityClass::even_m) {
    for (const auto& row : r.stages)
      if (row.chi_boundary != row.chi_link) breach("even M but chi(dF_I) != chi(L_I)");
    if (r.db != 0) breach("even M but DB != 0");
  } else {
    for (const auto& row : r.stages) {
      if (row.stage < 2) continue;
      const bool even_stage = row.stage % 2 == 0;
      const std::int64_t want_link = even_stage ? 2 : 2 - 2 * chi_f;
      const std::int64_t want_boundary = even_stage ? 2 * chi_f : 0;
      if (row.chi_link != want_link || row.chi_boundary != want_boundary)
        breach("odd-M stage values do not follow the even/odd stage dichotomy");
    }
  }
  return r;
}

bool isolated_point_consistent(int m, int k, std::int64_t chi_f) {
  require_germ_dims(m, k);
  if (m % 2 == 0) return true;
  bool all_equal = true;
  for (int i = 1; i <= k; ++i)
    all_equal = all_equal && chi_boundary(m, k, i, chi_f) == chi_link(m, k, i, chi_f);
  return all_equal && chi_f == 1;
}

std::string to_string(ParityClass p) { return p == ParityClass::even_m ? "even-M" : "odd-M"; }

}  // namespace milnorkit
