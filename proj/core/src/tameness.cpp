#include "milnorkit/tameness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "milnorkit/error.hpp"
#include "milnorkit/linalg.hpp"

namespace milnorkit {

namespace {

double relative_min_sv(const Eigen::MatrixXd& a) {
  const auto sv = singular_values(a);
  if (sv.size() == 0) return 0.0;
  const double top = sv.maxCoeff();
  return sv.minCoeff() / std::max(1.0, top);
}

double objective(const MapGerm& f, std::span<const double> x) {
  const double s = relative_min_sv(f.jacobian(x));
  return s * s;
}

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void clamp_to_shell(std::vector<double>& x, double lo, double hi) {
  const double n = norm_of(x);
  if (n == 0.0) return;
  const double target = std::clamp(n, lo, hi);
  if (target != n)
    for (double& v : x) v *= target / n;
}

}  // namespace

TamenessReport tameness_evidence(const MapGerm& f, const Radii& radii, std::size_t n,
                                 std::uint64_t seed, const TamenessOptions& opts) {
  if (n < 100) throw Error(Errc::precondition, "tameness search needs n >= 100 starts");
  radii.validate();
  const std::size_t m = f.source_dim();
  const std::size_t k = f.target_dim();
  const double lo = radii.epsilon / 10.0;
  const double hi = radii.epsilon;

  TamenessReport report;
  report.starts = n;
  report.min_relative_sv_df = std::numeric_limits<double>::infinity();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x7a3eu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> x(m);
  std::vector<double> grad(m);
  std::vector<double> trial(m);
  for (std::size_t s = 0; s < n; ++s) {
    double nx = 0.0;
    for (double& v : x) {
      v = gauss(rng);
      nx += v * v;
    }
    nx = std::sqrt(nx);
    const double r = lo + (hi - lo) * unit(rng);
    for (double& v : x) v *= r / nx;

    // Projected gradient descent with central differences and backtracking.
    double phi = objective(f, x);
    double step = radii.epsilon;
    for (int it = 0; it < opts.iterations && phi > 0.0; ++it) {
      const double h = 1e-7 * std::max(radii.epsilon, norm_of(x));
      double gnorm = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double keep = x[j];
        x[j] = keep + h;
        const double up = objective(f, x);
        x[j] = keep - h;
        const double down = objective(f, x);
        x[j] = keep;
        grad[j] = (up - down) / (2.0 * h);
        gnorm += grad[j] * grad[j];
      }
      gnorm = std::sqrt(gnorm);
      if (gnorm == 0.0 || !std::isfinite(gnorm)) break;
      bool moved = false;
      for (int tries = 0; tries < 40; ++tries, step *= 0.5) {
        for (std::size_t j = 0; j < m; ++j) trial[j] = x[j] - step * grad[j] / gnorm;
        clamp_to_shell(trial, lo, hi);
        const double p = objective(f, trial);
        if (p < phi) {
          x = trial;
          phi = p;
          moved = true;
          step *= 2.0;
          break;
        }
      }
      if (!moved || step < 1e-14 * radii.epsilon) break;
    }

    const RankProfile profile = rank_profile(f, x, opts.rank_tol);
    const Eigen::MatrixXd df = f.jacobian(x);
    Eigen::MatrixXd dfg(df.rows() + 1, df.cols());
    dfg.topRows(df.rows()) = df;
    dfg.row(df.rows()) = distance_gradient(x);
    const double rel_df = relative_min_sv(df);
    const double rel_dfg = relative_min_sv(dfg);
    report.min_relative_sv_df = std::min(report.min_relative_sv_df, rel_df);
    if (rel_dfg <= opts.hit_tol) ++report.polar_points;

    ++report.inclusion.points;
    const bool full_deficient = rel_df <= opts.hit_tol || profile.rank_df < k;
    for (const auto& st : profile.stages) {
      if (st.rank_df_stage < st.stage) {
        ++report.inclusion.stage_deficient;
        if (!full_deficient) ++report.inclusion.violations;
      }
    }

    const double value = f.evaluate(x).norm();
    if (rel_df <= opts.hit_tol && value > opts.min_value) {
      TamenessHit hit;
      hit.point = x;
      hit.norm = norm_of(x);
      hit.min_sv_df = min_singular_value(df);
      hit.min_sv_df_with_g = min_singular_value(dfg);
      hit.value_norm = value;
      report.hits.push_back(std::move(hit));
    }
  }
  if (!report.hits.empty()) {
    report.min_hit_norm = std::numeric_limits<double>::infinity();
    for (const auto& h : report.hits) {
      report.min_hit_norm = std::min(report.min_hit_norm, h.norm);
      report.max_hit_norm = std::max(report.max_hit_norm, h.norm);
    }
  }
  return report;
}

}  // namespace milnorkit
