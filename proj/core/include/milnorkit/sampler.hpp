#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "milnorkit/germ.hpp"
#include "milnorkit/point_cloud.hpp"

namespace milnorkit {

struct SamplerOptions {
  double tol_newton = 1e-10;
  int max_iterations = 60;
  /// Dedup radius = dedup_factor * epsilon.
  double dedup_factor = 1e-4;
  /// Proposal budget; 0 means 50 * n (at least 1000).
  std::uint64_t max_proposals = 0;
  /// Runs below this acceptance rate fail with acceptance_rate_too_low.
  double min_acceptance = 0.01;
  /// Proposals per random stream; streams are keyed by (seed, block index).
  std::size_t block_size = 256;
  unsigned threads = 1;
  double rank_tol = kDefaultRankTolerance;
};

/// Default regular value y = eta * e_1 in R^I.
std::vector<double> default_regular_value(std::size_t stage, double eta);

/// Points of B_eps with f_I(x) = y. `n` counts accepted proposals before
/// deduplication. Throws Error{empty_fiber} when nothing converges and
/// Error{acceptance_rate_too_low} below opts.min_acceptance.
PointCloud sample_fiber(const MapGerm& f, std::size_t stage, std::span<const double> y,
                        const Radii& radii, std::size_t n, std::uint64_t seed,
                        const SamplerOptions& opts = {});

/// Points of S_eps with f_I(x) = y.
PointCloud sample_boundary(const MapGerm& f, std::size_t stage, std::span<const double> y,
                           const Radii& radii, std::size_t n, std::uint64_t seed,
                           const SamplerOptions& opts = {});

/// Points of S_eps with f_I(x) = 0. An empty link is returned as an empty
/// cloud, not an error. Points where df_I is rank deficient are listed in
/// PointCloud::near_singular.
PointCloud sample_link(const MapGerm& f, std::size_t stage, const Radii& radii, std::size_t n,
                       std::uint64_t seed, const SamplerOptions& opts = {});

struct OpenBookSample {
  std::vector<double> theta;
  PointCloud page;
  /// Largest angle (radians) between f_{K-I}(x) and theta over the page.
  double max_angle = 0.0;
};

/// Points x of dF_I (over y = eta e_1) with f_{K-I}(x) = r theta, r > 0.
/// theta must be a unit vector in R^{K-I}; for K-I = 1 it is +1 or -1 and
/// the page is selected by sign.
OpenBookSample sample_openbook_page(const MapGerm& f, std::size_t stage,
                                    std::span<const double> theta, const Radii& radii,
                                    std::size_t n, std::uint64_t seed,
                                    const SamplerOptions& opts = {});

/// `count` evenly spread unit vectors in R^dim: the two signs for dim 1,
/// equally spaced angles for dim 2, a fixed pseudo-random set otherwise.
std::vector<std::vector<double>> page_angles(std::size_t dim, std::size_t count);

struct RadiusProbe {
  double epsilon = 0.0;
  bool accepted = false;
  std::size_t probes = 0;
  std::size_t binding_probes = 0;
  double min_sv_df_stage_with_g = 0.0;
  double min_sv_a = 0.0;
  double min_sv_df_stage = 0.0;
  std::size_t rank_failures = 0;
  std::string reason;
};

struct RadiiChoice {
  Radii radii;
  std::vector<RadiusProbe> ladder;
};

/// Descending epsilon ladder used by choose_radii.
const std::vector<double>& epsilon_ladder();

/// Walks the epsilon ladder (eta = eps/20) and accepts the first radius at
/// which every probe on S_eps with f_I = y (8 values of y, |y| = eta) has
/// rank [df_I; dg] = I + 1, every probe near the binding (|f_{K-I}| <= eta)
/// has maximal rank A(x), and every fiber probe has rank df_I = I.
/// Throws Error{no_radius_found} with the statistics of the last radius.
RadiiChoice choose_radii(const MapGerm& f, std::size_t stage, std::size_t budget,
                         std::uint64_t seed, const SamplerOptions& opts = {});

/// Stacked equations solved by the samplers: f_I(x) = target, optionally
/// the sphere |x| = eps and the page equations.
struct NewtonSystem {
  const MapGerm* germ = nullptr;
  std::size_t stage = 0;
  std::vector<double> target;
  /// Add (|x|^2 - eps^2)/(2 eps) as an extra residual.
  bool on_sphere = false;
  double epsilon = 0.0;
  /// Rows spanning theta-perp in R^{K-I}; components of f_{K-I} along them
  /// are extra residuals.
  std::vector<std::vector<double>> page_normals;
};

/// Gauss-Newton with minimum-norm steps and Armijo backtracking, in place.
/// Returns false when the residual does not drop below opts.tol_newton.
bool newton_project(const NewtonSystem& system, std::span<double> x, const SamplerOptions& opts,
                    double* residual = nullptr);

/// Max-abs residual of the system at x.
double system_residual(const NewtonSystem& system, std::span<const double> x);

}  // namespace milnorkit
