#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "milnorkit/germ.hpp"
#include "milnorkit/point_cloud.hpp"
#include "milnorkit/rips.hpp"
#include "milnorkit/sampler.hpp"

namespace milnorkit {

/// Geometric scale ladder. The span is [low_factor, high_factor] times the
/// mean nearest-neighbour distance of the (thinned) cloud, with the top
/// clipped to max_scale. When the bottom would land above half the top, the
/// ladder spans [top / min_span, top] instead.
struct LadderSpec {
  std::size_t num_scales = 40;
  double low_factor = 2.0;
  double high_factor = 30.0;
  double max_scale = 0.0;  // 0 = no cap
  double min_span = 15.0;
};

/// Geometric sequence of `count` scales from lo to hi inclusive.
std::vector<double> geometric_scales(double lo, double hi, std::size_t count);

std::vector<double> make_ladder(const LadderSpec& spec, double mean_nn);

/// Mean distance from each point to its nearest neighbour (0 for < 2 points).
double mean_nearest_neighbor(const PointCloud& cloud);

/// Farthest-point subsample of at most max_points points, starting at row 0.
/// Returns the selected row indices in selection order.
std::vector<std::size_t> farthest_point_indices(const PointCloud& cloud, std::size_t max_points);

enum class Confidence { stable, unstable };

std::string to_string(Confidence c);

struct Plateau {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t length = 0;
  std::size_t first = 0;  // index into the scan
};

struct ChiEstimate {
  std::int64_t chi = 0;
  Plateau plateau;
  std::vector<ComplexStats> scan;
  Confidence confidence = Confidence::unstable;
  /// Connected components at the first plateau scale.
  std::size_t components = 0;
  std::size_t cloud_size = 0;
  std::size_t net_size = 0;
  /// chi of each subsample rerun (empty when not run).
  std::vector<std::int64_t> subsample_chi;
  std::string note;
};

struct EstimatorOptions {
  LadderSpec ladder;
  std::size_t plateau_min = 5;
  RipsOptions rips;
  /// Farthest-point net size; 0 picks a default from the dimension.
  std::size_t net_size = 0;
  std::size_t subsample_trials = 3;
  double subsample_fraction = 0.8;
  std::uint64_t seed = 0;
};

/// Default net size for a manifold of the given intrinsic dimension.
std::size_t default_net_size(int dim);

/// Longest run of equal chi over consecutive valid scans; ties go to the
/// run at smaller scales.
std::optional<Plateau> find_plateau(const std::vector<ComplexStats>& scan);

/// Rips scan at the given scales; `d` is the intrinsic dimension. Once a
/// scale exceeds the clique budget, larger scales are marked invalid too.
/// For d >= 1, scales without a single edge are marked invalid.
ChiEstimate chi_scan(const PointCloud& cloud, int d, const std::vector<double>& scales,
                     const EstimatorOptions& opts = {});

/// Thins the cloud, builds the ladder from opts.ladder and scans.
ChiEstimate chi_scan(const PointCloud& cloud, int d, const EstimatorOptions& opts = {});

/// chi_scan plus the subsample-stability contract: a stable estimate is
/// re-run on opts.subsample_trials random subsets of the dense cloud and
/// downgraded to unstable unless every rerun returns the same chi.
ChiEstimate estimate_chi(const PointCloud& cloud, int d, const EstimatorOptions& opts = {});

/// Intrinsic dimension of the sampled set: fiber M-I, boundary and link
/// M-I-1, page M-K.
int target_dimension(const MapGerm& f, std::size_t stage, TargetKind kind);

struct StageParams {
  Radii radii;
  /// Regular value; empty means eta * e_1.
  std::vector<double> regular_value;
  /// Accepted proposals per set; 0 picks a default from the dimension.
  std::size_t samples = 0;
  /// Page direction (kind == page only).
  std::vector<double> theta;
  /// Also scan the fiber restricted to |x| <= 0.95 eps.
  bool shrink_fiber = false;
  std::uint64_t seed = 0;
  SamplerOptions sampler;
  EstimatorOptions estimator;
};

struct StageEstimate {
  TargetKind kind = TargetKind::fiber;
  std::size_t stage = 0;
  int dimension = 0;
  ChiEstimate estimate;
  std::optional<ChiEstimate> shrunk;
  PointCloud cloud;
  std::string note;
};

/// Default number of accepted proposals for a set of the given dimension.
std::size_t default_sample_count(int dim);

/// Samples the requested set and estimates its Euler characteristic. An
/// empty link yields chi = 0 with a note.
StageEstimate estimate_stage(const MapGerm& f, std::size_t stage, TargetKind kind,
                             const StageParams& params);

}  // namespace milnorkit
