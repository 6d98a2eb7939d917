#include "milnorkit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "milnorkit/error.hpp"

namespace milnorkit {

std::vector<double> geometric_scales(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw Error(Errc::precondition, "scale ladder needs 0 < lo <= hi");
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> s(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) s[i] = lo * std::exp(ratio * static_cast<double>(i));
  s.back() = hi;
  return s;
}

std::vector<double> make_ladder(const LadderSpec& spec, double mean_nn) {
  double hi = spec.high_factor * mean_nn;
  double lo = spec.low_factor * mean_nn;
  if (spec.max_scale > 0.0 && (!(hi > 0.0) || hi > spec.max_scale)) hi = spec.max_scale;
  if (!(hi > 0.0)) hi = 1.0;  // fewer than two distinct points and no cap
  // Spacing at or above the cap: the cloud is a few isolated clusters.
  if (!(lo > 0.0) || lo > 0.5 * hi) lo = hi / spec.min_span;
  return geometric_scales(lo, hi, spec.num_scales);
}

double mean_nearest_neighbor(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) return 0.0;
  const std::size_t dim = cloud.dim;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    const double* p = cloud.coords.data() + i * dim;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* q = cloud.coords.data() + j * dim;
      double d2 = 0.0;
      for (std::size_t t = 0; t < dim && d2 < best; ++t) {
        const double d = p[t] - q[t];
        d2 += d * d;
      }
      best = std::min(best, d2);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(n);
}

std::vector<std::size_t> farthest_point_indices(const PointCloud& cloud, std::size_t max_points) {
  const std::size_t n = cloud.size();
  std::vector<std::size_t> out;
  if (n == 0 || max_points == 0) return out;
  if (n <= max_points) {
    out.resize(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  const std::size_t dim = cloud.dim;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::size_t current = 0;
  out.reserve(max_points);
  while (out.size() < max_points) {
    out.push_back(current);
    const double* p = cloud.coords.data() + current * dim;
    std::size_t far = current;
    double far_d = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double* q = cloud.coords.data() + j * dim;
      double d2 = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        const double d = p[t] - q[t];
        d2 += d * d;
      }
      if (d2 < dist[j]) dist[j] = d2;
      if (dist[j] > far_d) {
        far_d = dist[j];
        far = j;
      }
    }
    if (far_d <= 0.0) break;  // every point already selected or duplicated
    current = far;
  }
  return out;
}

std::string to_string(Confidence c) { return c == Confidence::stable ? "stable" : "unstable"; }

std::size_t default_net_size(int dim) {
  if (dim <= 0) return 200;
  if (dim == 1) return 300;
  if (dim == 2) return 1000;
  return 1500;
}

std::optional<Plateau> find_plateau(const std::vector<ComplexStats>& scan) {
  std::optional<Plateau> best;
  std::size_t i = 0;
  while (i < scan.size()) {
    if (!scan[i].valid) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < scan.size() && scan[j].valid && scan[j].chi == scan[i].chi) ++j;
    const std::size_t len = j - i;
    if (!best || len > best->length) best = Plateau{scan[i].scale, scan[j - 1].scale, len, i};
    i = j;
  }
  return best;
}

ChiEstimate chi_scan(const PointCloud& cloud, int d, const std::vector<double>& scales,
                     const EstimatorOptions& opts) {
  if (d < 0) throw Error(Errc::precondition, "dimension must be >= 0");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1])) throw Error(Errc::precondition, "scales must increase");
  ChiEstimate est;
  est.cloud_size = cloud.size();
  est.net_size = cloud.size();
  if (scales.empty()) {
    est.note = "no scales";
    return est;
  }
  const auto edges = edges_within(cloud, scales.back());
  std::size_t prefix = 0;
  bool exhausted = false;
  for (double r : scales) {
    while (prefix < edges.size() && edges[prefix].length <= r) ++prefix;
    ComplexStats stats;
    if (exhausted) {
      stats.scale = r;
      stats.dim_hint = d;
      stats.valid = false;
      stats.note = "skipped after clique budget exceeded at a smaller scale";
    } else {
      stats = clique_complex_stats(cloud.size(), std::span<const Edge>(edges.data(), prefix), d,
                                   opts.rips);
      stats.scale = r;
      if (!stats.valid) {
        exhausted = true;
      } else if (d >= 1 && cloud.size() >= 2 && prefix == 0) {
        stats.valid = false;
        stats.note = "no edges: below the sampling resolution";
      }
    }
    est.scan.push_back(std::move(stats));
  }
  const auto plateau = find_plateau(est.scan);
  if (!plateau) {
    est.note = "no valid scale";
    return est;
  }
  est.plateau = *plateau;
  est.chi = est.scan[plateau->first].chi;
  est.components = est.scan[plateau->first].components;
  est.confidence =
      plateau->length >= opts.plateau_min ? Confidence::stable : Confidence::unstable;
  if (est.confidence == Confidence::unstable)
    est.note = "longest run of equal chi has " + std::to_string(plateau->length) + " scales";
  return est;
}

ChiEstimate chi_scan(const PointCloud& cloud, int d, const EstimatorOptions& opts) {
  const std::size_t net_target = opts.net_size ? opts.net_size : default_net_size(d);
  const auto rows = farthest_point_indices(cloud, net_target);
  const PointCloud net = rows.size() == cloud.size() ? cloud : cloud.subset(rows);
  const auto scales = make_ladder(opts.ladder, mean_nearest_neighbor(net));
  auto est = chi_scan(net, d, scales, opts);
  est.cloud_size = cloud.size();
  est.net_size = net.size();
  return est;
}

namespace {

/// Random subset keeping each proposal with the given fraction; a point with
/// multiplicity m survives if any of its m proposals is kept.
std::vector<std::size_t> subsample_rows(const PointCloud& cloud, double fraction,
                                        std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), 0x5ab5u};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::size_t m = cloud.multiplicity.empty() ? 1 : cloud.multiplicity[i];
    owner.insert(owner.end(), m, i);
  }
  std::shuffle(owner.begin(), owner.end(), rng);
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(owner.size())));
  owner.resize(std::min(keep, owner.size()));
  std::sort(owner.begin(), owner.end());
  owner.erase(std::unique(owner.begin(), owner.end()), owner.end());
  return owner;
}

}  // namespace

ChiEstimate estimate_chi(const PointCloud& cloud, int d, const EstimatorOptions& opts) {
  auto est = chi_scan(cloud, d, opts);
  if (est.confidence != Confidence::stable || cloud.size() < 2) return est;
  for (std::size_t t = 0; t < opts.subsample_trials; ++t) {
    const auto rows = subsample_rows(cloud, opts.subsample_fraction, opts.seed, t);
    const auto sub = chi_scan(cloud.subset(rows), d, opts);
    est.subsample_chi.push_back(sub.chi);
    if (sub.chi != est.chi || sub.confidence != Confidence::stable) {
      est.confidence = Confidence::unstable;
      est.note = "subsample " + std::to_string(t) + " gave chi=" + std::to_string(sub.chi) +
                 " (" + to_string(sub.confidence) + ")";
    }
  }
  return est;
}

int target_dimension(const MapGerm& f, std::size_t stage, TargetKind kind) {
  const int m = static_cast<int>(f.source_dim());
  const int k = static_cast<int>(f.target_dim());
  const int i = static_cast<int>(stage);
  switch (kind) {
    case TargetKind::fiber: return m - i;
    case TargetKind::boundary:
    case TargetKind::link: return m - i - 1;
    case TargetKind::page: return m - k;
  }
  return m - i;
}

std::size_t default_sample_count(int dim) {
  if (dim <= 0) return 2000;
  if (dim == 1) return 4000;
  if (dim == 2) return 12000;
  return 20000;
}

StageEstimate estimate_stage(const MapGerm& f, std::size_t stage, TargetKind kind,
                             const StageParams& params) {
  if (stage < 1 || stage > f.target_dim())
    throw Error(Errc::range, "stage I=" + std::to_string(stage) + " outside 1.." +
                                 std::to_string(f.target_dim()));
  StageEstimate out;
  out.kind = kind;
  out.stage = stage;
  out.dimension = target_dimension(f, stage, kind);
  const std::size_t n = params.samples ? params.samples : default_sample_count(out.dimension);
  const auto y = params.regular_value.empty() ? default_regular_value(stage, params.radii.eta)
                                              : params.regular_value;
  switch (kind) {
    case TargetKind::fiber:
      out.cloud = sample_fiber(f, stage, y, params.radii, n, params.seed, params.sampler);
      break;
    case TargetKind::boundary:
      out.cloud = sample_boundary(f, stage, y, params.radii, n, params.seed, params.sampler);
      break;
    case TargetKind::link:
      out.cloud = sample_link(f, stage, params.radii, n, params.seed, params.sampler);
      break;
    case TargetKind::page: {
      std::vector<double> theta = params.theta;
      if (theta.empty()) {
        theta.assign(f.target_dim() - stage, 0.0);
        if (!theta.empty()) theta[0] = 1.0;
      }
      out.cloud =
          sample_openbook_page(f, stage, theta, params.radii, n, params.seed, params.sampler).page;
      break;
    }
  }
  EstimatorOptions eopts = params.estimator;
  if (eopts.ladder.max_scale <= 0.0) eopts.ladder.max_scale = 0.5 * params.radii.epsilon;
  eopts.seed = params.seed;
  if (out.cloud.empty()) {
    out.estimate.confidence = Confidence::stable;
    out.estimate.note = "empty " + to_string(kind) + ": chi = 0";
    out.note = out.estimate.note;
    return out;
  }
  out.estimate = estimate_chi(out.cloud, out.dimension, eopts);
  if (kind == TargetKind::fiber && params.shrink_fiber) {
    std::vector<std::size_t> inner;
    const double limit = 0.95 * params.radii.epsilon;
    for (std::size_t i = 0; i < out.cloud.size(); ++i) {
      double s = 0.0;
      for (double v : out.cloud.point(i)) s += v * v;
      if (std::sqrt(s) <= limit) inner.push_back(i);
    }
    out.shrunk = estimate_chi(out.cloud.subset(inner), out.dimension, eopts);
  }
  return out;
}

}  // namespace milnorkit
