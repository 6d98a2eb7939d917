#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace milnorkit {

/// Ball radius epsilon, regular-value radius eta, binding-tube radius tau.
struct Radii {
  double epsilon = 0.5;
  double eta = 0.025;
  double tau = 0.0025;

  /// eta = epsilon / 20, tau = eta / 10.
  static Radii from_epsilon(double epsilon);
  /// Throws Error{precondition} unless 0 < tau <= eta/10 and eta <= epsilon/10.
  void validate() const;
};

enum class TargetKind { fiber, boundary, link, page };

std::string to_string(TargetKind kind);
TargetKind parse_target_kind(const std::string& s);

/// Finite sample of a fiber, boundary, link or open-book page, with the
/// parameters that produced it. Points are stored row-major.
struct PointCloud {
  std::size_t dim = 0;
  std::vector<double> coords;
  TargetKind kind = TargetKind::fiber;
  int stage = 0;
  std::vector<double> regular_value;
  Radii radii;
  std::uint64_t seed = 0;
  /// max |f_I(x) - y| (or the stacked system residual) over the points.
  double residual_equations = 0.0;
  /// max | |x| - epsilon | for boundary, link and page clouds; 0 for fibers.
  double residual_sphere = 0.0;
  std::uint64_t proposals = 0;
  /// Number of converged proposals merged into each point by deduplication
  /// (empty when unknown, e.g. clouds read from disk).
  std::vector<std::uint32_t> multiplicity;
  /// Indices of link points where df_I is numerically rank deficient.
  std::vector<std::size_t> near_singular;

  std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
  void push_back(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }

  /// Copy restricted to the given row indices (metadata preserved).
  PointCloud subset(std::span<const std::size_t> rows) const;
};

/// Plain coordinate cloud without sampling metadata (synthetic data, tests).
PointCloud make_cloud(std::size_t dim, std::vector<double> coords);

// Binary layout (little-endian), extension ".mkpc":
//   magic "MKPC", u32 version (=1), u32 dim, u64 count, u32 kind, i32 stage,
//   u64 seed, f64 epsilon, f64 eta, f64 tau, f64 residual_equations,
//   f64 residual_sphere, u32 len(y), f64[len(y)] y, then count*dim f64 rows.
inline constexpr std::uint32_t kPointCloudFormatVersion = 1;

void write_point_cloud_binary(std::ostream& out, const PointCloud& cloud);
PointCloud read_point_cloud_binary(std::istream& in);

/// CSV with a commented header ("# key=value" lines) and one row per point.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace milnorkit
