#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "milnorkit/point_cloud.hpp"

namespace milnorkit {

/// Simplex counts of one Vietoris-Rips complex.
struct ComplexStats {
  double scale = 0.0;
  int dim_hint = 0;
  /// counts[k] = number of k-simplices (cliques with k+1 vertices).
  std::vector<std::uint64_t> counts;
  std::int64_t chi = 0;
  std::size_t components = 0;
  /// Search-tree nodes visited by the clique counter.
  std::uint64_t work = 0;
  /// False when the clique budget ran out or a count overflowed 64 bits.
  bool valid = true;
  std::string note;

  std::int64_t chi_from_counts() const;
};

struct RipsOptions {
  /// Hard cap on search-tree nodes per complex.
  std::uint64_t budget = 50'000'000;
  /// When set, cliques with more than dim_hint+1 vertices are not counted.
  bool truncate_to_dim = false;
  unsigned threads = 1;
};

struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double length = 0.0;
};

/// All pairs with distance <= r, sorted by (length, a, b).
std::vector<Edge> edges_within(const PointCloud& cloud, double r);

/// Clique-complex statistics of the graph on n vertices with the given edges.
/// `dim_hint` is recorded and used only when opts.truncate_to_dim is set.
ComplexStats clique_complex_stats(std::size_t n, std::span<const Edge> edges, int dim_hint,
                                  const RipsOptions& opts = {});

/// Vietoris-Rips complex at scale r: an edge joins points at distance <= r.
ComplexStats rips_chi(const PointCloud& cloud, double r, int dim_hint,
                      const RipsOptions& opts = {});

/// Number of connected components of the graph.
std::size_t count_components(std::size_t n, std::span<const Edge> edges);

}  // namespace milnorkit
