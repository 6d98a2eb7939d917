#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "milnorkit/linalg.hpp"
#include "milnorkit/polynomial.hpp"

namespace milnorkit {

/// A polynomial map R^M -> R^K with any number of components (including
/// none). Derivative polynomials are computed exactly once at construction.
class PolynomialMap {
 public:
  PolynomialMap() = default;
  PolynomialMap(std::size_t source_dim, std::vector<Polynomial> components);

  std::size_t source_dim() const noexcept { return source_dim_; }
  std::size_t target_dim() const noexcept { return components_.size(); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  bool empty() const noexcept { return components_.empty(); }

  Eigen::VectorXd evaluate(std::span<const double> x) const;
  /// K x M matrix with entry (i, j) = d f_i / d x_j at x.
  Eigen::MatrixXd jacobian(std::span<const double> x) const;
  /// Exact partial derivative polynomial d f_i / d x_j.
  const Polynomial& partial(std::size_t i, std::size_t j) const;

  /// Components [first, first + count) as a new map.
  PolynomialMap slice(std::size_t first, std::size_t count) const;

 private:
  void check_point(std::span<const double> x) const;

  std::size_t source_dim_ = 0;
  std::vector<Polynomial> components_;
  std::vector<Polynomial> partials_;  // row-major K x M
};

struct GermFlags {
  bool isolated_critical_point = false;
  bool isolated_critical_value = false;
};

/// A real polynomial map-germ f: (R^M, 0) -> (R^K, 0) with M > K >= 2.
class MapGerm {
 public:
  MapGerm(std::size_t source_dim, std::vector<Polynomial> components, GermFlags flags = {},
          std::vector<std::string> variable_names = {});

  std::size_t source_dim() const noexcept { return map_.source_dim(); }
  std::size_t target_dim() const noexcept { return map_.target_dim(); }
  const std::vector<Polynomial>& components() const noexcept { return map_.components(); }
  const PolynomialMap& as_map() const noexcept { return map_; }
  const GermFlags& flags() const noexcept { return flags_; }
  const std::vector<std::string>& variable_names() const noexcept { return names_; }

  Eigen::VectorXd evaluate(std::span<const double> x) const { return map_.evaluate(x); }
  Eigen::MatrixXd jacobian(std::span<const double> x) const { return map_.jacobian(x); }

 private:
  PolynomialMap map_;
  GermFlags flags_;
  std::vector<std::string> names_;
};

/// The two halves of the projection diagram at stage I: f_I = first I
/// components, f_{K-I} = the remaining K-I (empty when I = K).
struct StageMaps {
  std::size_t stage = 0;
  PolynomialMap f_first;
  PolynomialMap f_rest;
};

StageMaps stage(const MapGerm& f, std::size_t i);

/// Gradient of g(x) = |x|^2, i.e. 2x, as a 1 x M row.
Eigen::RowVectorXd distance_gradient(std::span<const double> x);

struct StageRank {
  std::size_t stage = 0;
  std::size_t rank_df_stage = 0;         // rank df_I
  std::size_t rank_df_stage_with_g = 0;  // rank [df_I; dg]
  std::size_t rank_a = 0;                // rank A(x) = [df_I; df_{K-I}; dg]
  double min_sv_a = 0.0;
};

struct RankProfile {
  std::size_t rank_df = 0;
  std::size_t rank_df_with_g = 0;
  double min_sv_df = 0.0;
  std::vector<StageRank> stages;  // I = 1..K
};

/// Numerical ranks at x; `tol` is relative to the largest singular value of
/// each matrix.
RankProfile rank_profile(const MapGerm& f, std::span<const double> x,
                         double tol = kDefaultRankTolerance);

}  // namespace milnorkit
