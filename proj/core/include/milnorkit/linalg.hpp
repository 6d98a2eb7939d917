#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace milnorkit {

/// Default relative rank tolerance: singular values at or below
/// kDefaultRankTolerance * sigma_max count as zero.
inline constexpr double kDefaultRankTolerance = 1e-8;

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

/// Number of singular values strictly above rel_tol * sigma_max.
/// A matrix with no rows, no columns, or sigma_max == 0 has rank 0.
std::size_t numerical_rank(const Eigen::VectorXd& sigma, double rel_tol);
std::size_t numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kDefaultRankTolerance);

/// Smallest of the min(rows, cols) singular values (0 for an empty matrix).
double min_singular_value(const Eigen::MatrixXd& a);

/// Minimum-norm least-squares solution of J dx = r.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r);

}  // namespace milnorkit
