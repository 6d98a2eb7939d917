#include "milnorkit/germ.hpp"

#include <cmath>

#include "milnorkit/error.hpp"

namespace milnorkit {

PolynomialMap::PolynomialMap(std::size_t source_dim, std::vector<Polynomial> components)
    : source_dim_(source_dim), components_(std::move(components)) {
  partials_.reserve(components_.size() * source_dim_);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].num_vars() != source_dim_)
      throw Error(Errc::dimension, "component " + std::to_string(i + 1) + " has " +
                                       std::to_string(components_[i].num_vars()) +
                                       " variables, expected " + std::to_string(source_dim_));
    for (std::size_t j = 0; j < source_dim_; ++j)
      partials_.push_back(components_[i].derivative(j));
  }
}

void PolynomialMap::check_point(std::span<const double> x) const {
  if (x.size() != source_dim_)
    throw Error(Errc::dimension, "point has " + std::to_string(x.size()) +
                                     " coordinates, map expects " + std::to_string(source_dim_));
}

Eigen::VectorXd PolynomialMap::evaluate(std::span<const double> x) const {
  check_point(x);
  Eigen::VectorXd out(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = components_[i].evaluate(x);
  return out;
}

Eigen::MatrixXd PolynomialMap::jacobian(std::span<const double> x) const {
  check_point(x);
  const auto k = static_cast<Eigen::Index>(components_.size());
  const auto m = static_cast<Eigen::Index>(source_dim_);
  Eigen::MatrixXd j(k, m);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      j(r, c) = partials_[static_cast<std::size_t>(r * m + c)].evaluate(x);
  return j;
}

const Polynomial& PolynomialMap::partial(std::size_t i, std::size_t j) const {
  if (i >= components_.size() || j >= source_dim_)
    throw Error(Errc::dimension, "partial derivative index out of range");
  return partials_[i * source_dim_ + j];
}

PolynomialMap PolynomialMap::slice(std::size_t first, std::size_t count) const {
  if (first + count > components_.size()) throw Error(Errc::range, "component slice out of range");
  std::vector<Polynomial> part(components_.begin() + static_cast<std::ptrdiff_t>(first),
                               components_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return PolynomialMap(source_dim_, std::move(part));
}

MapGerm::MapGerm(std::size_t source_dim, std::vector<Polynomial> components, GermFlags flags,
                 std::vector<std::string> variable_names)
    : flags_(flags), names_(std::move(variable_names)) {
  const std::size_t k = components.size();
  if (!(source_dim > k && k >= 2))
    throw Error(Errc::hypothesis, "M>K>=2 violated (M=" + std::to_string(source_dim) +
                                      ", K=" + std::to_string(k) + ")");
  for (std::size_t i = 0; i < k; ++i) {
    if (components[i].constant_term() != 0)
      throw Error(Errc::constant_term, "component " + std::to_string(i + 1) +
                                           " does not vanish at the origin (constant term " +
                                           components[i].constant_term().str() + ")");
  }
  map_ = PolynomialMap(source_dim, std::move(components));
  if (names_.empty()) names_ = default_variable_names(source_dim);
  if (names_.size() != source_dim)
    throw Error(Errc::dimension, "expected " + std::to_string(source_dim) + " variable names, got " +
                                     std::to_string(names_.size()));
}

StageMaps stage(const MapGerm& f, std::size_t i) {
  const std::size_t k = f.target_dim();
  if (i < 1 || i > k)
    throw Error(Errc::range, "stage I=" + std::to_string(i) + " outside 1.." + std::to_string(k));
  return StageMaps{i, f.as_map().slice(0, i), f.as_map().slice(i, k - i)};
}

Eigen::RowVectorXd distance_gradient(std::span<const double> x) {
  Eigen::RowVectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) g[static_cast<Eigen::Index>(j)] = 2.0 * x[j];
  return g;
}

RankProfile rank_profile(const MapGerm& f, std::span<const double> x, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::precondition, "rank tolerance must be positive");
  for (double v : x)
    if (!std::isfinite(v)) throw Error(Errc::precondition, "rank_profile: non-finite point");

  const Eigen::MatrixXd df = f.jacobian(x);
  const Eigen::RowVectorXd dg = distance_gradient(x);
  const auto k = df.rows();
  const auto m = df.cols();

  Eigen::MatrixXd df_g(k + 1, m);
  df_g << df, dg;

  RankProfile out;
  const Eigen::VectorXd sv_df = singular_values(df);
  out.rank_df = numerical_rank(sv_df, tol);
  out.min_sv_df = sv_df.size() ? sv_df.minCoeff() : 0.0;
  out.rank_df_with_g = numerical_rank(df_g, tol);

  for (Eigen::Index i = 1; i <= k; ++i) {
    StageRank s;
    s.stage = static_cast<std::size_t>(i);
    const Eigen::MatrixXd first = df.topRows(i);
    Eigen::MatrixXd first_g(i + 1, m);
    first_g << first, dg;
    // A(x) stacks df_I, df_{K-I}, dg: a row permutation of [df; dg].
    Eigen::MatrixXd a(k + 1, m);
    a << first, df.bottomRows(k - i), dg;
    s.rank_df_stage = numerical_rank(first, tol);
    s.rank_df_stage_with_g = numerical_rank(first_g, tol);
    const Eigen::VectorXd sv_a = singular_values(a);
    s.rank_a = numerical_rank(sv_a, tol);
    s.min_sv_a = sv_a.minCoeff();
    out.stages.push_back(s);
  }
  return out;
}

}  // namespace milnorkit
