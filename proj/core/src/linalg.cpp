#include "milnorkit/linalg.hpp"

namespace milnorkit {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues();
}

std::size_t numerical_rank(const Eigen::VectorXd& sigma, double rel_tol) {
  if (sigma.size() == 0) return 0;
  const double top = sigma.maxCoeff();
  if (!(top > 0.0)) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > rel_tol * top) ++rank;
  return rank;
}

std::size_t numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  return numerical_rank(singular_values(a), rel_tol);
}

double min_singular_value(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd s = singular_values(a);
  return s.size() == 0 ? 0.0 : s.minCoeff();
}

Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& j, const Eigen::VectorXd& r) {
  return j.completeOrthogonalDecomposition().solve(r);
}

}  // namespace milnorkit
