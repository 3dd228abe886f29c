#include "curvlab/newton.hpp"

#include <stdexcept>

namespace curvlab {

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k >= 1; --k) e[k] += lambda[i] * e[k - 1];
  return e;
}

NewtonStack newton_stack(const Eigen::MatrixXd& shape, const Eigen::VectorXd& eigenvalues) {
  const int n = static_cast<int>(shape.rows());
  if (shape.cols() != n) throw std::invalid_argument("newton_stack: shape matrix must be square");
  if (eigenvalues.size() != n)
    throw std::invalid_argument("newton_stack: eigenvalue count must match dimension");

  NewtonStack stack;
  stack.S = elementary_symmetric(eigenvalues);
  stack.P.resize(n + 1);
  stack.P[0] = Eigen::MatrixXd::Identity(n, n);
  for (int r = 1; r <= n; ++r)
    stack.P[r] = stack.S[r] * Eigen::MatrixXd::Identity(n, n) - shape * stack.P[r - 1];

  stack.norm_bound = 0.0;
  for (const auto& P : stack.P) {
    const double nrm = P.jacobiSvd().singularValues()[0];
    if (nrm > stack.norm_bound) stack.norm_bound = nrm;
  }
  return stack;
}

}  // namespace curvlab
