/// @file newton.hpp
/// @brief Elementary symmetric functions S_r and Newton tensors P_r of a shape operator.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace curvlab {

/// All S_0..S_n and P_0..P_n of one shape operator.
///
/// S_r comes from the eigenvalues (stable recursive expansion of prod(t + lambda_i)),
/// P_r from the recursion P_r = S_r I - A P_{r-1}, P_0 = I. The stack satisfies
///   trace(P_r)      = (n-r) S_r
///   trace(A  P_r)   = (r+1) S_{r+1}
///   trace(A^2 P_r)  = S_1 S_{r+1} - (r+2) S_{r+2}   (S_{n+1} = S_{n+2} = 0)
///   P_n = 0
struct NewtonStack {
  Eigen::VectorXd S;               // size n+1, S[r] = S_r, S[0] = 1
  std::vector<Eigen::MatrixXd> P;  // size n+1, P[0] = I
  double norm_bound = 0.0;         // max_r operator 2-norm of P_r

  int n() const { return static_cast<int>(S.size()) - 1; }

  /// S_r with the r > n convention S_r = 0.
  double s(int r) const { return (r >= 0 && r <= n()) ? S[r] : 0.0; }
};

/// Coefficients of prod_i (t + lambda_i): returns (S_0, ..., S_n).
Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& lambda);

/// Build the full stack from a shape-operator matrix and its eigenvalues
/// (as produced by graph_frame; A need not be symmetric, only G-self-adjoint).
NewtonStack newton_stack(const Eigen::MatrixXd& shape, const Eigen::VectorXd& eigenvalues);

}  // namespace curvlab
