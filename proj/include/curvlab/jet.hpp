/// @file jet.hpp
/// @brief Exact second-order jets of scalar fields, plus a finite-difference oracle.
#pragma once

#include <Eigen/Dense>

#include "curvlab/expr.hpp"

namespace curvlab {

/// Second-order jet of u at a point: value, gradient, symmetric Hessian.
/// The Hessian is propagated on the upper triangle and mirrored, so it is
/// exactly symmetric entry-for-entry.
struct Jet2 {
  Eigen::VectorXd point;
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;

  int n() const { return static_cast<int>(point.size()); }
};

/// Exact jet by forward propagation of (value, gradient, Hessian) triples
/// through the AST with product/chain rules. O(n^2) per node.
Jet2 jet2(const ScalarField& field, const Eigen::VectorXd& p);

/// Central second-order finite-difference estimate of the same jet.
/// Serves as the independent oracle for jet2 (O(h^2) truncation).
Jet2 fd_jet2(const ScalarField& field, const Eigen::VectorXd& p, double h = 1e-4);

}  // namespace curvlab
