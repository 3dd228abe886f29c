/// @file frame.hpp
/// @brief Per-point geometry of a graph hypersurface: frame, support functions,
///        intrinsic gradients of the support functions.
#pragma once

#include <Eigen/Dense>

#include "curvlab/conventions.hpp"
#include "curvlab/jet.hpp"

namespace curvlab {

/// Geometry bundle of the graph of u at one base point:
///   W = sqrt(1+|grad u|^2),  N = (-grad u, 1)/W,
///   G = I + grad u grad u^T, B = Hess u / W,  A = G^{-1} B,
/// principal curvatures = eigenvalues of B v = lambda G v, ascending.
/// A is the matrix of the shape operator -D_X N in the chart basis; it is
/// G-self-adjoint (G A symmetric) but not symmetric in general.
struct GraphFrame {
  Eigen::VectorXd base_point;
  double u_value = 0.0;
  Eigen::VectorXd gradient;  // grad u at the base point
  double W = 1.0;
  Eigen::VectorXd normal;    // in R^{n+1}, unit, positive last component
  Eigen::MatrixXd metric;    // G
  Eigen::MatrixXd second_ff; // B
  Eigen::MatrixXd shape;     // A
  Eigen::VectorXd principal_curvatures;

  int n() const { return static_cast<int>(base_point.size()); }
};

/// Build the frame from an exact jet. Throws std::runtime_error if the
/// generalized eigensolve fails its residual check (cannot happen for finite
/// jets, where G >= I).
GraphFrame graph_frame(const Jet2& jet);

/// Support data for U = (-V, 1):
///   f = <N,U> = (1 + <grad u, V>)/W,   g = <x,U> = u - <p,V>,
///   U_tan = U - f N (ambient), with chart coordinates G^{-1}(grad u - V).
struct SupportData {
  Eigen::VectorXd U;            // R^{n+1}
  double f = 0.0;
  double g = 0.0;
  int f_sign = 0;               // -1, 0, +1
  Eigen::VectorXd utan_ambient; // R^{n+1}
  Eigen::VectorXd utan_chart;   // R^n
};

SupportData support_data(const GraphFrame& frame, const Eigen::VectorXd& V);

// ---------------------------------------------------------------------------
// Intrinsic gradients of f and g
// ---------------------------------------------------------------------------

enum class Eq3Assignment {
  AsPrinted,  // grad f = U_tan,      grad g = -A(U_tan)
  Swapped     // grad f = -A(U_tan),  grad g = U_tan
};

/// The two candidate gradients, labeled per the oracle-resolved assignment
/// (conventions::kGradientAssignment). Chart coordinates.
struct IntrinsicGradients {
  Eigen::VectorXd grad_f_chart;
  Eigen::VectorXd grad_g_chart;
  Eq3Assignment assignment;
};

IntrinsicGradients gradients_fg(const GraphFrame& frame, const SupportData& support);

/// One-point run of the resolving oracle: finite-differences f and g along the
/// chart, converts to intrinsic gradients with G^{-1}, and matches against the
/// candidates {U_tan, -A(U_tan)}.
struct Eq3Resolution {
  Eq3Assignment resolved;
  double residual;        // max over {f, g} of the matched candidate's error
  double rejected_residual;  // same for the losing assignment
};

Eq3Resolution resolve_eq3_at(const ScalarField& field, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& V, double h = 1e-4);

}  // namespace curvlab
