/// @file foliation.hpp
/// @brief Explicit codimension-one foliations of space forms and the
///        divergence identities of P_r(X), X = D_N N, on their leaves.
///
/// Families:
///   graph-translates      flat ambient R^{n+1}, leaves = vertical translates
///                         of the graph of u (the only family with X != 0)
///   concentric-cylinders  flat ambient, leaves = S^r_R x R^{n-r}, singular on
///                         the plane {0} x R^{n-r}
///   geodesic-spheres      round ambient S^{n+1} (curvature 1), leaves =
///                         distance spheres from the pole (last axis)
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "curvlab/expr.hpp"
#include "curvlab/frame.hpp"
#include "curvlab/newton.hpp"

namespace curvlab {

enum class FoliationFamily { GraphTranslates, ConcentricCylinders, GeodesicSpheres };

struct FoliationSpec {
  FoliationFamily family;
  int n = 2;  // leaf dimension
  std::optional<ScalarField> graph_field;  // GraphTranslates
  int cylinder_index = 1;                  // ConcentricCylinders: sphere factor dim r
  bool flip_orientation = false;           // reverse the normal field

  double ambient_curvature() const {
    return family == FoliationFamily::GeodesicSpheres ? 1.0 : 0.0;
  }
  int ambient_dim() const {
    return family == FoliationFamily::GeodesicSpheres ? n + 2 : n + 1;
  }
};

FoliationSpec graph_translates_spec(ScalarField u, bool flip = false);
FoliationSpec concentric_cylinders_spec(int n, int r, bool flip = false);
FoliationSpec geodesic_spheres_spec(int n, bool flip = false);

/// Per-point leaf data. Leaf-intrinsic quantities are expressed in a leaf
/// basis: the graph chart basis with metric G for graph-translates, an
/// adapted orthonormal basis (metric I) for the closed-form families.
struct FoliationSample {
  Eigen::VectorXd point;        // ambient coordinates
  double leaf_parameter = 0.0;  // translate t | radius R | geodesic distance t
  Eigen::VectorXd normal;       // ambient unit N
  Eigen::VectorXd x_ambient;    // ambient X = D_N N (tangent to the leaf)

  Eigen::VectorXd principal_curvatures;  // ascending
  Eigen::MatrixXd shape_rep;             // leaf-basis matrix of A
  Eigen::MatrixXd metric_rep;            // leaf-basis metric
  Eigen::VectorXd x_rep;                 // leaf-basis components of X
  NewtonStack stack;
  Eigen::VectorXd normal_derivative_S;   // N(S_{r+1}) for r = 0..n-1

  Eigen::VectorXd chart_point;           // leaf-chart coordinates of the point
};

/// Evaluate the foliation at a regular ambient point. Throws
/// std::invalid_argument near the singular set (cylinders: |y| <= 1e-6;
/// geodesic spheres: within 1e-6 of a pole) and at hyperspherical chart poles.
FoliationSample foliation_sample(const FoliationSpec& spec, const Eigen::VectorXd& point);

/// Right side of the leaf divergence identity:
///   sigma a trace(P_r) + trace(A^2 P_r) + <X, P_r X> - N(S_{r+1}).
double eq7_rhs(const FoliationSpec& spec, const FoliationSample& sample, int r);

/// Left side div_L(P_r X), discretized in the leaf chart (second order).
double eq7_lhs(const FoliationSpec& spec, const FoliationSample& sample, int r, double h);

/// | div_ambient(P_r X) - (div_L(P_r X) - <P_r X, X>) |, with the ambient
/// divergence discretized over an (n+1)-dimensional stencil.
double eq8_residual(const FoliationSpec& spec, const FoliationSample& sample, int r, double h);

// ---------------------------------------------------------------------------
// r-minimal audit of the singular cylinder foliation
// ---------------------------------------------------------------------------

struct RMinimalReport {
  struct Row {
    Eigen::VectorXd point;
    double radius = 0.0;
    double s_r = 0.0;
    double s_r_plus_1 = 0.0;
    double x_norm = 0.0;
    double shape_norm = 0.0;     // ||A||, = 1/R on the leaf
    double trace_a2pr = 0.0;
    int nullity = 0;
  };
  std::vector<Row> rows;
  int expected_nullity = 0;         // n - r
  bool r_minimal = false;           // all |S_{r+1}| <= 1e-12
  bool s_r_single_signed = false;   // S_r nonzero with one sign across samples
  bool x_vanishes = false;          // all |X| <= 1e-12
  bool trace_condition = false;     // all |tr(A^2 P_r)| <= 1e-12
  bool nullity_matches = false;     // all nu == n - r

  bool passed() const {
    return r_minimal && s_r_single_signed && x_vanishes && trace_condition && nullity_matches;
  }
};

RMinimalReport r_minimal_audit(const FoliationSpec& spec, int r,
                               const std::vector<Eigen::VectorXd>& sample_points);

// ---------------------------------------------------------------------------
// Hyperspherical chart helpers (exposed for tests)
// ---------------------------------------------------------------------------

/// Embedding S^k in R^{k+1}: angles (theta_1..theta_k) -> unit vector.
Eigen::VectorXd hyperspherical_point(const Eigen::VectorXd& angles);
/// Inverse of hyperspherical_point for a unit vector.
Eigen::VectorXd hyperspherical_angles(const Eigen::VectorXd& unit);
/// sqrt(det) of the round metric of S^k in these angles: prod sin^{k-i}(theta_i).
double hyperspherical_sqrt_det(const Eigen::VectorXd& angles);

}  // namespace curvlab
