/// @file analysis.hpp
/// @brief Numerical tests of the analytic hypotheses (L^1 integrability,
///        Hessian growth) and conclusions (flux decay, relative nullity,
///        hyperplane rigidity, P_1 definiteness) for graph hypersurfaces.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "curvlab/expr.hpp"
#include "curvlab/newton.hpp"

namespace curvlab {

// ---------------------------------------------------------------------------
// L^1 integrability of |grad u - V|
// ---------------------------------------------------------------------------

enum class IntegrabilityVerdict { Converged, Diverging, Inconclusive };

struct IntegrabilityReport {
  std::vector<double> radii;
  std::vector<double> truncated_integrals;  // non-decreasing
  std::optional<double> fitted_decay_exponent;  // from sup_{|x|=R}|grad u - V|
  IntegrabilityVerdict verdict = IntegrabilityVerdict::Inconclusive;
  std::optional<double> limit_estimate;
  bool monte_carlo = false;
  std::uint64_t seed = 0;
  int quadrature_order = 0;
};

/// Truncated integrals of |grad u - V| over coordinate balls. Tensor-product
/// Gauss-Legendre over radial shells for n <= 4; seeded Monte Carlo for
/// 5 <= n <= 8. Throws on schedules shorter than 3 or n > 8.
IntegrabilityReport l1_integrability(const ScalarField& field, const Eigen::VectorXd& V,
                                     const std::vector<double>& radius_schedule,
                                     int quadrature_order,
                                     std::uint64_t seed = 20240501ull);

// ---------------------------------------------------------------------------
// Hessian growth bound  ||Hess u||_F^2 <= c (1 + |grad u|^2)
// ---------------------------------------------------------------------------

enum class BoundVerdict { Bounded, Unbounded, Inconclusive };

struct GridBox {
  Eigen::VectorXd lo, hi;
  int cells_per_axis = 24;  // grid points per axis = cells + 1
};

struct HessianBoundReport {
  double sup_ratio = 0.0;           // max over every stage
  BoundVerdict verdict = BoundVerdict::Inconclusive;
  std::optional<double> c;          // reported constant when bounded
  std::vector<double> stage_sups;   // base grid, refined grid, box x2, box x4
  std::optional<bool> candidate_ok; // sup_ratio <= candidate c, when given
};

/// Sup of ||Hess u||_F^2 / (1 + |grad u|^2) over a grid; verdict `bounded`
/// when the sup is stable under one grid refinement and two domain dilations,
/// `unbounded` when it grows with the domain.
HessianBoundReport hessian_bound(const ScalarField& field, const GridBox& domain,
                                 std::optional<double> candidate_c = std::nullopt);

// ---------------------------------------------------------------------------
// Yau-type flux diagnostic for X = P_r grad g
// ---------------------------------------------------------------------------

enum class FluxVerdict { Consistent, HypothesisNotMet, Inconsistent };

struct YauFluxReport {
  std::vector<double> radii;
  std::vector<double> fluxes;       // integral of <X, nu> over the chart sphere |x| = R
  std::vector<double> l1_norms;     // integral of |X|_G over the graph of the chart ball
  std::vector<double> boundary_l1;  // integral of |X|_G over the chart sphere
  FluxVerdict verdict = FluxVerdict::Inconsistent;
};

YauFluxReport yau_flux_diagnostic(const ScalarField& field, const Eigen::VectorXd& V, int r,
                                  const std::vector<double>& radius_schedule,
                                  int quadrature_order);

// ---------------------------------------------------------------------------
// Relative nullity
// ---------------------------------------------------------------------------

struct NullitySample {
  Eigen::VectorXd point;
  int rank = 0;
  int nullity = 0;        // n - rank
  int cascade_index = 0;  // least j >= 1 with |S_k| <= tol for every k >= j; n+1 if none
};

struct NullityReport {
  std::vector<NullitySample> samples;
  int nullity_lower_bound = 0;     // min over samples
  bool cascade_consistent = true;  // see spec invariant on S_{r+1}, S_{r+2}
};

/// Rank of a shape-operator matrix: singular values above
/// tol_rank * max(1, ||A||_2) count.
int shape_rank(const Eigen::MatrixXd& shape, double tol_rank);

/// Per-sample rank of the shape operator via singular values (threshold
/// tol_rank * max(1, ||A||)), plus the vanishing-cascade consistency check at
/// index r.
NullityReport nullity_report(const ScalarField& field,
                             const std::vector<Eigen::VectorXd>& samples, double tol_rank, int r);

// ---------------------------------------------------------------------------
// Bernstein classification pipeline
// ---------------------------------------------------------------------------

enum class BernsteinClass { HyperplaneOrthogonalToU, NullityBoundOnly, HypothesesNotMet };

struct BernsteinConfig {
  int r = 0;
  std::vector<double> radii = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  double domain_half_width = 3.0;
  int grid_cells = 24;
  int quadrature_order = 12;
  int sign_samples = 200;
  double sample_radius = 3.0;
  std::uint64_t seed = 20240501ull;
  double rank_tol = 1e-8;
};

struct BernsteinReport {
  BernsteinClass classification = BernsteinClass::HypothesesNotMet;
  Eigen::VectorXd hyperplane_normal;  // (-V,1)/|(-V,1)| when classified as hyperplane
  IntegrabilityReport l1;
  HessianBoundReport hessian;
  int s_next_sign_changes = 0;   // S_{r+1} sign changes over the samples
  int s_next2_sign_changes = 0;  // S_{r+2}
  int f_sign_changes = 0;        // f = (1 + <grad u, V>)/W can change sign for V != 0
  int sign_sample_count = 0;
  int min_nullity = 0;
};

BernsteinReport bernstein_classify(const ScalarField& field, const Eigen::VectorXd& V,
                                   const BernsteinConfig& config = {});

/// Pure decision rule (unit-testable for every branch).
BernsteinClass bernstein_rule(IntegrabilityVerdict l1, BoundVerdict hessian,
                              bool s_next_sign_constant, bool s_next2_sign_constant,
                              int min_nullity, int n, int r);

// ---------------------------------------------------------------------------
// P_1 definiteness
// ---------------------------------------------------------------------------

struct P1Witness {
  bool positive_definite = false;
  double min_gap = 0.0;  // min_i (S_1 - lambda_i) after orientation
  int argmin = 0;
  double s1 = 0.0, s2 = 0.0;
  bool flipped = false;  // orientation was reversed to make S_1 > 0
};

/// With the orientation normalized so S_1 > 0, reports whether
/// min_i (S_1 - lambda_i) > 0. Guaranteed true when S_2 > 0.
/// Throws std::logic_error on the impossible configuration S_1 = 0, S_2 > 0.
P1Witness p1_definiteness(const Eigen::VectorXd& lambda, int orientation_sign = +1);

}  // namespace curvlab
