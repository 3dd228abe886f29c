/// @file lr.hpp
/// @brief L_r operators on the support functions and their
///        discretized-divergence cross-checks on graph hypersurfaces.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "curvlab/frame.hpp"
#include "curvlab/newton.hpp"

namespace curvlab {

enum class SupportFn { F, G };

/// Frame + Newton stack bundle at one chart point of the graph of u.
struct SurfacePoint {
  GraphFrame frame;
  NewtonStack stack;
};

SurfacePoint surface_point(const ScalarField& field, const Eigen::VectorXd& x);

/// Closed-form L_r g = div(P_r grad g) = kLrGSign * (r+1) S_{r+1} f.
double lr_g(const GraphFrame& frame, const NewtonStack& stack, const SupportData& support, int r);

/// Closed-form-with-oracle L_r f:
///   L_r f = -(S_1 S_{r+1} - (r+2) S_{r+2}) f + kLrFDerivativeSign * U_tan(S_{r+1}),
/// where U_tan(S_{r+1}) is a Richardson-extrapolated centered difference of
/// S_{r+1} along U_tan in the graph chart (step h).
double lr_f(const ScalarField& field, const GraphFrame& frame, const NewtonStack& stack,
            const SupportData& support, int r, double h = 1e-3);

/// Metric divergence of a chart vector field F at x:
///   (1/sqrt(det G)) d_i( sqrt(det G) F^i ), second-order central stencil.
/// `field_at` must return the chart components of the vector field.
double chart_divergence(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field_at,
                        const std::function<double(const Eigen::VectorXd&)>& sqrt_det_metric_at,
                        const Eigen::VectorXd& x, double h);

/// |div_M(P_r grad phi) - closed form| at p, with the divergence discretized
/// in the graph chart (frame, stack and gradient rebuilt at each stencil point).
double lr_divergence_check(const ScalarField& field, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& V, int r, SupportFn which, double h);

/// Residual sweep over steps plus a log-log fitted convergence order.
struct ConvergenceSweep {
  std::vector<double> steps;
  std::vector<double> residuals;
  double fitted_order = 0.0;  // least-squares slope of log(res) vs log(h)
};

ConvergenceSweep lr_convergence(const ScalarField& field, const Eigen::VectorXd& p,
                                const Eigen::VectorXd& V, int r, SupportFn which,
                                const std::vector<double>& steps);

/// Least-squares slope of log(res) vs log(h); pairs with res <= floor are dropped.
double fitted_order(const std::vector<double>& steps, const std::vector<double>& residuals,
                    double floor = 1e-13);

}  // namespace curvlab
