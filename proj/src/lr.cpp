#include "curvlab/lr.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace curvlab {

namespace {

void check_r(int r, int n) {
  if (r < 0 || r > n - 1)
    throw std::invalid_argument("r = " + std::to_string(r) + " out of range [0, " +
                                std::to_string(n - 1) + "]");
}

double s_r_plus_1_at(const ScalarField& field, const Eigen::VectorXd& x, int r) {
  const SurfacePoint sp = surface_point(field, x);
  return sp.stack.s(r + 1);
}

// chart components of P_r grad phi at x, everything rebuilt from the jet
Eigen::VectorXd flow_chart(const ScalarField& field, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& V, int r, SupportFn which) {
  const SurfacePoint sp = surface_point(field, x);
  const SupportData support = support_data(sp.frame, V);
  const IntrinsicGradients grads = gradients_fg(sp.frame, support);
  const Eigen::VectorXd& grad = (which == SupportFn::G) ? grads.grad_g_chart : grads.grad_f_chart;
  return sp.stack.P[r] * grad;
}

}  // namespace

SurfacePoint surface_point(const ScalarField& field, const Eigen::VectorXd& x) {
  SurfacePoint sp;
  sp.frame = graph_frame(jet2(field, x));
  sp.stack = newton_stack(sp.frame.shape, sp.frame.principal_curvatures);
  return sp;
}

double lr_g(const GraphFrame& frame, const NewtonStack& stack, const SupportData& support, int r) {
  check_r(r, frame.n());
  return conventions::kLrGSign * (r + 1) * stack.s(r + 1) * support.f;
}

double lr_f(const ScalarField& field, const GraphFrame& frame, const NewtonStack& stack,
            const SupportData& support, int r, double h) {
  check_r(r, frame.n());
  if (!(h > 0.0)) throw std::invalid_argument("lr_f: step must be positive");

  // U_tan(S_{r+1}) along the chart direction w = utan_chart, Richardson extrapolated
  const Eigen::VectorXd& w = support.utan_chart;
  double deriv = 0.0;
  if (w.norm() > 0.0) {
    const Eigen::VectorXd x = frame.base_point;
    auto central = [&](double step) {
      return (s_r_plus_1_at(field, x + step * w, r) - s_r_plus_1_at(field, x - step * w, r)) /
             (2.0 * step);
    };
    const double d_h = central(h);
    const double d_h2 = central(h / 2.0);
    deriv = (4.0 * d_h2 - d_h) / 3.0;
  }

  const double s1 = stack.s(1);
  const double closed = -(s1 * stack.s(r + 1) - (r + 2) * stack.s(r + 2)) * support.f;
  return closed + conventions::kLrFDerivativeSign * deriv;
}

double chart_divergence(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field_at,
                        const std::function<double(const Eigen::VectorXd&)>& sqrt_det_metric_at,
                        const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("chart_divergence: step must be positive");
  const int n = static_cast<int>(x.size());
  double acc = 0.0;
  Eigen::VectorXd q = x;
  for (int i = 0; i < n; ++i) {
    q[i] = x[i] + h;
    const double fp = sqrt_det_metric_at(q) * field_at(q)[i];
    q[i] = x[i] - h;
    const double fm = sqrt_det_metric_at(q) * field_at(q)[i];
    q[i] = x[i];
    acc += (fp - fm) / (2.0 * h);
  }
  return acc / sqrt_det_metric_at(x);
}

double lr_divergence_check(const ScalarField& field, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& V, int r, SupportFn which, double h) {
  check_r(r, field.dimension());
  const SurfacePoint sp = surface_point(field, p);
  const SupportData support = support_data(sp.frame, V);

  auto flow = [&](const Eigen::VectorXd& x) { return flow_chart(field, x, V, r, which); };
  auto sqrt_det = [&](const Eigen::VectorXd& x) {
    const Jet2 jet = jet2(field, x);
    // det(I + g g^T) = 1 + |g|^2
    return std::sqrt(1.0 + jet.gradient.squaredNorm());
  };
  const double discretized = chart_divergence(flow, sqrt_det, p, h);

  const double closed = (which == SupportFn::G)
                            ? lr_g(sp.frame, sp.stack, support, r)
                            : lr_f(field, sp.frame, sp.stack, support, r, h);
  return std::abs(discretized - closed);
}

double fitted_order(const std::vector<double>& steps, const std::vector<double>& residuals,
                    double floor) {
  // least squares on (log h, log res)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (residuals[i] <= floor) continue;
    const double lx = std::log(steps[i]);
    const double ly = std::log(residuals[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::infinity();  // at the roundoff floor
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConvergenceSweep lr_convergence(const ScalarField& field, const Eigen::VectorXd& p,
                                const Eigen::VectorXd& V, int r, SupportFn which,
                                const std::vector<double>& steps) {
  ConvergenceSweep sweep;
  sweep.steps = steps;
  for (double h : steps)
    sweep.residuals.push_back(lr_divergence_check(field, p, V, r, which, h));
  sweep.fitted_order = fitted_order(sweep.steps, sweep.residuals);
  return sweep;
}

}  // namespace curvlab
