#include "curvlab/frame.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace curvlab {

GraphFrame graph_frame(const Jet2& jet) {
  const int n = jet.n();
  if (!jet.gradient.allFinite() || !jet.hessian.allFinite() || !std::isfinite(jet.value))
    throw std::invalid_argument("graph_frame: jet is not finite");

  GraphFrame frame;
  frame.base_point = jet.point;
  frame.u_value = jet.value;
  frame.gradient = jet.gradient;
  frame.W = std::sqrt(1.0 + jet.gradient.squaredNorm());

  frame.normal.resize(n + 1);
  frame.normal.head(n) = -jet.gradient / frame.W;
  frame.normal[n] = 1.0 / frame.W;

  frame.metric = Eigen::MatrixXd::Identity(n, n) + jet.gradient * jet.gradient.transpose();
  frame.second_ff = jet.hessian / frame.W;
  frame.shape = frame.metric.llt().solve(frame.second_ff);

  // principal curvatures: B v = lambda G v, solved by Cholesky reduction of G
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(frame.second_ff, frame.metric);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("graph_frame: generalized eigensolver failed");
  frame.principal_curvatures = solver.eigenvalues();

  const double scale = std::max(1.0, frame.second_ff.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd v = solver.eigenvectors().col(i);
    const double res =
        (frame.second_ff * v - frame.principal_curvatures[i] * frame.metric * v).norm();
    if (res > 1e-9 * scale)
      throw std::runtime_error("graph_frame: eigenpair residual " + std::to_string(res) +
                               " exceeds tolerance");
  }
  return frame;
}

SupportData support_data(const GraphFrame& frame, const Eigen::VectorXd& V) {
  const int n = frame.n();
  if (V.size() != n) throw std::invalid_argument("support_data: V dimension mismatch");

  SupportData s;
  s.U.resize(n + 1);
  s.U.head(n) = -V;
  s.U[n] = 1.0;
  s.f = (1.0 + frame.gradient.dot(V)) / frame.W;
  s.g = frame.u_value - frame.base_point.dot(V);
  s.f_sign = (s.f > 0.0) - (s.f < 0.0);
  s.utan_ambient = s.U - s.f * frame.normal;
  s.utan_chart = frame.metric.llt().solve(frame.gradient - V);
  return s;
}

IntrinsicGradients gradients_fg(const GraphFrame& frame, const SupportData& support) {
  IntrinsicGradients out;
  out.assignment = Eq3Assignment::Swapped;  // conventions::kGradientAssignment
  out.grad_g_chart = support.utan_chart;
  out.grad_f_chart = -frame.shape * support.utan_chart;
  return out;
}

Eq3Resolution resolve_eq3_at(const ScalarField& field, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& V, double h) {
  const int n = field.dimension();
  if (!(h > 0.0)) throw std::invalid_argument("resolve_eq3_at: step must be positive");

  const GraphFrame frame = graph_frame(jet2(field, p));
  const SupportData support = support_data(frame, V);

  // chart finite differences of f and g, converted to intrinsic gradients
  Eigen::VectorXd df(n), dg(n);
  Eigen::VectorXd q = p;
  for (int i = 0; i < n; ++i) {
    q[i] = p[i] + h;
    const GraphFrame fp = graph_frame(jet2(field, q));
    const SupportData sp = support_data(fp, V);
    q[i] = p[i] - h;
    const GraphFrame fm = graph_frame(jet2(field, q));
    const SupportData sm = support_data(fm, V);
    q[i] = p[i];
    df[i] = (sp.f - sm.f) / (2.0 * h);
    dg[i] = (sp.g - sm.g) / (2.0 * h);
  }
  const Eigen::VectorXd grad_f_fd = frame.metric.llt().solve(df);
  const Eigen::VectorXd grad_g_fd = frame.metric.llt().solve(dg);

  const Eigen::VectorXd cand_utan = support.utan_chart;
  const Eigen::VectorXd cand_minus_a_utan = -frame.shape * support.utan_chart;

  const double res_printed = std::max((grad_f_fd - cand_utan).norm(),
                                      (grad_g_fd - cand_minus_a_utan).norm());
  const double res_swapped = std::max((grad_f_fd - cand_minus_a_utan).norm(),
                                      (grad_g_fd - cand_utan).norm());

  Eq3Resolution out;
  if (res_swapped <= res_printed) {
    out.resolved = Eq3Assignment::Swapped;
    out.residual = res_swapped;
    out.rejected_residual = res_printed;
  } else {
    out.resolved = Eq3Assignment::AsPrinted;
    out.residual = res_printed;
    out.rejected_residual = res_swapped;
  }
  return out;
}

}  // namespace curvlab
