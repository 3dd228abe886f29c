#include "curvlab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "curvlab/conventions.hpp"
#include "curvlab/jet.hpp"
#include "curvlab/lr.hpp"

namespace curvlab {

namespace {

constexpr double kSingularGuard = 1e-6;
constexpr double kChartPoleGuard = 1e-4;

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

// ---- graph-translates helpers ----------------------------------------------

// ambient components of X = D_N N for the translate foliation of graph(u);
// orientation-independent, needs only the second-order jet
Eigen::VectorXd translate_x_ambient(const Jet2& jet) {
  const int n = jet.n();
  const Eigen::VectorXd& du = jet.gradient;
  const double W = std::sqrt(1.0 + du.squaredNorm());
  Eigen::VectorXd x_amb = Eigen::VectorXd::Zero(n + 1);
  for (int k = 0; k < n; ++k) {
    const double nk = -du[k] / W;
    const Eigen::VectorXd hcol = jet.hessian.col(k);
    const double wk = du.dot(hcol) / W;  // dW/dx_k
    Eigen::VectorXd dn(n + 1);
    dn.head(n) = -hcol / W + du * (wk / (W * W));
    dn[n] = -wk / (W * W);
    x_amb += nk * dn;
  }
  return x_amb;
}

struct TranslateLeaf {
  GraphFrame frame;       // unflipped frame of u at the chart point
  NewtonStack stack;      // orientation-adjusted
  Eigen::MatrixXd shape;  // orientation-adjusted chart matrix
  Eigen::VectorXd lambda; // orientation-adjusted, ascending
};

TranslateLeaf translate_leaf(const ScalarField& u, const Eigen::VectorXd& x, bool flip) {
  TranslateLeaf leaf;
  leaf.frame = graph_frame(jet2(u, x));
  const double sign = flip ? -1.0 : 1.0;
  leaf.shape = sign * leaf.frame.shape;
  leaf.lambda = sign * leaf.frame.principal_curvatures;
  if (flip) leaf.lambda.reverseInPlace();  // keep ascending order
  leaf.stack = newton_stack(leaf.shape, leaf.lambda);
  return leaf;
}

// Richardson-extrapolated central derivative
double central_richardson(const std::function<double(double)>& f, double h) {
  auto d = [&](double step) { return (f(step) - f(-step)) / (2.0 * step); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

}  // namespace

FoliationSpec graph_translates_spec(ScalarField u, bool flip) {
  FoliationSpec spec;
  spec.family = FoliationFamily::GraphTranslates;
  spec.n = u.dimension();
  spec.graph_field = std::move(u);
  spec.flip_orientation = flip;
  return spec;
}

FoliationSpec concentric_cylinders_spec(int n, int r, bool flip) {
  if (r < 1 || r > n - 1)
    throw std::invalid_argument("concentric cylinders need 1 <= r <= n-1");
  FoliationSpec spec;
  spec.family = FoliationFamily::ConcentricCylinders;
  spec.n = n;
  spec.cylinder_index = r;
  spec.flip_orientation = flip;
  return spec;
}

FoliationSpec geodesic_spheres_spec(int n, bool flip) {
  FoliationSpec spec;
  spec.family = FoliationFamily::GeodesicSpheres;
  spec.n = n;
  spec.flip_orientation = flip;
  return spec;
}

// ---------------------------------------------------------------------------
// Hyperspherical charts
// ---------------------------------------------------------------------------

Eigen::VectorXd hyperspherical_point(const Eigen::VectorXd& angles) {
  const int k = static_cast<int>(angles.size());
  Eigen::VectorXd y(k + 1);
  double sines = 1.0;
  for (int i = 0; i < k; ++i) {
    y[i] = sines * std::cos(angles[i]);
    sines *= std::sin(angles[i]);
  }
  y[k] = sines;
  return y;
}

Eigen::VectorXd hyperspherical_angles(const Eigen::VectorXd& unit) {
  const int k = static_cast<int>(unit.size()) - 1;
  Eigen::VectorXd angles(k);
  // polar angles in [0, pi], final azimuth in (-pi, pi]
  for (int i = 0; i < k - 1; ++i) {
    const double tail = unit.tail(k - i).norm();
    angles[i] = std::atan2(tail, unit[i]);
  }
  angles[k - 1] = std::atan2(unit[k], unit[k - 1]);
  return angles;
}

double hyperspherical_sqrt_det(const Eigen::VectorXd& angles) {
  const int k = static_cast<int>(angles.size());
  double det = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k - 1 - i; ++j) det *= std::sin(angles[i]);
  return det;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

FoliationSample foliation_sample(const FoliationSpec& spec, const Eigen::VectorXd& point) {
  const int n = spec.n;
  FoliationSample sample;

  switch (spec.family) {
    case FoliationFamily::GraphTranslates: {
      if (point.size() != n + 1)
        throw std::invalid_argument("graph-translates: point must have n+1 coordinates");
      const Eigen::VectorXd x = point.head(n);
      const ScalarField& u = *spec.graph_field;
      const TranslateLeaf leaf = translate_leaf(u, x, spec.flip_orientation);
      const double sign = spec.flip_orientation ? -1.0 : 1.0;

      sample.point = point;
      sample.leaf_parameter = point[n] - leaf.frame.u_value;
      sample.normal = sign * leaf.frame.normal;
      sample.x_ambient = translate_x_ambient(jet2(u, x));
      sample.principal_curvatures = leaf.lambda;
      sample.shape_rep = leaf.shape;
      sample.metric_rep = leaf.frame.metric;
      sample.x_rep = sample.x_ambient.head(n);
      sample.stack = leaf.stack;
      sample.chart_point = x;

      // N(S_{r+1}) as the ambient directional derivative of the leaf-defined
      // S field along N: the field is independent of the vertical coordinate,
      // so only chart derivatives enter.
      sample.normal_derivative_S.resize(n);
      for (int r = 0; r < n; ++r) {
        double deriv = 0.0;
        for (int k = 0; k < n; ++k) {
          auto s_at = [&](double step) {
            Eigen::VectorXd q = x;
            q[k] += step;
            return translate_leaf(u, q, spec.flip_orientation).stack.s(r + 1);
          };
          deriv += sample.normal[k] * central_richardson(s_at, 1e-4);
        }
        sample.normal_derivative_S[r] = deriv;
      }
      return sample;
    }

    case FoliationFamily::ConcentricCylinders: {
      if (point.size() != n + 1)
        throw std::invalid_argument("concentric-cylinders: point must have n+1 coordinates");
      const int r_cyl = spec.cylinder_index;
      const Eigen::VectorXd y = point.head(r_cyl + 1);
      const double R = y.norm();
      if (R <= kSingularGuard)
        throw std::invalid_argument("concentric-cylinders: point too close to the singular set");
      const double sign = spec.flip_orientation ? -1.0 : 1.0;

      sample.point = point;
      sample.leaf_parameter = R;
      sample.normal = Eigen::VectorXd::Zero(n + 1);
      sample.normal.head(r_cyl + 1) = sign * y / R;
      sample.x_ambient = Eigen::VectorXd::Zero(n + 1);

      // lambda = -sign/R on the sphere factor, 0 on the flat factor
      Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
      lam.head(r_cyl).setConstant(-sign / R);
      std::sort(lam.data(), lam.data() + lam.size());
      sample.principal_curvatures = lam;
      sample.shape_rep = lam.asDiagonal();
      sample.metric_rep = Eigen::MatrixXd::Identity(n, n);
      sample.x_rep = Eigen::VectorXd::Zero(n);
      sample.stack = newton_stack(sample.shape_rep, lam);

      // S_k(R) = binom(r_cyl, k) (-sign/R)^k; N = sign * d/dR
      sample.normal_derivative_S.resize(n);
      for (int r = 0; r < n; ++r) {
        const int k = r + 1;
        const double lamval = -sign / R;
        const double dlam_dR = sign / (R * R);
        sample.normal_derivative_S[r] =
            sign * binom(r_cyl, k) * k * std::pow(lamval, k - 1) * dlam_dR;
      }

      // chart: hyperspherical angles of y/R, then the flat block
      const Eigen::VectorXd angles = hyperspherical_angles(y / R);
      sample.chart_point.resize(n);
      sample.chart_point.head(r_cyl) = angles;
      sample.chart_point.tail(n - r_cyl) = point.tail(n - r_cyl);
      if (r_cyl >= 2 && std::abs(hyperspherical_sqrt_det(angles)) < kChartPoleGuard)
        throw std::invalid_argument("concentric-cylinders: point at a hyperspherical chart pole");
      return sample;
    }

    case FoliationFamily::GeodesicSpheres: {
      if (point.size() != n + 2)
        throw std::invalid_argument("geodesic-spheres: point must have n+2 coordinates");
      Eigen::VectorXd p = point;
      const double nrm = p.norm();
      if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("geodesic-spheres: point must lie on the unit sphere");
      p /= nrm;
      const double c = p[n + 1];  // cos(t), pole = last axis
      const double t = std::acos(std::clamp(c, -1.0, 1.0));
      if (t <= kSingularGuard || t >= std::numbers::pi - kSingularGuard)
        throw std::invalid_argument("geodesic-spheres: point too close to a pole");
      const double sign = spec.flip_orientation ? -1.0 : 1.0;
      const double st = std::sin(t);

      Eigen::VectorXd pole = Eigen::VectorXd::Zero(n + 2);
      pole[n + 1] = 1.0;

      sample.point = p;
      sample.leaf_parameter = t;
      sample.normal = sign * (c * p - pole) / st;
      sample.x_ambient = Eigen::VectorXd::Zero(n + 2);

      const double lamval = -sign * (c / st);  // -cot t for the default orientation
      Eigen::VectorXd lam = Eigen::VectorXd::Constant(n, lamval);
      sample.principal_curvatures = lam;
      sample.shape_rep = lam.asDiagonal();
      sample.metric_rep = Eigen::MatrixXd::Identity(n, n);
      sample.x_rep = Eigen::VectorXd::Zero(n);
      sample.stack = newton_stack(sample.shape_rep, lam);

      // S_k(t) = binom(n, k) lam(t)^k, lam(t) = -sign cot t; N = sign d/dt
      sample.normal_derivative_S.resize(n);
      const double dlam_dt = sign / (st * st);  // d/dt(-sign cot t)
      for (int r = 0; r < n; ++r) {
        const int k = r + 1;
        sample.normal_derivative_S[r] =
            sign * binom(n, k) * k * std::pow(lamval, k - 1) * dlam_dt;
      }

      // chart: hyperspherical angles of the unit direction within the pole's
      // orthogonal complement
      const Eigen::VectorXd v = (p - c * pole).head(n + 1) / st;
      sample.chart_point = hyperspherical_angles(v);
      if (n >= 2 && std::abs(hyperspherical_sqrt_det(sample.chart_point)) < kChartPoleGuard)
        throw std::invalid_argument("geodesic-spheres: point at a hyperspherical chart pole");
      return sample;
    }
  }
  throw std::logic_error("unreachable foliation family");
}

// ---------------------------------------------------------------------------
// Eq. (7)
// ---------------------------------------------------------------------------

double eq7_rhs(const FoliationSpec& spec, const FoliationSample& sample, int r) {
  const int n = spec.n;
  if (r < 0 || r > n - 1) throw std::invalid_argument("eq7_rhs: r out of range");
  const double curvature_term =
      conventions::kCurvatureTermSign * spec.ambient_curvature() * sample.stack.P[r].trace();
  const double tr_a2p =
      (sample.shape_rep * sample.shape_rep * sample.stack.P[r]).trace();
  const Eigen::VectorXd prx = sample.stack.P[r] * sample.x_rep;
  const double xprx = prx.dot(sample.metric_rep * sample.x_rep);
  return curvature_term + tr_a2p + xprx - sample.normal_derivative_S[r];
}

double eq7_lhs(const FoliationSpec& spec, const FoliationSample& sample, int r, double h) {
  const int n = spec.n;
  if (r < 0 || r > n - 1) throw std::invalid_argument("eq7_lhs: r out of range");
  if (!(h > 0.0)) throw std::invalid_argument("eq7_lhs: step must be positive");

  switch (spec.family) {
    case FoliationFamily::GraphTranslates: {
      const ScalarField& u = *spec.graph_field;
      auto field_at = [&](const Eigen::VectorXd& x) {
        const TranslateLeaf leaf = translate_leaf(u, x, spec.flip_orientation);
        const Eigen::VectorXd xc = translate_x_ambient(jet2(u, x)).head(n);
        return Eigen::VectorXd(leaf.stack.P[r] * xc);
      };
      auto sqrt_det = [&](const Eigen::VectorXd& x) {
        return std::sqrt(1.0 + jet2(u, x).gradient.squaredNorm());
      };
      return chart_divergence(field_at, sqrt_det, sample.chart_point, h);
    }
    case FoliationFamily::ConcentricCylinders: {
      const int r_cyl = spec.cylinder_index;
      const double R = sample.leaf_parameter;
      auto field_at = [&](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); };
      auto sqrt_det = [&](const Eigen::VectorXd& q) {
        return std::pow(R, r_cyl) * hyperspherical_sqrt_det(q.head(r_cyl));
      };
      return chart_divergence(field_at, sqrt_det, sample.chart_point, h);
    }
    case FoliationFamily::GeodesicSpheres: {
      const double st = std::sin(sample.leaf_parameter);
      auto field_at = [&](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); };
      auto sqrt_det = [&](const Eigen::VectorXd& q) {
        return std::pow(st, n) * hyperspherical_sqrt_det(q);
      };
      return chart_divergence(field_at, sqrt_det, sample.chart_point, h);
    }
  }
  throw std::logic_error("unreachable foliation family");
}

// ---------------------------------------------------------------------------
// Eq. (8)
// ---------------------------------------------------------------------------

double eq8_residual(const FoliationSpec& spec, const FoliationSample& sample, int r, double h) {
  const int n = spec.n;
  if (r < 0 || r > n - 1) throw std::invalid_argument("eq8_residual: r out of range");
  if (!(h > 0.0)) throw std::invalid_argument("eq8_residual: step must be positive");

  const Eigen::VectorXd prx = sample.stack.P[r] * sample.x_rep;
  const double prx_dot_x = prx.dot(sample.metric_rep * sample.x_rep);
  const double leaf_div = eq7_lhs(spec, sample, r, h);

  double ambient_div = 0.0;
  switch (spec.family) {
    case FoliationFamily::GraphTranslates: {
      const ScalarField& u = *spec.graph_field;
      // ambient components of P_r X; independent of the vertical coordinate
      auto amb_field = [&](const Eigen::VectorXd& x) {
        const TranslateLeaf leaf = translate_leaf(u, x, spec.flip_orientation);
        const Eigen::VectorXd xc = translate_x_ambient(jet2(u, x)).head(n);
        const Eigen::VectorXd vc = leaf.stack.P[r] * xc;
        Eigen::VectorXd v(n + 1);
        v.head(n) = vc;
        v[n] = vc.dot(leaf.frame.gradient);
        return v;
      };
      const Eigen::VectorXd x0 = sample.chart_point;
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd qp = x0, qm = x0;
        qp[k] += h;
        qm[k] -= h;
        ambient_div += (amb_field(qp)[k] - amb_field(qm)[k]) / (2.0 * h);
      }
      // vertical derivative of the translate-invariant field is zero
      break;
    }
    case FoliationFamily::ConcentricCylinders: {
      // flat ambient stencil over the foliation field P_r X, which vanishes
      // identically off the singular set
      auto amb_field = [&](const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(n + 1).eval();
      };
      const Eigen::VectorXd p0 = sample.point;
      for (int k = 0; k < n + 1; ++k) {
        Eigen::VectorXd qp = p0, qm = p0;
        qp[k] += h;
        qm[k] -= h;
        ambient_div += (amb_field(qp)[k] - amb_field(qm)[k]) / (2.0 * h);
      }
      break;
    }
    case FoliationFamily::GeodesicSpheres: {
      // ambient chart (t, theta): warped metric dt^2 + sin^2(t) dOmega^2;
      // the field is identically zero
      auto field_at = [&](const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(n + 1).eval();
      };
      auto sqrt_det = [&](const Eigen::VectorXd& q) {
        return std::pow(std::sin(q[0]), n) * hyperspherical_sqrt_det(q.tail(n));
      };
      Eigen::VectorXd chart(n + 1);
      chart[0] = sample.leaf_parameter;
      chart.tail(n) = sample.chart_point;
      ambient_div = chart_divergence(field_at, sqrt_det, chart, h);
      break;
    }
  }
  return std::abs(ambient_div - (leaf_div - prx_dot_x));
}

// ---------------------------------------------------------------------------
// r-minimal audit
// ---------------------------------------------------------------------------

RMinimalReport r_minimal_audit(const FoliationSpec& spec, int r,
                               const std::vector<Eigen::VectorXd>& sample_points) {
  if (spec.family != FoliationFamily::ConcentricCylinders)
    throw std::invalid_argument("r_minimal_audit: spec must be the cylinder family");
  if (r != spec.cylinder_index)
    throw std::invalid_argument("r_minimal_audit: r must equal the cylinder index");
  if (sample_points.empty()) throw std::invalid_argument("r_minimal_audit: no samples");

  RMinimalReport report;
  report.expected_nullity = spec.n - r;
  report.r_minimal = true;
  report.x_vanishes = true;
  report.trace_condition = true;
  report.nullity_matches = true;

  int positive = 0, negative = 0;
  for (const auto& p : sample_points) {
    const FoliationSample sample = foliation_sample(spec, p);
    RMinimalReport::Row row;
    row.point = p;
    row.radius = sample.leaf_parameter;
    row.s_r = sample.stack.s(r);
    row.s_r_plus_1 = sample.stack.s(r + 1);
    row.x_norm = sample.x_ambient.norm();
    row.shape_norm = sample.principal_curvatures.cwiseAbs().maxCoeff();
    row.trace_a2pr = (sample.shape_rep * sample.shape_rep * sample.stack.P[r]).trace();

    int rank = 0;
    for (int i = 0; i < sample.principal_curvatures.size(); ++i)
      if (std::abs(sample.principal_curvatures[i]) > 1e-12) ++rank;
    row.nullity = spec.n - rank;

    if (std::abs(row.s_r_plus_1) > 1e-12) report.r_minimal = false;
    if (row.x_norm > 1e-12) report.x_vanishes = false;
    if (std::abs(row.trace_a2pr) > 1e-12) report.trace_condition = false;
    if (row.nullity != report.expected_nullity) report.nullity_matches = false;
    if (row.s_r > 1e-12) ++positive;
    if (row.s_r < -1e-12) ++negative;

    report.rows.push_back(std::move(row));
  }
  report.s_r_single_signed =
      (positive + negative == static_cast<int>(sample_points.size())) &&
      (positive == 0 || negative == 0);
  return report;
}

}  // namespace curvlab
