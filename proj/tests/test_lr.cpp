#include <doctest.h>

#include <random>

#include "curvlab/lr.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

// discretized div_M(P_r grad phi), the oracle side of lr_divergence_check,
// reproduced here so sign-calibration tests can compare against closed forms
// of either sign
double discretized_div(const ScalarField& u, const Eigen::VectorXd& p, const Eigen::VectorXd& V,
                       int r, SupportFn which, double h) {
  auto flow = [&](const Eigen::VectorXd& x) {
    const SurfacePoint sp = surface_point(u, x);
    const SupportData s = support_data(sp.frame, V);
    const IntrinsicGradients g = gradients_fg(sp.frame, s);
    return Eigen::VectorXd(sp.stack.P[r] *
                           (which == SupportFn::G ? g.grad_g_chart : g.grad_f_chart));
  };
  auto sqrt_det = [&](const Eigen::VectorXd& x) {
    return std::sqrt(1.0 + jet2(u, x).gradient.squaredNorm());
  };
  return chart_divergence(flow, sqrt_det, p, h);
}
}  // namespace

TEST_CASE("lr_g: paraboloid at the origin, r = 1") {
  const SurfacePoint sp = surface_point(paraboloid_field(2), vec({0, 0}));
  const SupportData s = support_data(sp.frame, vec({0, 0}));
  CHECK(sp.stack.S[2] == doctest::Approx(4.0).epsilon(1e-12));
  // magnitude (r+1) S_2 f = 8; the sign is the oracle-resolved one
  const double value = lr_g(sp.frame, sp.stack, s, 1);
  CHECK(std::abs(value) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(value == doctest::Approx(conventions::kLrGSign * 8.0).epsilon(1e-12));
}

TEST_CASE("lr_g: affine graph vanishes for every r") {
  const Eigen::VectorXd V = vec({1, 0, -2});
  const SurfacePoint sp = surface_point(affine_field(V, 1.0), vec({3, 3, 3}));
  const SupportData s = support_data(sp.frame, V);
  for (int r = 0; r <= 2; ++r) CHECK(lr_g(sp.frame, sp.stack, s, r) == 0.0);
  CHECK_THROWS_AS(lr_g(sp.frame, sp.stack, s, 3), std::invalid_argument);
  CHECK_THROWS_AS(lr_g(sp.frame, sp.stack, s, -1), std::invalid_argument);
}

TEST_CASE("lr_g: product family vanishes on the degeneracy locus at the family index") {
  const ScalarField u = product_degenerate_field(3, 1, vec({1.0, 1.0}));
  for (double a : {1.0, -0.5, 2.0}) {
    const Eigen::VectorXd p = vec({0.0, a, 0.3});  // x1 = 0, x2 + x3 != 0
    const SurfacePoint sp = surface_point(u, p);
    const SupportData s = support_data(sp.frame, vec({0, 0, 0}));
    CHECK(std::abs(sp.stack.S[2]) < 1e-13);
    CHECK(std::abs(sp.stack.S[3]) < 1e-13);
    CHECK(std::abs(lr_g(sp.frame, sp.stack, s, 1)) < 1e-12);
    // S_3 = 0 identically makes r = 2 vanish at every point, on or off the locus
    CHECK(std::abs(lr_g(sp.frame, sp.stack, s, 2)) < 1e-12);
  }
  // off the locus S_2 != 0: the r = 1 value is genuinely nonzero there
  const SurfacePoint sp = surface_point(u, vec({1.0, 1.0, 0.0}));
  const SupportData s = support_data(sp.frame, vec({0, 0, 0}));
  CHECK(std::abs(sp.stack.S[2]) > 1e-3);
  CHECK(std::abs(lr_g(sp.frame, sp.stack, s, 1)) > 1e-3);
}

TEST_CASE("lr_f: paraboloid at the origin, r = 0") {
  const SurfacePoint sp = surface_point(paraboloid_field(2), vec({0, 0}));
  const SupportData s = support_data(sp.frame, vec({0, 0}));
  // -(S_1^2 - 2 S_2) f = -(16 - 8) = -8; U_tan = 0 kills the derivative term
  CHECK(lr_f(paraboloid_field(2), sp.frame, sp.stack, s, 0) ==
        doctest::Approx(-8.0).epsilon(1e-12));
}

TEST_CASE("lr_f: affine graph vanishes") {
  const Eigen::VectorXd V = vec({0.5, 0.5});
  const ScalarField u = affine_field(V, 0.0);
  const SurfacePoint sp = surface_point(u, vec({1, -1}));
  const SupportData s = support_data(sp.frame, V);
  for (int r = 0; r <= 1; ++r) CHECK(lr_f(u, sp.frame, sp.stack, s, r) == 0.0);
}

TEST_CASE("lr_divergence_check: spec tolerance examples") {
  // paraboloid, origin, r=0, g, h=1e-3
  CHECK(lr_divergence_check(paraboloid_field(2), vec({0, 0}), vec({0, 0}), 0, SupportFn::G,
                            1e-3) <= 1e-4);
  // affine, any point, both functions: residual at roundoff
  const ScalarField aff = affine_field(vec({1, 2}), 0.5);
  CHECK(lr_divergence_check(aff, vec({0.7, -0.3}), vec({1, 2}), 0, SupportFn::F, 1e-3) <= 1e-10);
  CHECK(lr_divergence_check(aff, vec({0.7, -0.3}), vec({1, 2}), 1, SupportFn::G, 1e-3) <= 1e-10);
}

TEST_CASE("lr_divergence_check: Richardson ratio ~4 at (0.5, 0.5), r=1, g") {
  const ScalarField u = paraboloid_field(2);
  const double r2 = lr_divergence_check(u, vec({0.5, 0.5}), vec({0, 0}), 1, SupportFn::G, 2e-3);
  const double r1 = lr_divergence_check(u, vec({0.5, 0.5}), vec({0, 0}), 1, SupportFn::G, 1e-3);
  CHECK(r2 / r1 >= 3.0);
  CHECK(r2 / r1 <= 5.0);
}

TEST_CASE("lr_f agrees with its own divergence oracle on the parabola at x = 1") {
  CHECK(lr_divergence_check(paraboloid_field(1), vec({1}), vec({0}), 0, SupportFn::F, 1e-3) <=
        5e-4);
}

TEST_CASE("sign calibration: only the resolved lr_g sign converges") {
  // generic point with S_2 f != 0
  const ScalarField u = paraboloid_field(2);
  const Eigen::VectorXd p = vec({0.4, -0.3});
  const Eigen::VectorXd V = vec({0, 0});
  const SurfacePoint sp = surface_point(u, p);
  const SupportData s = support_data(sp.frame, V);
  const double magnitude = 2.0 * sp.stack.S[2] * s.f;
  REQUIRE(std::abs(magnitude) > 0.1);

  const double div = discretized_div(u, p, V, 1, SupportFn::G, 1e-3);
  const double res_resolved = std::abs(div - conventions::kLrGSign * magnitude);
  const double res_flipped = std::abs(div + conventions::kLrGSign * magnitude);
  CHECK(res_resolved < 1e-4);
  CHECK(res_flipped > std::abs(magnitude));
}

TEST_CASE("sign calibration: only the resolved lr_f derivative sign converges") {
  // product family at a generic point: S_2 varies along U_tan, so the
  // directional term is active
  const ScalarField u = product_degenerate_field(3, 1, vec({1.0, 1.0}));
  const Eigen::VectorXd p = vec({0.8, 0.5, -0.2});
  const Eigen::VectorXd V = vec({0, 0, 0});
  const int r = 1;
  const SurfacePoint sp = surface_point(u, p);
  const SupportData s = support_data(sp.frame, V);

  // the directional derivative U_tan(S_2), Richardson extrapolated
  const Eigen::VectorXd w = s.utan_chart;
  auto s2_at = [&](double step) {
    return surface_point(u, (p + step * w).eval()).stack.s(r + 1);
  };
  auto central = [&](double step) { return (s2_at(step) - s2_at(-step)) / (2.0 * step); };
  const double deriv = (4.0 * central(5e-4) - central(1e-3)) / 3.0;
  REQUIRE(std::abs(deriv) > 1e-3);

  const double base = -(sp.stack.S[1] * sp.stack.s(r + 1) - (r + 2) * sp.stack.s(r + 2)) * s.f;
  const double div = discretized_div(u, p, V, r, SupportFn::F, 1e-3);
  const double res_resolved =
      std::abs(div - (base + conventions::kLrFDerivativeSign * deriv));
  const double res_flipped =
      std::abs(div - (base - conventions::kLrFDerivativeSign * deriv));
  CHECK(res_resolved < 1e-4);
  CHECK(res_flipped > std::abs(deriv));

  // and lr_f itself matches the discretized divergence
  CHECK(std::abs(div - lr_f(u, sp.frame, sp.stack, s, r)) < 1e-4);
}

TEST_CASE("oracle equivalence: order >= 1.8 across families, r in 0..n-1") {
  std::mt19937_64 rng(2024);
  std::vector<ScalarField> fields;
  fields.push_back(paraboloid_field(2));
  fields.push_back(product_degenerate_field(3, 1, vec({1.0, 1.0})));
  fields.push_back(affine_gaussian_field(vec({0.5, -0.5})));

  const std::vector<double> steps = {4e-3, 2e-3, 1e-3};
  int measured = 0;
  for (const auto& u : fields) {
    const int n = u.dimension();
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd p = oracle::random_point(n, 1.2, rng);
      const Eigen::VectorXd V = oracle::random_point(n, 0.5, rng);
      for (int r = 0; r < n; ++r) {
        for (SupportFn which : {SupportFn::G, SupportFn::F}) {
          const ConvergenceSweep sweep = lr_convergence(u, p, V, r, which, steps);
          if (sweep.residuals.front() < 1e-8) continue;  // exact or roundoff regime
          ++measured;
          CHECK(sweep.fitted_order >= 1.8);
        }
      }
    }
  }
  CHECK(measured > 100);
}

TEST_CASE("scaling covariance: uniform rescaling multiplies curvatures by s") {
  // graph of u_s(x) = u(s x)/s is the image of graph(u) under scaling by 1/s
  const double s = 2.5;
  std::vector<NodePtr> sq;
  for (int i = 1; i <= 2; ++i) sq.push_back(make_power(make_variable(i), 2));
  const ScalarField u = paraboloid_field(2);
  const ScalarField u_scaled(2, make_product({make_constant(s), make_sum(std::move(sq))}));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd p = oracle::random_point(2, 1.0, rng);
    const GraphFrame fine = graph_frame(jet2(u_scaled, p));
    const GraphFrame coarse = graph_frame(jet2(u, (s * p).eval()));
    CHECK((fine.principal_curvatures - s * coarse.principal_curvatures).cwiseAbs().maxCoeff() <
          1e-12);
  }

  // affine stays affine under any reparametrization: S_r = 0 exactly
  const ScalarField aff_scaled = affine_field((s * vec({0.8, -1.2})).eval(), 0.0);
  for (int i = 0; i < 5; ++i) {
    const Eigen::VectorXd p = oracle::random_point(2, 2.0, rng);
    const SurfacePoint sp = surface_point(aff_scaled, p);
    for (int r = 1; r <= 2; ++r) CHECK(sp.stack.S[r] == 0.0);
  }
}

TEST_CASE("norm bound on the flow: |P_r grad f| <= normBound |grad f|") {
  std::mt19937_64 rng(55);
  const ScalarField u = product_degenerate_field(3, 1, vec({1.0, 0.5}));
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd p = oracle::random_point(3, 2.0, rng);
    const Eigen::VectorXd V = oracle::random_point(3, 1.0, rng);
    const SurfacePoint sp = surface_point(u, p);
    const SupportData s = support_data(sp.frame, V);
    const IntrinsicGradients g = gradients_fg(sp.frame, s);
    for (int r = 0; r <= 3; ++r) {
      CHECK((sp.stack.P[r] * g.grad_f_chart).norm() <=
            sp.stack.norm_bound * g.grad_f_chart.norm() + 1e-12);
    }
  }
}
