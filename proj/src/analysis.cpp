#include "curvlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "curvlab/jet.hpp"
#include "curvlab/lr.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/quadrature.hpp"

namespace curvlab {

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(x.size());
  for (int i = 0; i < m; ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void check_schedule(const std::vector<double>& radii) {
  if (radii.size() < 3) throw std::invalid_argument("radius schedule needs at least 3 entries");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0.0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw std::invalid_argument("radius schedule must be positive and increasing");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// l1_integrability
// ---------------------------------------------------------------------------

IntegrabilityReport l1_integrability(const ScalarField& field, const Eigen::VectorXd& V,
                                     const std::vector<double>& radius_schedule,
                                     int quadrature_order, std::uint64_t seed) {
  const int n = field.dimension();
  check_schedule(radius_schedule);
  if (V.size() != n) throw std::invalid_argument("l1_integrability: V dimension mismatch");
  if (n > 8) throw std::invalid_argument("l1_integrability: dimension above supported range (8)");

  auto integrand = [&](const Eigen::VectorXd& x) {
    return (jet2(field, x).gradient - V).norm();
  };

  IntegrabilityReport report;
  report.radii = radius_schedule;
  report.quadrature_order = quadrature_order;
  report.monte_carlo = n >= 5;
  report.seed = report.monte_carlo ? seed : 0;

  const SphereRule rule = n <= 4 ? sphere_rule(n, std::max(quadrature_order, 4)) : SphereRule{};
  double acc = 0.0, prev_radius = 0.0;
  for (std::size_t k = 0; k < radius_schedule.size(); ++k) {
    const double R = radius_schedule[k];
    if (report.monte_carlo) {
      const int count = 40000 * n;
      acc += integrate_shell_mc(integrand, n, prev_radius, R, count, seed + k);
    } else {
      acc += integrate_shell(integrand, n, prev_radius, R, quadrature_order, rule);
    }
    report.truncated_integrals.push_back(acc);
    prev_radius = R;
  }

  // decay exponent of sup_{|x|=R} |grad u - V| by log-log fit
  const SphereRule sup_dirs = n <= 4 ? sphere_rule(n, 8) : SphereRule{};
  std::vector<double> logR, logS;
  bool all_zero = true;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double R : radius_schedule) {
    double sup = 0.0;
    if (n <= 4) {
      for (const auto& d : sup_dirs.directions) sup = std::max(sup, integrand(R * d));
    } else {
      for (int s = 0; s < 256; ++s) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d[i] = gauss(rng);
        d.normalize();
        sup = std::max(sup, integrand(R * d));
      }
    }
    if (sup > 1e-300) {
      all_zero = false;
      logR.push_back(std::log(R));
      logS.push_back(std::log(sup));
    }
  }
  if (!all_zero && logR.size() >= 2)
    report.fitted_decay_exponent = -fit_slope(logR, logS);

  // verdict
  const std::size_t m = report.truncated_integrals.size();
  const double last = report.truncated_integrals[m - 1];
  const double inc1 = report.truncated_integrals[m - 1] - report.truncated_integrals[m - 2];
  const double inc2 = report.truncated_integrals[m - 2] - report.truncated_integrals[m - 3];
  const double tol = 1e-6 * std::max(1.0, last);

  if (last <= 1e-12) {
    // identically zero integrand (e.g. affine with matching V)
    report.verdict = IntegrabilityVerdict::Converged;
    report.limit_estimate = last;
    return report;
  }
  if (inc1 <= tol && inc2 <= tol && report.fitted_decay_exponent &&
      *report.fitted_decay_exponent > static_cast<double>(n)) {
    report.verdict = IntegrabilityVerdict::Converged;
    report.limit_estimate = last;
    return report;
  }
  // superlinear growth of the truncated integrals over the last three entries
  std::vector<double> lx, ly;
  for (std::size_t k = m - 3; k < m; ++k) {
    lx.push_back(std::log(report.radii[k]));
    ly.push_back(std::log(std::max(report.truncated_integrals[k], 1e-300)));
  }
  if (fit_slope(lx, ly) > 1.0) {
    report.verdict = IntegrabilityVerdict::Diverging;
  } else {
    report.verdict = IntegrabilityVerdict::Inconclusive;
  }
  return report;
}

// ---------------------------------------------------------------------------
// hessian_bound
// ---------------------------------------------------------------------------

namespace {

double grid_sup_ratio(const ScalarField& field, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi, int cells) {
  const int n = field.dimension();
  const int points = cells + 1;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(points);

  std::vector<double> ratios(total);
  parallel_for(total, [&](std::size_t flat) {
    Eigen::VectorXd x(n);
    std::size_t idx = flat;
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(idx % points);
      idx /= points;
      x[i] = lo[i] + (hi[i] - lo[i]) * c / cells;
    }
    const Jet2 jet = jet2(field, x);
    ratios[flat] = jet.hessian.squaredNorm() / (1.0 + jet.gradient.squaredNorm());
  });
  double sup = 0.0;
  for (double v : ratios) sup = std::max(sup, v);
  return sup;
}

}  // namespace

HessianBoundReport hessian_bound(const ScalarField& field, const GridBox& domain,
                                 std::optional<double> candidate_c) {
  const int n = field.dimension();
  if (domain.lo.size() != n || domain.hi.size() != n)
    throw std::invalid_argument("hessian_bound: domain dimension mismatch");
  if (domain.cells_per_axis < 2) throw std::invalid_argument("hessian_bound: too few cells");

  const Eigen::VectorXd center = 0.5 * (domain.lo + domain.hi);
  const Eigen::VectorXd half = 0.5 * (domain.hi - domain.lo);

  HessianBoundReport report;
  report.stage_sups.push_back(grid_sup_ratio(field, domain.lo, domain.hi, domain.cells_per_axis));
  report.stage_sups.push_back(
      grid_sup_ratio(field, domain.lo, domain.hi, 2 * domain.cells_per_axis));
  report.stage_sups.push_back(grid_sup_ratio(field, center - 2.0 * half, center + 2.0 * half,
                                             domain.cells_per_axis));
  report.stage_sups.push_back(grid_sup_ratio(field, center - 4.0 * half, center + 4.0 * half,
                                             domain.cells_per_axis));
  report.sup_ratio = *std::max_element(report.stage_sups.begin(), report.stage_sups.end());

  const double base = std::max(report.stage_sups[0], report.stage_sups[1]);
  const double margin = 0.2;
  const bool refinement_stable =
      std::abs(report.stage_sups[1] - report.stage_sups[0]) <= margin * base + 1e-12;
  const bool dilation_stable = report.stage_sups[3] <= (1.0 + margin) * base + 1e-12;
  const bool dilation_growing = report.stage_sups[3] > 2.0 * base + 1e-12 &&
                                report.stage_sups[3] > report.stage_sups[2];

  if (refinement_stable && dilation_stable) {
    report.verdict = BoundVerdict::Bounded;
    report.c = report.sup_ratio;
  } else if (dilation_growing) {
    report.verdict = BoundVerdict::Unbounded;
  } else {
    report.verdict = BoundVerdict::Inconclusive;
  }
  if (candidate_c) report.candidate_ok = report.sup_ratio <= *candidate_c;
  return report;
}

// ---------------------------------------------------------------------------
// yau_flux_diagnostic
// ---------------------------------------------------------------------------

YauFluxReport yau_flux_diagnostic(const ScalarField& field, const Eigen::VectorXd& V, int r,
                                  const std::vector<double>& radius_schedule,
                                  int quadrature_order) {
  const int n = field.dimension();
  check_schedule(radius_schedule);
  if (V.size() != n) throw std::invalid_argument("yau_flux_diagnostic: V dimension mismatch");
  if (r < 0 || r > n - 1) throw std::invalid_argument("yau_flux_diagnostic: r out of range");
  if (n > 4) throw std::invalid_argument("yau_flux_diagnostic: quadrature mode supports n <= 4");

  // chart field X = P_r grad g and its metric norm, with the area weight sqrt(det G) = W
  auto x_chart = [&](const Eigen::VectorXd& x) {
    const SurfacePoint sp = surface_point(field, x);
    const SupportData support = support_data(sp.frame, V);
    const Eigen::VectorXd grad_g = gradients_fg(sp.frame, support).grad_g_chart;
    return std::pair<Eigen::VectorXd, Eigen::MatrixXd>(sp.stack.P[r] * grad_g, sp.frame.metric);
  };

  const SphereRule rule = sphere_rule(n, std::max(quadrature_order, 4));
  YauFluxReport report;
  report.radii = radius_schedule;

  double l1_acc = 0.0, prev_radius = 0.0;
  for (double R : radius_schedule) {
    // boundary flux and boundary L1 over the chart sphere |x| = R
    double flux = 0.0, bl1 = 0.0;
    for (std::size_t d = 0; d < rule.directions.size(); ++d) {
      const Eigen::VectorXd x = R * rule.directions[d];
      auto [Xc, G] = x_chart(x);
      const double area = rule.weights[d] * std::pow(R, n - 1);
      const double w = std::sqrt(G.determinant());
      flux += area * w * Xc.dot(rule.directions[d]);
      bl1 += area * w * std::sqrt(Xc.dot(G * Xc));
    }
    report.fluxes.push_back(flux);
    report.boundary_l1.push_back(bl1);

    l1_acc += integrate_shell(
        [&](const Eigen::VectorXd& x) {
          auto [Xc, G] = x_chart(x);
          return std::sqrt(G.determinant()) * std::sqrt(Xc.dot(G * Xc));
        },
        n, prev_radius, R, quadrature_order, rule);
    report.l1_norms.push_back(l1_acc);
    prev_radius = R;
  }

  const std::size_t m = report.l1_norms.size();
  const double last = report.l1_norms[m - 1];
  const double inc1 = report.l1_norms[m - 1] - report.l1_norms[m - 2];
  const double inc2 = report.l1_norms[m - 2] - report.l1_norms[m - 3];
  const bool l1_converging = (last <= 1e-12) ||
                             (inc1 <= 1e-6 * std::max(1.0, last) &&
                              inc2 <= 1e-6 * std::max(1.0, last));
  if (!l1_converging) {
    report.verdict = FluxVerdict::HypothesisNotMet;
    return report;
  }
  const double flux_scale = std::max(
      1e-12, std::abs(*std::max_element(report.fluxes.begin(), report.fluxes.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); })));
  const double last_flux = std::abs(report.fluxes[m - 1]);
  report.verdict = (last_flux <= 1e-6 * std::max(1.0, flux_scale))
                       ? FluxVerdict::Consistent
                       : FluxVerdict::Inconsistent;
  return report;
}

// ---------------------------------------------------------------------------
// nullity_report
// ---------------------------------------------------------------------------

int shape_rank(const Eigen::MatrixXd& shape, double tol_rank) {
  const Eigen::VectorXd sv = shape.jacobiSvd().singularValues();
  const double cutoff = tol_rank * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  return rank;
}

NullityReport nullity_report(const ScalarField& field,
                             const std::vector<Eigen::VectorXd>& samples, double tol_rank, int r) {
  const int n = field.dimension();
  if (!(tol_rank > 0.0)) throw std::invalid_argument("nullity_report: tol_rank must be positive");
  if (samples.empty()) throw std::invalid_argument("nullity_report: no samples");

  NullityReport report;
  report.nullity_lower_bound = n;
  for (const auto& p : samples) {
    const SurfacePoint sp = surface_point(field, p);
    const int rank = shape_rank(sp.frame.shape, tol_rank);

    NullitySample sample;
    sample.point = p;
    sample.rank = rank;
    sample.nullity = n - rank;

    // least j >= 1 with |S_k| <= tol for every k >= j
    const double tol_s = tol_rank * std::max(1.0, sp.stack.norm_bound);
    int cascade = n + 1;
    for (int j = n; j >= 1; --j) {
      if (std::abs(sp.stack.S[j]) <= tol_s)
        cascade = j;
      else
        break;
    }
    sample.cascade_index = cascade;

    // spec invariant: S_{r+1}, S_{r+2} small => all later S_j small and rank <= r
    if (std::abs(sp.stack.s(r + 1)) <= tol_rank && std::abs(sp.stack.s(r + 2)) <= tol_rank) {
      if (cascade > r + 1 || rank > r) report.cascade_consistent = false;
    }

    report.nullity_lower_bound = std::min(report.nullity_lower_bound, sample.nullity);
    report.samples.push_back(std::move(sample));
  }
  return report;
}

// ---------------------------------------------------------------------------
// bernstein_classify
// ---------------------------------------------------------------------------

BernsteinClass bernstein_rule(IntegrabilityVerdict l1, BoundVerdict hessian,
                              bool s_next_sign_constant, bool s_next2_sign_constant,
                              int min_nullity, int n, int r) {
  if (l1 != IntegrabilityVerdict::Converged || hessian != BoundVerdict::Bounded ||
      !s_next_sign_constant || !s_next2_sign_constant)
    return BernsteinClass::HypothesesNotMet;
  if (r == 0 && min_nullity == n) return BernsteinClass::HyperplaneOrthogonalToU;
  return BernsteinClass::NullityBoundOnly;
}

BernsteinReport bernstein_classify(const ScalarField& field, const Eigen::VectorXd& V,
                                   const BernsteinConfig& config) {
  const int n = field.dimension();
  if (V.size() != n) throw std::invalid_argument("bernstein_classify: V dimension mismatch");

  BernsteinReport report;
  report.l1 = l1_integrability(field, V, config.radii, config.quadrature_order, config.seed);

  GridBox box;
  box.lo = Eigen::VectorXd::Constant(n, -config.domain_half_width);
  box.hi = Eigen::VectorXd::Constant(n, config.domain_half_width);
  box.cells_per_axis = config.grid_cells;
  report.hessian = hessian_bound(field, box);

  // sign sampling of S_{r+1}, S_{r+2} and nullity at seeded random points
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uni(-config.sample_radius, config.sample_radius);
  std::vector<Eigen::VectorXd> points;
  int pos1 = 0, neg1 = 0, pos2 = 0, neg2 = 0, fpos = 0, fneg = 0;
  for (int s = 0; s < config.sign_samples; ++s) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = uni(rng);
    points.push_back(p);
    const SurfacePoint sp = surface_point(field, p);
    const double tol = 1e-12 * std::max(1.0, sp.stack.norm_bound);
    const double s1 = sp.stack.s(config.r + 1);
    const double s2 = sp.stack.s(config.r + 2);
    if (s1 > tol) ++pos1;
    if (s1 < -tol) ++neg1;
    if (s2 > tol) ++pos2;
    if (s2 < -tol) ++neg2;
    // f = (1 + <grad u, V>)/W is not sign-constant for general V; observed
    // sign changes are reported, never assumed away
    const int fs = support_data(sp.frame, V).f_sign;
    if (fs > 0) ++fpos;
    if (fs < 0) ++fneg;
  }
  report.sign_sample_count = config.sign_samples;
  report.s_next_sign_changes = std::min(pos1, neg1);
  report.s_next2_sign_changes = std::min(pos2, neg2);
  report.f_sign_changes = std::min(fpos, fneg);

  const NullityReport nullity = nullity_report(field, points, config.rank_tol, config.r);
  report.min_nullity = nullity.nullity_lower_bound;

  report.classification =
      bernstein_rule(report.l1.verdict, report.hessian.verdict, report.s_next_sign_changes == 0,
                     report.s_next2_sign_changes == 0, report.min_nullity, n, config.r);

  if (report.classification == BernsteinClass::HyperplaneOrthogonalToU) {
    report.hyperplane_normal.resize(n + 1);
    report.hyperplane_normal.head(n) = -V;
    report.hyperplane_normal[n] = 1.0;
    report.hyperplane_normal.normalize();
  }
  return report;
}

// ---------------------------------------------------------------------------
// p1_definiteness
// ---------------------------------------------------------------------------

P1Witness p1_definiteness(const Eigen::VectorXd& lambda, int orientation_sign) {
  if (lambda.size() == 0) throw std::invalid_argument("p1_definiteness: empty eigenvalue vector");
  if (orientation_sign != 1 && orientation_sign != -1)
    throw std::invalid_argument("p1_definiteness: orientation sign must be +1 or -1");
  if (lambda.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("p1_definiteness: eigenvalue vector must be nonzero");

  Eigen::VectorXd lam = orientation_sign * lambda;
  double s1 = lam.sum();
  const double s2 = 0.5 * (s1 * s1 - lam.squaredNorm());

  P1Witness witness;
  witness.flipped = false;
  if (s1 < 0.0) {
    lam = -lam;
    s1 = -s1;
    witness.flipped = true;
  } else if (s1 == 0.0 && s2 > 1e-12 * lam.squaredNorm()) {
    // S_1^2 = |lambda|^2 + 2 S_2 makes this impossible
    throw std::logic_error("p1_definiteness: S_1 = 0 with S_2 > 0");
  }
  witness.s1 = s1;
  witness.s2 = s2;

  witness.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lam.size(); ++i) {
    const double gap = s1 - lam[i];
    if (gap < witness.min_gap) {
      witness.min_gap = gap;
      witness.argmin = i;
    }
  }
  witness.positive_definite = witness.min_gap > 0.0;
  return witness;
}

}  // namespace curvlab
