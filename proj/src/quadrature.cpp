#include "curvlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace curvlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  Eigen::VectorXd x(m), w(m);
  // Newton iteration on P_m from the Chebyshev-like initial guess
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[m - 1 - i] = w[i];
  }
  return {x, w};
}

SphereRule sphere_rule(int n, int order) {
  if (order < 2) order = 2;
  SphereRule rule;
  switch (n) {
    case 1: {
      rule.directions = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
      rule.weights = {1.0, 1.0};
      break;
    }
    case 2: {
      const int m = 4 * order;  // trapezoid on the periodic angle
      for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * kPi * k / m;
        Eigen::VectorXd d(2);
        d << std::cos(phi), std::sin(phi);
        rule.directions.push_back(d);
        rule.weights.push_back(2.0 * kPi / m);
      }
      break;
    }
    case 3: {
      auto [xc, wc] = gauss_legendre(order);  // c = cos(theta)
      const int m = 2 * order;
      for (int i = 0; i < order; ++i) {
        const double c = xc[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int k = 0; k < m; ++k) {
          const double phi = 2.0 * kPi * k / m;
          Eigen::VectorXd d(3);
          d << s * std::cos(phi), s * std::sin(phi), c;
          rule.directions.push_back(d);
          rule.weights.push_back(wc[i] * 2.0 * kPi / m);
        }
      }
      break;
    }
    case 4: {
      // psi in [0, pi] with sin^2 weight, c = cos(theta) in [-1,1], phi periodic
      auto [xp, wp] = gauss_legendre(order);
      auto [xc, wc] = gauss_legendre(order);
      const int m = 2 * order;
      for (int a = 0; a < order; ++a) {
        const double psi = kPi * (xp[a] + 1.0) / 2.0;
        const double wpsi = wp[a] * kPi / 2.0 * std::sin(psi) * std::sin(psi);
        for (int b = 0; b < order; ++b) {
          const double c = xc[b];
          const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
          for (int k = 0; k < m; ++k) {
            const double phi = 2.0 * kPi * k / m;
            Eigen::VectorXd d(4);
            d << std::sin(psi) * s * std::cos(phi), std::sin(psi) * s * std::sin(phi),
                std::sin(psi) * c, std::cos(psi);
            rule.directions.push_back(d);
            rule.weights.push_back(wpsi * wc[b] * 2.0 * kPi / m);
          }
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("sphere_rule: supported ambient dimensions are 1..4");
  }
  return rule;
}

double integrate_shell(const std::function<double(const Eigen::VectorXd&)>& F, int n, double r0,
                       double r1, int radial_order, const SphereRule& rule) {
  if (!(r1 > r0) || r0 < 0.0) throw std::invalid_argument("integrate_shell: bad radii");
  const int panels = std::max(1, static_cast<int>(std::ceil((r1 - r0) / 0.5)));
  auto [xr, wr] = gauss_legendre(std::max(radial_order, 4));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = r0 + (r1 - r0) * p / panels;
    const double b = r0 + (r1 - r0) * (p + 1) / panels;
    for (int i = 0; i < xr.size(); ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * xr[i];
      const double wrad = 0.5 * (b - a) * wr[i] * std::pow(r, n - 1);
      double ang = 0.0;
      for (std::size_t d = 0; d < rule.directions.size(); ++d)
        ang += rule.weights[d] * F(r * rule.directions[d]);
      total += wrad * ang;
    }
  }
  return total;
}

double ball_volume(int n, double R) {
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(R, n);
}

double integrate_shell_mc(const std::function<double(const Eigen::VectorXd&)>& F, int n, double r0,
                          double r1, int sample_count, std::uint64_t seed) {
  if (!(r1 > r0) || r0 < 0.0) throw std::invalid_argument("integrate_shell_mc: bad radii");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double vol = ball_volume(n, r1) - ball_volume(n, r0);
  double acc = 0.0;
  Eigen::VectorXd d(n);
  for (int s = 0; s < sample_count; ++s) {
    do {
      for (int i = 0; i < n; ++i) d[i] = gauss(rng);
    } while (d.norm() == 0.0);
    d.normalize();
    // radius with density proportional to r^{n-1} on [r0, r1]
    const double u = uni(rng);
    const double rn = std::pow(r0, n) + u * (std::pow(r1, n) - std::pow(r0, n));
    const double r = std::pow(rn, 1.0 / n);
    acc += F(r * d);
  }
  return vol * acc / sample_count;
}

}  // namespace curvlab
