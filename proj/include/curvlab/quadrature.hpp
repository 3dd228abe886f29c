/// @file quadrature.hpp
/// @brief Gauss-Legendre rules, sphere product rules, radial-shell integration
///        and seeded Monte Carlo for moderate dimensions.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace curvlab {

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m);

/// Quadrature rule on the unit sphere S^{n-1} (ambient dimension n, 1 <= n <= 4):
/// directions with weights summing to |S^{n-1}|. `order` controls the angular
/// resolution. n = 1 is the two-point set {+1, -1}.
struct SphereRule {
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n, int order);

/// Integral of F over the shell {r0 <= |x| <= r1} in R^n via the sphere rule
/// tensored with panelized Gauss-Legendre in radius.
double integrate_shell(const std::function<double(const Eigen::VectorXd&)>& F, int n, double r0,
                       double r1, int radial_order, const SphereRule& rule);

double ball_volume(int n, double R);

/// Seeded uniform Monte Carlo over the shell {r0 <= |x| <= r1}, for 5 <= n <= 8.
double integrate_shell_mc(const std::function<double(const Eigen::VectorXd&)>& F, int n, double r0,
                          double r1, int sample_count, std::uint64_t seed);

}  // namespace curvlab
