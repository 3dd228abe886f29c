#include <doctest.h>

#include <random>

#include "curvlab/frame.hpp"
#include "curvlab/newton.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {

// Eq-style polynomial expansion P_r = sum_j (-1)^j S_{r-j} A^j, built directly.
Eigen::MatrixXd polynomial_pr(const Eigen::MatrixXd& A, const Eigen::VectorXd& S, int r) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Aj = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j <= r; ++j) {
    acc += ((j % 2) ? -1.0 : 1.0) * S[r - j] * Aj;
    Aj = Aj * A;
  }
  return acc;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

}  // namespace

TEST_CASE("newton_stack: diagonal example") {
  Eigen::VectorXd lam(3);
  lam << 1, 2, 3;
  const NewtonStack stack = newton_stack(lam.asDiagonal(), lam);
  CHECK(stack.S[0] == 1.0);
  CHECK(stack.S[1] == 6.0);
  CHECK(stack.S[2] == 11.0);
  CHECK(stack.S[3] == 6.0);

  Eigen::VectorXd p1(3), p2(3);
  p1 << 5, 4, 3;
  p2 << 6, 3, 2;
  CHECK((stack.P[1] - Eigen::MatrixXd(p1.asDiagonal())).norm() == 0.0);
  CHECK((stack.P[2] - Eigen::MatrixXd(p2.asDiagonal())).norm() == 0.0);

  const Eigen::MatrixXd A = lam.asDiagonal();
  CHECK((A * stack.P[1]).trace() == 22.0);           // (r+1) S_2 = 22
  CHECK((A * A * stack.P[1]).trace() == 48.0);       // S_1 S_2 - 3 S_3 = 48
  CHECK(stack.P[3].norm() == 0.0);                   // Cayley-Hamilton
}

TEST_CASE("newton_stack: zero operator") {
  const int n = 4;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  const NewtonStack stack = newton_stack(A, Eigen::VectorXd::Zero(n));
  CHECK((stack.P[0] - Eigen::MatrixXd::Identity(n, n)).norm() == 0.0);
  for (int r = 1; r <= n; ++r) {
    CHECK(stack.S[r] == 0.0);
    CHECK(stack.P[r].norm() == 0.0);
  }
}

TEST_CASE("newton_stack: recursion matches the polynomial expansion (random 5x5)") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd A = oracle::random_symmetric(5, rng);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const NewtonStack stack = newton_stack(A, es.eigenvalues());
    for (int r = 0; r <= 5; ++r) {
      const Eigen::MatrixXd poly = polynomial_pr(A, stack.S, r);
      CHECK((stack.P[r] - poly).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("newton_stack: S_r from eigenvalues matches the Faddeev-LeVerrier oracle") {
  std::mt19937_64 rng(78);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd A = oracle::random_symmetric(n, rng);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const NewtonStack stack = newton_stack(A, es.eigenvalues());
      const Eigen::VectorXd e = oracle::esym_faddeev_leverrier(A);
      for (int r = 0; r <= n; ++r)
        CHECK(stack.S[r] == doctest::Approx(e[r]).epsilon(1e-9));
    }
  }
}

TEST_CASE("newton_stack: trace identities and P_n = 0 over random operators") {
  std::mt19937_64 rng(79);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd A = oracle::random_symmetric(n, rng);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const NewtonStack stack = newton_stack(A, es.eigenvalues());
      const double scale = std::max(1.0, stack.norm_bound);
      for (int r = 0; r <= n; ++r) {
        CHECK(std::abs(stack.P[r].trace() - (n - r) * stack.S[r]) < 1e-9 * scale);
        CHECK(std::abs((A * stack.P[r]).trace() - (r + 1) * stack.s(r + 1)) < 1e-9 * scale);
        CHECK(std::abs((A * A * stack.P[r]).trace() -
                       (stack.S[1] * stack.s(r + 1) - (r + 2) * stack.s(r + 2))) <
              1e-9 * scale * scale);
      }
      CHECK(stack.P[n].cwiseAbs().maxCoeff() < 1e-9 * scale);
    }
  }
}

TEST_CASE("newton_stack invariants over 200 random jets, n in 2..8") {
  // A = G^{-1} B from random jets is not symmetric, only G-self-adjoint; the
  // stack identities must hold there too since the eigenvalues stay real
  std::mt19937_64 rng(81);
  int count = 0;
  while (count < 200) {
    for (int n = 2; n <= 8 && count < 200; ++n, ++count) {
      Jet2 jet;
      jet.point = oracle::random_point(n, 2.0, rng);
      jet.value = 0.0;
      jet.gradient = oracle::random_point(n, 2.0, rng);
      jet.hessian = 2.0 * oracle::random_symmetric(n, rng);
      const GraphFrame frame = graph_frame(jet);
      const NewtonStack stack = newton_stack(frame.shape, frame.principal_curvatures);
      const Eigen::MatrixXd& A = frame.shape;
      const double scale = std::max(1.0, stack.norm_bound);

      // recursion vs polynomial expansion
      Eigen::MatrixXd Aj = Eigen::MatrixXd::Identity(n, n);
      std::vector<Eigen::MatrixXd> powers = {Aj};
      for (int j = 1; j <= n; ++j) powers.push_back(powers.back() * A);
      for (int r = 0; r <= n; ++r) {
        Eigen::MatrixXd poly = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j <= r; ++j)
          poly += ((j % 2) ? -1.0 : 1.0) * stack.S[r - j] * powers[j];
        CHECK((stack.P[r] - poly).cwiseAbs().maxCoeff() < 1e-10 * scale);
      }

      for (int r = 0; r <= n; ++r) {
        CHECK(std::abs(stack.P[r].trace() - (n - r) * stack.S[r]) < 1e-9 * scale);
        CHECK(std::abs((A * stack.P[r]).trace() - (r + 1) * stack.s(r + 1)) < 1e-9 * scale);
        CHECK(std::abs((A * A * stack.P[r]).trace() -
                       (stack.S[1] * stack.s(r + 1) - (r + 2) * stack.s(r + 2))) <
              1e-9 * scale * scale);
      }
      CHECK(stack.P[n].cwiseAbs().maxCoeff() < 1e-9 * scale);
      // S_r from the eigenvalues equals the Faddeev-LeVerrier route on A
      const Eigen::VectorXd e = oracle::esym_faddeev_leverrier(A);
      for (int r = 0; r <= n; ++r)
        CHECK(stack.S[r] == doctest::Approx(e[r]).epsilon(1e-8));
    }
  }
}

TEST_CASE("norm bound: |P_r v| <= normBound |v| and the crude binomial bound") {
  std::mt19937_64 rng(80);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd A = oracle::random_symmetric(n, rng);
      A /= A.jacobiSvd().singularValues()[0];  // ||A|| = 1
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const NewtonStack stack = newton_stack(A, es.eigenvalues());

      for (int r = 0; r <= n; ++r) {
        // crude bound: sum_j binom(n, r-j) n^{j/2} dominates ||P_r|| for ||A|| <= 1
        double crude = 0.0;
        for (int j = 0; j <= r; ++j) crude += binom(n, r - j) * std::pow(n, j / 2.0);
        CHECK(stack.P[r].jacobiSvd().singularValues()[0] <= crude + 1e-9);

        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        CHECK((stack.P[r] * v).norm() <= stack.norm_bound * v.norm() + 1e-12);
      }
    }
  }
}
