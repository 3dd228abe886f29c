#include <doctest.h>

#include <random>
#include <thread>

#include "curvlab/expr.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("parse: paraboloid text form") {
  const ScalarField u = parse_field("x1^2 + x2^2", 2);
  CHECK(u.dimension() == 2);
  CHECK(u(vec({0, 0})) == 0.0);
  CHECK(u(vec({1, 2})) == 5.0);
  CHECK(u.same_tree(paraboloid_field(2)));
}

TEST_CASE("parse: product family instance") {
  const ScalarField u = parse_field("(x1^2)*(0.5*x2 + 1.5*x3)", 3);
  CHECK(u(vec({1, 1, 1})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(u(vec({2, 1, 0})) == doctest::Approx(2.0).epsilon(1e-15));
  // same values as the builtin with r = 1, alpha = (0.5, 1.5)
  const ScalarField b = product_degenerate_field(3, 1, vec({0.5, 1.5}));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd p = oracle::random_point(3, 2.0, rng);
    CHECK(u(p) == doctest::Approx(b(p)).epsilon(1e-14));
  }
}

TEST_CASE("parse: errors carry positions") {
  CHECK_THROWS_AS(parse_field("x3 + 1", 2), ParseError);
  try {
    parse_field("x3 + 1", 2);
  } catch (const ParseError& e) {
    CHECK(e.position == 0);
  }
  CHECK_THROWS_AS(parse_field("", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1 +", 2), ParseError);
  CHECK_THROWS_AS(parse_field("(x1", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1 ++ x2", 2), ParseError);  // '+' has no operand
  CHECK_THROWS_AS(parse_field("sin(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x0 + 1", 2), ParseError);
}

TEST_CASE("grammar excludes division and fractional powers") {
  CHECK_THROWS_AS(parse_field("x1 / x2", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1^-1", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1^1.5", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1^x2", 2), ParseError);
}

TEST_CASE("precedence: power binds tighter than unary minus, minus tighter than product") {
  const ScalarField a = parse_field("-x1^2", 1);
  CHECK(a(vec({3})) == -9.0);
  const ScalarField b = parse_field("-x1*x2", 2);
  CHECK(b(vec({2, 5})) == -10.0);
  const ScalarField c = parse_field("1 - x1^2 * 2", 1);
  CHECK(c(vec({2})) == 1.0 - 8.0);
  const ScalarField d = parse_field("2^3", 1);
  CHECK(d(vec({0})) == 8.0);
}

TEST_CASE("builtin: affine zero field") {
  const ScalarField u = affine_field(Eigen::VectorXd::Zero(3), 0.0);
  CHECK(u(vec({1, 2, 3})) == 0.0);
  CHECK(u(vec({0, 0, 0})) == 0.0);
}

TEST_CASE("builtin: product-degenerate evaluation and validation") {
  const ScalarField u = product_degenerate_field(3, 1, vec({1, 1}));
  CHECK(u(vec({1, 1, 1})) == 2.0);
  CHECK_THROWS_AS(product_degenerate_field(3, 1, vec({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(product_degenerate_field(3, 0, vec({1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(product_degenerate_field(3, 3, vec({})), std::invalid_argument);
}

TEST_CASE("builtin: affine-plus-gaussian value") {
  const ScalarField u = affine_gaussian_field(vec({3}));
  CHECK(u(vec({0})) == 1.0);  // 3*0 + e^0
  CHECK(u(vec({1})) == doctest::Approx(3.0 + std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("evaluate: dimension mismatch") {
  const ScalarField u = paraboloid_field(2);
  CHECK_THROWS_AS(u(vec({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("print/parse round trip is evaluation-identical on 100 random points") {
  std::mt19937_64 rng(42);
  std::vector<ScalarField> fields;
  fields.push_back(paraboloid_field(3));
  fields.push_back(affine_field(vec({1.5, -2.25, 0.0}), 0.75));
  fields.push_back(affine_gaussian_field(vec({0.5, 1.0, -1.0})));
  fields.push_back(product_degenerate_field(3, 1, vec({0.5, 1.5})));
  fields.push_back(parse_field("exp(x1 - x2^3) * (2.5 + x3)^2 - x1*x2*x3", 3));

  for (const auto& u : fields) {
    const ScalarField reparsed = parse_field(u.to_string(), u.dimension());
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd p = oracle::random_point(u.dimension(), 3.0, rng);
      CHECK(u(p) == reparsed(p));  // tolerance 0
    }
  }
}

TEST_CASE("evaluate agrees with the independent tree-walking oracle") {
  std::mt19937_64 rng(4242);
  std::vector<ScalarField> fields;
  fields.push_back(paraboloid_field(4));
  fields.push_back(affine_field(vec({1, 2, 3, 4}), -1.5));
  fields.push_back(affine_gaussian_field(vec({-0.5, 0.25})));
  fields.push_back(product_degenerate_field(4, 2, vec({1.0, -2.0})));

  for (const auto& u : fields) {
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd p = oracle::random_point(u.dimension(), 3.0, rng);
      CHECK(u(p) == oracle::eval(u, p));
    }
  }
}

TEST_CASE("ASTs are safe to share across threads") {
  const ScalarField u = affine_gaussian_field(vec({1.0, -1.0}));
  std::vector<double> results(200);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < 200; i += 4) {
        Eigen::VectorXd p(2);
        p << 0.01 * i, -0.02 * i;
        results[i] = u(p);
      }
    });
  for (auto& th : pool) th.join();
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd p(2);
    p << 0.01 * i, -0.02 * i;
    CHECK(results[i] == u(p));
  }
}
