/// @file expr.hpp
/// @brief Scalar-field expressions u: R^n -> R: AST, parser, printer, builtin families.
///
/// The grammar is deliberately closed under smoothness: +, -, *, integer powers,
/// exp(.), parentheses, decimal constants and variables x1..xn. There is no
/// division and no fractional power, so every parsed field is entire and its
/// jets exist everywhere. See docs/grammar.md.
#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curvlab {

enum class NodeKind {
  Constant,   // literal double
  Variable,   // x_i, 1-based index
  Sum,        // n-ary, evaluated left to right
  Product,    // n-ary, evaluated left to right
  Power,      // single child, non-negative integer exponent
  Exp,        // single child
  Dot         // <coeffs, x>, constant coefficient vector over all n variables
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double value = 0.0;              // Constant
  int index = 0;                   // Variable (1-based)
  int exponent = 0;                // Power
  std::vector<NodePtr> kids;       // Sum/Product (>=2), Power/Exp (1)
  Eigen::VectorXd coeffs;          // Dot
};

/// Thrown on malformed expression text; `position` is the 0-based byte offset.
struct ParseError : std::runtime_error {
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Immutable scalar field u: R^n -> R. Safe to share across threads.
class ScalarField {
 public:
  ScalarField(int dimension, NodePtr root);

  int dimension() const { return n_; }
  const ExprNode& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }

  /// Exact recursive evaluation. Throws std::invalid_argument on dimension mismatch.
  double operator()(const Eigen::VectorXd& p) const;

  /// Canonical fully parenthesized text form; reparsing yields an
  /// evaluation-identical tree (bit-exact on every point).
  std::string to_string() const;

  /// Structural tree equality (same kinds, values, indices, children).
  bool same_tree(const ScalarField& other) const;

 private:
  int n_;
  NodePtr root_;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse `text` over variables x1..xn.
/// Precedence: ^  >  unary minus  >  *  >  binary +/-.
ScalarField parse_field(std::string_view text, int dimension);

// ---------------------------------------------------------------------------
// Node constructors (used by builtins and tests)
// ---------------------------------------------------------------------------

NodePtr make_constant(double c);
NodePtr make_variable(int index);
NodePtr make_sum(std::vector<NodePtr> kids);
NodePtr make_product(std::vector<NodePtr> kids);
NodePtr make_power(NodePtr base, int exponent);
NodePtr make_exp(NodePtr arg);
NodePtr make_dot(const Eigen::VectorXd& coeffs);

// ---------------------------------------------------------------------------
// Builtin families
// ---------------------------------------------------------------------------

enum class BuiltinFamily {
  ProductDegenerate,  // (x_1^2+...+x_r^2)(alpha_{r+1} x_{r+1}+...+alpha_n x_n)
  Paraboloid,         // x_1^2+...+x_n^2
  Affine,             // <V, x> + b
  AffineGaussian      // <V, x> + exp(-|x|^2)
};

struct BuiltinParams {
  int r = 0;                 // ProductDegenerate: number of squared variables
  Eigen::VectorXd alpha;     // ProductDegenerate: n-r linear coefficients
  Eigen::VectorXd V;         // Affine / AffineGaussian
  double offset = 0.0;       // Affine: b
};

/// Construct a named family; throws std::invalid_argument on bad parameters
/// (alpha all zero, r outside [1, n-1], V dimension mismatch).
ScalarField builtin_field(BuiltinFamily family, int n, const BuiltinParams& params = {});

ScalarField paraboloid_field(int n);
ScalarField affine_field(const Eigen::VectorXd& V, double b = 0.0);
ScalarField affine_gaussian_field(const Eigen::VectorXd& V);
ScalarField product_degenerate_field(int n, int r, const Eigen::VectorXd& alpha);

/// Parse a family name used by the CLI ("paraboloid", "affine", ...).
BuiltinFamily builtin_family_from_name(std::string_view name);

}  // namespace curvlab
