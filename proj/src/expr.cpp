#include "curvlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace curvlab {

namespace {

void collect_checks(const ExprNode& node, int n) {
  switch (node.kind) {
    case NodeKind::Variable:
      if (node.index < 1 || node.index > n)
        throw std::invalid_argument("variable index x" + std::to_string(node.index) +
                                    " out of range for dimension " + std::to_string(n));
      break;
    case NodeKind::Dot:
      if (node.coeffs.size() != n)
        throw std::invalid_argument("dot coefficient vector has wrong dimension");
      break;
    case NodeKind::Power:
      if (node.exponent < 0) throw std::invalid_argument("negative exponent");
      break;
    default:
      break;
  }
  for (const auto& k : node.kids) collect_checks(*k, n);
}

double eval_node(const ExprNode& node, const Eigen::VectorXd& p) {
  switch (node.kind) {
    case NodeKind::Constant:
      return node.value;
    case NodeKind::Variable:
      return p[node.index - 1];
    case NodeKind::Sum: {
      double v = eval_node(*node.kids[0], p);
      for (std::size_t i = 1; i < node.kids.size(); ++i) v += eval_node(*node.kids[i], p);
      return v;
    }
    case NodeKind::Product: {
      double v = eval_node(*node.kids[0], p);
      for (std::size_t i = 1; i < node.kids.size(); ++i) v *= eval_node(*node.kids[i], p);
      return v;
    }
    case NodeKind::Power: {
      const double b = eval_node(*node.kids[0], p);
      double v = 1.0;
      for (int i = 0; i < node.exponent; ++i) v *= b;
      return v;
    }
    case NodeKind::Exp:
      return std::exp(eval_node(*node.kids[0], p));
    case NodeKind::Dot: {
      double v = node.coeffs[0] * p[0];
      for (int i = 1; i < node.coeffs.size(); ++i) v += node.coeffs[i] * p[i];
      return v;
    }
  }
  throw std::logic_error("unreachable node kind");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::Constant:
      out += fmt_double(node.value);
      break;
    case NodeKind::Variable:
      out += "x" + std::to_string(node.index);
      break;
    case NodeKind::Sum: {
      out += "(";
      for (std::size_t i = 0; i < node.kids.size(); ++i) {
        if (i) out += " + ";
        print_node(*node.kids[i], out);
      }
      out += ")";
      break;
    }
    case NodeKind::Product: {
      out += "(";
      for (std::size_t i = 0; i < node.kids.size(); ++i) {
        if (i) out += " * ";
        print_node(*node.kids[i], out);
      }
      out += ")";
      break;
    }
    case NodeKind::Power: {
      out += "(";
      print_node(*node.kids[0], out);
      out += "^" + std::to_string(node.exponent);
      out += ")";
      break;
    }
    case NodeKind::Exp:
      out += "exp(";
      print_node(*node.kids[0], out);
      out += ")";
      break;
    case NodeKind::Dot: {
      // printed as an explicit sum of products; evaluation order matches Dot's
      out += "(";
      for (int i = 0; i < node.coeffs.size(); ++i) {
        if (i) out += " + ";
        out += "(" + fmt_double(node.coeffs[i]) + " * x" + std::to_string(i + 1) + ")";
      }
      out += ")";
      break;
    }
  }
}

bool same_node(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value;
    case NodeKind::Variable:
      return a.index == b.index;
    case NodeKind::Power:
      if (a.exponent != b.exponent) return false;
      break;
    case NodeKind::Dot:
      return a.coeffs.size() == b.coeffs.size() && a.coeffs == b.coeffs;
    default:
      break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_node(*a.kids[i], *b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) throw ParseError(pos_, "empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (!at_end()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    std::vector<NodePtr> terms;
    terms.push_back(parse_term());
    for (;;) {
      skip_ws();
      if (consume('+')) {
        terms.push_back(parse_term());
      } else if (consume('-')) {
        terms.push_back(negate(parse_term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : make_sum(std::move(terms));
  }

  NodePtr parse_term() {
    std::vector<NodePtr> factors;
    factors.push_back(parse_unary());
    while (consume('*')) factors.push_back(parse_unary());
    return factors.size() == 1 ? factors[0] : make_product(std::move(factors));
  }

  NodePtr parse_unary() {
    skip_ws();
    if (consume('-')) return negate(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (consume('^')) {
      skip_ws();
      const std::size_t start = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError(pos_, "exponent must be a non-negative integer");
      long k = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        k = k * 10 + (text_[pos_] - '0');
        if (k > 1000) throw ParseError(start, "exponent too large");
        ++pos_;
      }
      if (peek() == '.' || peek() == 'e' || peek() == 'E')
        throw ParseError(pos_, "exponent must be a non-negative integer");
      return make_power(std::move(base), static_cast<int>(k));
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (at_end()) throw ParseError(pos_, "unexpected end of expression");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      skip_ws();
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(pos_, "malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_constant(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string_view id = text_.substr(start, pos_ - start);
    if (id == "exp") {
      skip_ws();
      if (!consume('(')) throw ParseError(pos_, "expected '(' after exp");
      NodePtr arg = parse_expr();
      skip_ws();
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      return make_exp(std::move(arg));
    }
    if (id.size() >= 2 && id[0] == 'x') {
      int idx = 0;
      for (std::size_t i = 1; i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i])))
          throw ParseError(start, "unknown identifier '" + std::string(id) + "'");
        idx = idx * 10 + (id[i] - '0');
        if (idx > 1'000'000) throw ParseError(start, "variable index too large");
      }
      if (idx < 1 || idx > n_)
        throw ParseError(start, "variable index x" + std::to_string(idx) +
                                    " out of range for dimension " + std::to_string(n_));
      return make_variable(idx);
    }
    throw ParseError(start, "unknown identifier '" + std::string(id) + "'");
  }

  static NodePtr negate(NodePtr e) {
    if (e->kind == NodeKind::Constant) return make_constant(-e->value);
    return make_product({make_constant(-1.0), std::move(e)});
  }
};

}  // namespace

// ---------------------------------------------------------------------------

ScalarField::ScalarField(int dimension, NodePtr root) : n_(dimension), root_(std::move(root)) {
  if (n_ < 1) throw std::invalid_argument("dimension must be positive");
  if (!root_) throw std::invalid_argument("null expression root");
  collect_checks(*root_, n_);
}

double ScalarField::operator()(const Eigen::VectorXd& p) const {
  if (p.size() != n_)
    throw std::invalid_argument("point dimension " + std::to_string(p.size()) +
                                " does not match field dimension " + std::to_string(n_));
  return eval_node(*root_, p);
}

std::string ScalarField::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool ScalarField::same_tree(const ScalarField& other) const {
  return n_ == other.n_ && same_node(*root_, *other.root_);
}

ScalarField parse_field(std::string_view text, int dimension) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  Parser parser(text, dimension);
  return ScalarField(dimension, parser.parse());
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

NodePtr make_constant(double c) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Constant;
  node->value = c;
  return node;
}

NodePtr make_variable(int index) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Variable;
  node->index = index;
  return node;
}

// Children are kept as given (no flattening): evaluation order of a node is
// then exactly the left-to-right fold of its own children, which makes
// jet/evaluation linearity bit-exact and printing round-trip to the same tree.
static NodePtr make_nary(NodeKind kind, std::vector<NodePtr> kids) {
  if (kids.size() == 1) return kids[0];
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->kids = std::move(kids);
  return node;
}

NodePtr make_sum(std::vector<NodePtr> kids) { return make_nary(NodeKind::Sum, std::move(kids)); }
NodePtr make_product(std::vector<NodePtr> kids) {
  return make_nary(NodeKind::Product, std::move(kids));
}

NodePtr make_power(NodePtr base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Power;
  node->exponent = exponent;
  node->kids.push_back(std::move(base));
  return node;
}

NodePtr make_exp(NodePtr arg) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Exp;
  node->kids.push_back(std::move(arg));
  return node;
}

NodePtr make_dot(const Eigen::VectorXd& coeffs) {
  auto node = std::make_shared<ExprNode>();
  node->kind = NodeKind::Dot;
  node->coeffs = coeffs;
  return node;
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

ScalarField paraboloid_field(int n) {
  std::vector<NodePtr> sq;
  for (int i = 1; i <= n; ++i) sq.push_back(make_power(make_variable(i), 2));
  return ScalarField(n, n == 1 ? sq[0] : make_sum(std::move(sq)));
}

ScalarField affine_field(const Eigen::VectorXd& V, double b) {
  const int n = static_cast<int>(V.size());
  if (n < 1) throw std::invalid_argument("affine: V must be non-empty");
  return ScalarField(n, make_sum({make_dot(V), make_constant(b)}));
}

ScalarField affine_gaussian_field(const Eigen::VectorXd& V) {
  const int n = static_cast<int>(V.size());
  if (n < 1) throw std::invalid_argument("affine-plus-gaussian: V must be non-empty");
  std::vector<NodePtr> sq;
  for (int i = 1; i <= n; ++i) sq.push_back(make_power(make_variable(i), 2));
  NodePtr norm2 = n == 1 ? sq[0] : make_sum(std::move(sq));
  NodePtr gauss = make_exp(make_product({make_constant(-1.0), std::move(norm2)}));
  return ScalarField(n, make_sum({make_dot(V), std::move(gauss)}));
}

ScalarField product_degenerate_field(int n, int r, const Eigen::VectorXd& alpha) {
  if (r < 1 || r > n - 1)
    throw std::invalid_argument("product-degenerate: r must satisfy 1 <= r <= n-1");
  if (alpha.size() != n - r)
    throw std::invalid_argument("product-degenerate: alpha must have n-r entries");
  if (alpha.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("product-degenerate: alpha must not be all zero");
  std::vector<NodePtr> sq;
  for (int i = 1; i <= r; ++i) sq.push_back(make_power(make_variable(i), 2));
  NodePtr quad = r == 1 ? sq[0] : make_sum(std::move(sq));
  std::vector<NodePtr> lin;
  for (int j = 0; j < n - r; ++j)
    lin.push_back(make_product({make_constant(alpha[j]), make_variable(r + 1 + j)}));
  NodePtr linear = lin.size() == 1 ? lin[0] : make_sum(std::move(lin));
  return ScalarField(n, make_product({std::move(quad), std::move(linear)}));
}

ScalarField builtin_field(BuiltinFamily family, int n, const BuiltinParams& params) {
  switch (family) {
    case BuiltinFamily::Paraboloid:
      return paraboloid_field(n);
    case BuiltinFamily::Affine: {
      Eigen::VectorXd V = params.V.size() ? params.V : Eigen::VectorXd::Zero(n);
      if (V.size() != n) throw std::invalid_argument("affine: V dimension mismatch");
      return affine_field(V, params.offset);
    }
    case BuiltinFamily::AffineGaussian: {
      Eigen::VectorXd V = params.V.size() ? params.V : Eigen::VectorXd::Zero(n);
      if (V.size() != n) throw std::invalid_argument("affine-plus-gaussian: V dimension mismatch");
      return affine_gaussian_field(V);
    }
    case BuiltinFamily::ProductDegenerate:
      return product_degenerate_field(n, params.r, params.alpha);
  }
  throw std::logic_error("unreachable builtin family");
}

BuiltinFamily builtin_family_from_name(std::string_view name) {
  if (name == "paraboloid") return BuiltinFamily::Paraboloid;
  if (name == "affine") return BuiltinFamily::Affine;
  if (name == "affine-gaussian" || name == "affine-plus-gaussian")
    return BuiltinFamily::AffineGaussian;
  if (name == "product-degenerate") return BuiltinFamily::ProductDegenerate;
  throw std::invalid_argument("unknown builtin family '" + std::string(name) + "'");
}

}  // namespace curvlab
