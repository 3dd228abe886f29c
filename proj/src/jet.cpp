#include "curvlab/jet.hpp"

#include <cmath>

namespace curvlab {

namespace {

struct Triple {
  double v;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;  // upper triangle is authoritative
};

Triple zero_triple(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

// Only the upper triangle (i <= j) of h is maintained during propagation.
Triple propagate(const ExprNode& node, const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  switch (node.kind) {
    case NodeKind::Constant: {
      Triple t = zero_triple(n);
      t.v = node.value;
      return t;
    }
    case NodeKind::Variable: {
      Triple t = zero_triple(n);
      t.v = p[node.index - 1];
      t.g[node.index - 1] = 1.0;
      return t;
    }
    case NodeKind::Dot: {
      Triple t = zero_triple(n);
      t.v = node.coeffs[0] * p[0];
      for (int i = 1; i < n; ++i) t.v += node.coeffs[i] * p[i];
      t.g = node.coeffs;
      return t;
    }
    case NodeKind::Sum: {
      Triple acc = propagate(*node.kids[0], p);
      for (std::size_t k = 1; k < node.kids.size(); ++k) {
        Triple t = propagate(*node.kids[k], p);
        acc.v += t.v;
        acc.g += t.g;
        acc.h += t.h;
      }
      return acc;
    }
    case NodeKind::Product: {
      Triple acc = propagate(*node.kids[0], p);
      for (std::size_t k = 1; k < node.kids.size(); ++k) {
        Triple t = propagate(*node.kids[k], p);
        Triple out = zero_triple(n);
        out.v = acc.v * t.v;
        out.g = acc.v * t.g + t.v * acc.g;
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j)
            out.h(i, j) = acc.v * t.h(i, j) + t.v * acc.h(i, j) +
                          acc.g[i] * t.g[j] + t.g[i] * acc.g[j];
        acc = std::move(out);
      }
      return acc;
    }
    case NodeKind::Power: {
      const int k = node.exponent;
      Triple b = propagate(*node.kids[0], p);
      Triple out = zero_triple(n);
      if (k == 0) {
        out.v = 1.0;
        return out;
      }
      if (k == 1) return b;
      // b^(k-2) computed first so b = 0 never hits a negative power
      double pk2 = 1.0;
      for (int i = 0; i < k - 2; ++i) pk2 *= b.v;
      const double pk1 = pk2 * b.v;
      out.v = pk1 * b.v;
      out.g = static_cast<double>(k) * pk1 * b.g;
      const double c2 = static_cast<double>(k) * (k - 1) * pk2;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          out.h(i, j) = k * pk1 * b.h(i, j) + c2 * b.g[i] * b.g[j];
      return out;
    }
    case NodeKind::Exp: {
      Triple a = propagate(*node.kids[0], p);
      Triple out = zero_triple(n);
      const double e = std::exp(a.v);
      out.v = e;
      out.g = e * a.g;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out.h(i, j) = e * (a.h(i, j) + a.g[i] * a.g[j]);
      return out;
    }
  }
  throw std::logic_error("unreachable node kind");
}

}  // namespace

Jet2 jet2(const ScalarField& field, const Eigen::VectorXd& p) {
  if (p.size() != field.dimension())
    throw std::invalid_argument("jet2: point dimension does not match field dimension");
  Triple t = propagate(field.root(), p);
  Jet2 jet;
  jet.point = p;
  jet.value = t.v;
  jet.gradient = std::move(t.g);
  const int n = static_cast<int>(p.size());
  jet.hessian.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      jet.hessian(i, j) = t.h(i, j);
      jet.hessian(j, i) = t.h(i, j);
    }
  return jet;
}

Jet2 fd_jet2(const ScalarField& field, const Eigen::VectorXd& p, double h) {
  if (p.size() != field.dimension())
    throw std::invalid_argument("fd_jet2: point dimension does not match field dimension");
  if (!(h > 0.0)) throw std::invalid_argument("fd_jet2: step must be positive");
  const int n = static_cast<int>(p.size());
  Jet2 jet;
  jet.point = p;
  jet.value = field(p);
  jet.gradient.resize(n);
  jet.hessian.resize(n, n);
  Eigen::VectorXd q = p;
  for (int i = 0; i < n; ++i) {
    q[i] = p[i] + h;
    const double up = field(q);
    q[i] = p[i] - h;
    const double um = field(q);
    q[i] = p[i];
    jet.gradient[i] = (up - um) / (2.0 * h);
    jet.hessian(i, i) = (up - 2.0 * jet.value + um) / (h * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      q[i] = p[i] + h; q[j] = p[j] + h;
      const double upp = field(q);
      q[j] = p[j] - h;
      const double upm = field(q);
      q[i] = p[i] - h; q[j] = p[j] + h;
      const double ump = field(q);
      q[j] = p[j] - h;
      const double umm = field(q);
      q[i] = p[i]; q[j] = p[j];
      const double hij = (upp - upm - ump + umm) / (4.0 * h * h);
      jet.hessian(i, j) = hij;
      jet.hessian(j, i) = hij;
    }
  return jet;
}

}  // namespace curvlab
