#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/numerics/sym_eig.hpp"

namespace dipole::numerics {

enum class QuadratureKind {
  hermite,               // weight e^{-x^2} on the real line
  generalized_laguerre,  // weight t^alpha e^{-t} on (0, inf)
  legendre,              // weight 1 on [-1, 1]
};

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::hermite;
  int order = 0;
  double alpha = 0.0;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss rule from the eigen-decomposition of the Jacobi matrix of the weight's
/// three-term recurrence (Golub-Welsch). Only the first eigenvector components are
/// tracked, which is all the weights need.
inline QuadratureRule gauss_rule(QuadratureKind kind, int order, double alpha = 0.0) {
  if (order < 1 || order > 512) throw config_error("gauss_rule: order must lie in [1, 512]");
  const auto n = static_cast<std::size_t>(order);
  std::vector<double> diag(n, 0.0), off(n, 0.0);
  double mu0 = 0.0;
  switch (kind) {
    case QuadratureKind::hermite:
      mu0 = std::sqrt(std::numbers::pi);
      for (std::size_t k = 1; k < n; ++k) off[k] = std::sqrt(0.5 * k);
      break;
    case QuadratureKind::generalized_laguerre:
      if (!(alpha > -1.0)) throw config_error("gauss_rule: Laguerre exponent must exceed -1");
      mu0 = std::tgamma(alpha + 1.0);
      for (std::size_t k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
      for (std::size_t k = 1; k < n; ++k) off[k] = std::sqrt(k * (k + alpha));
      break;
    case QuadratureKind::legendre:
      mu0 = 2.0;
      for (std::size_t k = 1; k < n; ++k) off[k] = k / std::sqrt(4.0 * k * k - 1.0);
      break;
    default:
      throw config_error("gauss_rule: unsupported quadrature kind");
  }

  std::vector<double> first(n, 0.0);
  first[0] = 1.0;
  detail::tridiagonal_ql(diag, off, first, 1);

  std::vector<std::size_t> order_idx(n);
  std::iota(order_idx.begin(), order_idx.end(), 0);
  std::sort(order_idx.begin(), order_idx.end(), [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });

  QuadratureRule rule;
  rule.kind = kind;
  rule.order = order;
  rule.alpha = kind == QuadratureKind::generalized_laguerre ? alpha : 0.0;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = diag[order_idx[i]];
    rule.weights[i] = mu0 * first[order_idx[i]] * first[order_idx[i]];
  }
  if (kind != QuadratureKind::generalized_laguerre) {
    // Symmetric weight: enforce exact mirror symmetry of nodes and weights.
    for (std::size_t i = 0; i < n / 2; ++i) {
      const std::size_t j = n - 1 - i;
      const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

/// Composite Gauss-Legendre nodes/weights over consecutive panels [edges[i], edges[i+1]].
inline QuadratureRule composite_legendre(const std::vector<double>& edges, int points_per_panel) {
  const QuadratureRule base = gauss_rule(QuadratureKind::legendre, points_per_panel);
  QuadratureRule rule;
  rule.kind = QuadratureKind::legendre;
  rule.order = points_per_panel;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace dipole::numerics
