#include "genvi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace genvi {

void QuadratureRule::validate() const {
  if (nodes.empty() || nodes.size() != weights.size())
    throw std::invalid_argument("QuadratureRule: need equally many weights and nodes");
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] >= 0.0 && nodes[i] <= 1.0)) throw std::invalid_argument("QuadratureRule: node outside [0,1]");
    if (!std::isfinite(weights[i])) throw std::invalid_argument("QuadratureRule: non-finite weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-13) throw std::invalid_argument("QuadratureRule: weights must sum to 1");
  if (order < 1) throw std::invalid_argument("QuadratureRule: order must be >= 1");
}

namespace quadrature {

QuadratureRule rectangle_initial() { return {{1.0}, {0.0}, 1, "rectangle_initial"}; }
QuadratureRule rectangle_end() { return {{1.0}, {1.0}, 1, "rectangle_end"}; }
QuadratureRule trapezoid() { return {{0.5, 0.5}, {0.0, 1.0}, 2, "trapezoid"}; }
QuadratureRule midpoint() { return {{1.0}, {0.5}, 2, "midpoint"}; }

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: need 1 <= n <= 64");
  QuadratureRule rule;
  rule.order = 2 * n;
  rule.name = "gauss_legendre_" + std::to_string(n);
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    // ascending on [0,1]
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.5;
  return rule;
}

double monomial_error(const QuadratureRule& rule, int degree) {
  double worst = 0.0;
  for (int k = 0; k <= degree; ++k) {
    const double approx = rule.apply([k](double c) { return std::pow(c, k); });
    worst = std::max(worst, std::abs(approx - 1.0 / (k + 1)));
  }
  return worst;
}

}  // namespace quadrature

}  // namespace genvi
