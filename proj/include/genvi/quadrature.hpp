#pragma once

#include <string>
#include <vector>

namespace genvi {

/// Weights b_i and nodes c_i on [0, 1]. `order` counts exactly integrated
/// monomial degrees: degrees 0 .. order-1 are exact.
struct QuadratureRule {
  std::vector<double> weights;
  std::vector<double> nodes;
  int order = 0;
  std::string name;

  std::size_t size() const { return nodes.size(); }
  /// Throws std::invalid_argument on length mismatch, nodes outside [0,1]
  /// or weights not summing to one.
  void validate() const;
  /// sum_i b_i f(c_i)
  template <class F>
  double apply(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

namespace quadrature {

QuadratureRule rectangle_initial();  // b = (1), c = (0)
QuadratureRule rectangle_end();      // b = (1), c = (1)
QuadratureRule trapezoid();          // b = (1/2, 1/2), c = (0, 1)
QuadratureRule midpoint();           // b = (1), c = (1/2)
/// n-point Gauss-Legendre mapped to [0, 1]; exact through degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Largest |rule(x^k) - 1/(k+1)| for k = 0 .. degree.
double monomial_error(const QuadratureRule& rule, int degree);

}  // namespace quadrature

}  // namespace genvi
