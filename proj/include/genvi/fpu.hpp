#pragma once

// Fermi-Pasta-Ulam chain: m stiff linear springs of frequency omega
// alternating with soft quartic springs, ends fixed, unit masses.
//
//   H = 1/2 |p|^2 + omega^2/4 sum_{i=1}^m (q_{2i} - q_{2i-1})^2
//       + quartic * sum_{i=0}^m (q_{2i+1} - q_{2i})^4,     q_0 = q_{2m+1} = 0

#include <vector>

#include "genvi/core.hpp"
#include "genvi/genfunc.hpp"

namespace genvi {

class FpuSystem {
 public:
  FpuSystem(int m = 3, double omega = 50.0, double quartic = 1.0);

  int m() const { return m_; }
  double omega() const { return omega_; }
  double quartic() const { return quartic_; }
  std::size_t dim() const { return static_cast<std::size_t>(2 * m_); }

  /// Stiffness K of the linear part, V_lin = q^T K q / 2.
  const Matrix& stiffness() const { return k_; }

  double potential(const Vec& q) const;
  Vec grad_potential(const Vec& q) const;
  /// Quartic (slow) part only.
  double slow_potential(const Vec& q) const;
  Vec grad_slow(const Vec& q) const;
  Matrix hessian(const Vec& q) const;

 private:
  void check_dim(const Vec& q) const;

  int m_;
  double omega_;
  double quartic_;
  Matrix k_;
};

struct OscillatoryEnergy {
  std::vector<double> per_spring;
  double total = 0.0;
};

double fpu_energy(const FpuSystem& sys, const PhaseState& s);
/// |p|^2/2 + q^T K q / 2: the energy without the quartic springs.
double fpu_linear_energy(const FpuSystem& sys, const PhaseState& s);

/// x_j = (q_{2j} - q_{2j-1})/sqrt2, y_j likewise for p; I_j = (y_j^2 + omega^2 x_j^2)/2.
OscillatoryEnergy oscillatory_energy(const FpuSystem& sys, const PhaseState& s);

/// First stiff spring excited: slow mode 1 at displacement 1 and velocity 1,
/// stiff mode 1 at displacement 1/omega and velocity 1, all else at rest.
PhaseState fpu_initial_state(const FpuSystem& sys);

SeparableSystem as_separable(const FpuSystem& sys);

/// Half kick with the quartic force, implicit midpoint on the linear stiff
/// system, half kick with the quartic force.
PhaseState imex_step(const FpuSystem& sys, const PhaseState& s, double h);
OneStepMap imex_map(const FpuSystem& sys);

}  // namespace genvi
