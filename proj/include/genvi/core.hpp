#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "genvi/linalg.hpp"

namespace genvi {

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;
using MatrixField = std::function<Matrix(const Vec&)>;

/// Raised when a state would hold NaN or Inf. Integrators pushed into
/// ill-conditioned step sizes report blow-up through this.
class NonFiniteState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point (q, p) of phase space. Always dimension-consistent and finite.
class PhaseState {
 public:
  PhaseState(Vec q, Vec p);
  PhaseState(double q, double p) : PhaseState(Vec{q}, Vec{p}) {}

  const Vec& q() const { return q_; }
  const Vec& p() const { return p_; }
  std::size_t dim() const { return q_.size(); }

  /// Stacked (q, p) as one 2n-vector.
  Vec packed() const { return vec::concat(q_, p_); }
  static PhaseState unpack(const Vec& qp);

 private:
  Vec q_;
  Vec p_;
};

double max_abs_diff(const PhaseState& a, const PhaseState& b);

/// Mechanical system with H(q, p) = 1/2 p^T M^{-1} p + V(q).
class SeparableSystem {
 public:
  /// Without a Hessian, hessian_potential falls back to central differences
  /// of the gradient.
  SeparableSystem(Matrix mass, ScalarField potential, VectorField grad_potential, MatrixField hessian = {});

  std::size_t dim() const { return mass_.rows(); }
  const Matrix& mass() const { return mass_; }

  double potential(const Vec& q) const;
  Vec grad_potential(const Vec& q) const;
  Matrix hessian_potential(const Vec& q) const;
  bool has_analytic_hessian() const { return static_cast<bool>(hess_); }
  /// a(q) = -M^{-1} grad V(q)
  Vec acceleration(const Vec& q) const;

  double kinetic_from_momentum(const Vec& p) const;
  double energy(const PhaseState& s) const;
  /// L(q, v) = 1/2 v^T M v - V(q)
  double lagrangian(const Vec& q, const Vec& v) const;

  Vec velocity_to_momentum(const Vec& q, const Vec& v) const;
  Vec momentum_to_velocity(const Vec& q, const Vec& p) const;

 private:
  void check_dim(const Vec& x, const char* what) const;

  Matrix mass_;
  Cholesky chol_;
  ScalarField potential_;
  VectorField grad_;
  MatrixField hess_;
};

double energy(const SeparableSystem& sys, const PhaseState& s);
Vec velocity_to_momentum(const SeparableSystem& sys, const Vec& q, const Vec& v);
Vec momentum_to_velocity(const SeparableSystem& sys, const Vec& q, const Vec& p);

/// Largest relative deviation between the supplied gradient and central
/// differences of the potential, componentwise, relative to max(1, |grad_i|).
double gradient_fd_defect(const SeparableSystem& sys, const Vec& q, double delta = 1e-5);

/// H = H_A + epsilon * V_B(q), where the A-part is exactly solvable.
class PerturbedSystem {
 public:
  PerturbedSystem(SeparableSystem base, ScalarField perturbation, VectorField grad_perturbation,
                  double epsilon);

  const SeparableSystem& base() const { return base_; }
  double epsilon() const { return epsilon_; }

  double perturbation(const Vec& q) const { return perturbation_(q); }
  Vec grad_perturbation(const Vec& q) const { return grad_perturbation_(q); }

  double base_energy(const PhaseState& s) const { return base_.energy(s); }
  double energy(const PhaseState& s) const;

  /// The full Hamiltonian as one separable system.
  SeparableSystem combined() const;

 private:
  SeparableSystem base_;
  ScalarField perturbation_;
  VectorField grad_perturbation_;
  double epsilon_;
};

namespace systems {

/// n = 1, M = 1, V = q^2 / 2.
SeparableSystem harmonic_oscillator();
/// V = q^2 / 2 + (epsilon / 3) q^3.
SeparableSystem cubic_oscillator(double epsilon);
/// Unit harmonic oscillator perturbed by V_B = q^3 / 3.
PerturbedSystem perturbed_cubic_oscillator(double epsilon);

}  // namespace systems

}  // namespace genvi
