#include "genvi/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace genvi {

namespace {

Cholesky checked_cholesky(const Matrix& m) {
  if (!m.square() || m.rows() == 0) throw DimensionMismatch("SeparableSystem: mass matrix must be square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double scale = std::max({1.0, std::abs(m(i, j)), std::abs(m(j, i))});
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("SeparableSystem: mass matrix is not symmetric");
    }
  try {
    return Cholesky(m);
  } catch (const SingularMatrix&) {
    throw std::invalid_argument("SeparableSystem: mass matrix is not positive definite");
  }
}

}  // namespace

PhaseState::PhaseState(Vec q, Vec p) : q_(std::move(q)), p_(std::move(p)) {
  if (q_.size() != p_.size()) throw DimensionMismatch("PhaseState: q and p differ in length");
  if (!vec::all_finite(q_) || !vec::all_finite(p_)) throw NonFiniteState("PhaseState: non-finite entry");
}

PhaseState PhaseState::unpack(const Vec& qp) {
  if (qp.size() % 2 != 0) throw DimensionMismatch("PhaseState::unpack: odd length");
  const auto n = static_cast<std::ptrdiff_t>(qp.size() / 2);
  return PhaseState(Vec(qp.begin(), qp.begin() + n), Vec(qp.begin() + n, qp.end()));
}

double max_abs_diff(const PhaseState& a, const PhaseState& b) {
  return std::max(vec::max_abs_diff(a.q(), b.q()), vec::max_abs_diff(a.p(), b.p()));
}

SeparableSystem::SeparableSystem(Matrix mass, ScalarField potential, VectorField grad_potential, MatrixField hessian)
    : mass_(std::move(mass)),
      chol_(checked_cholesky(mass_)),
      potential_(std::move(potential)),
      grad_(std::move(grad_potential)),
      hess_(std::move(hessian)) {
  if (!potential_ || !grad_) throw std::invalid_argument("SeparableSystem: potential callables required");
}

void SeparableSystem::check_dim(const Vec& x, const char* what) const {
  if (x.size() != dim())
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim()) + ", got " +
                            std::to_string(x.size()));
}

double SeparableSystem::potential(const Vec& q) const {
  check_dim(q, "potential");
  return potential_(q);
}

Vec SeparableSystem::grad_potential(const Vec& q) const {
  check_dim(q, "grad_potential");
  Vec g = grad_(q);
  check_dim(g, "grad_potential result");
  return g;
}

Matrix SeparableSystem::hessian_potential(const Vec& q) const {
  check_dim(q, "hessian_potential");
  const std::size_t n = dim();
  if (hess_) {
    Matrix h = hess_(q);
    if (h.rows() != n || h.cols() != n) throw DimensionMismatch("hessian_potential: result has the wrong shape");
    return h;
  }
  Matrix h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = 1e-5 * std::max(1.0, std::abs(q[j]));
    Vec qp = q, qm = q;
    qp[j] += d;
    qm[j] -= d;
    const Vec gp = grad_potential(qp), gm = grad_potential(qm);
    for (std::size_t i = 0; i < n; ++i) h(i, j) = (gp[i] - gm[i]) / (2.0 * d);
  }
  // symmetrize away the difference noise
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) h(i, j) = h(j, i) = 0.5 * (h(i, j) + h(j, i));
  return h;
}

Vec SeparableSystem::acceleration(const Vec& q) const { return vec::scaled(chol_.solve(grad_potential(q)), -1.0); }

double SeparableSystem::kinetic_from_momentum(const Vec& p) const {
  check_dim(p, "kinetic_from_momentum");
  return 0.5 * vec::dot(p, chol_.solve(p));
}

double SeparableSystem::energy(const PhaseState& s) const {
  check_dim(s.q(), "energy");
  return kinetic_from_momentum(s.p()) + potential(s.q());
}

double SeparableSystem::lagrangian(const Vec& q, const Vec& v) const {
  check_dim(v, "lagrangian");
  return 0.5 * vec::dot(v, mass_ * v) - potential(q);
}

Vec SeparableSystem::velocity_to_momentum(const Vec& q, const Vec& v) const {
  check_dim(q, "velocity_to_momentum");
  check_dim(v, "velocity_to_momentum");
  return mass_ * v;
}

Vec SeparableSystem::momentum_to_velocity(const Vec& q, const Vec& p) const {
  check_dim(q, "momentum_to_velocity");
  check_dim(p, "momentum_to_velocity");
  return chol_.solve(p);
}

double energy(const SeparableSystem& sys, const PhaseState& s) { return sys.energy(s); }

Vec velocity_to_momentum(const SeparableSystem& sys, const Vec& q, const Vec& v) {
  return sys.velocity_to_momentum(q, v);
}

Vec momentum_to_velocity(const SeparableSystem& sys, const Vec& q, const Vec& p) {
  return sys.momentum_to_velocity(q, p);
}

double gradient_fd_defect(const SeparableSystem& sys, const Vec& q, double delta) {
  const Vec g = sys.grad_potential(q);
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    Vec qp = q, qm = q;
    qp[i] += delta;
    qm[i] -= delta;
    const double fd = (sys.potential(qp) - sys.potential(qm)) / (2.0 * delta);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

PerturbedSystem::PerturbedSystem(SeparableSystem base, ScalarField perturbation, VectorField grad_perturbation,
                                 double epsilon)
    : base_(std::move(base)),
      perturbation_(std::move(perturbation)),
      grad_perturbation_(std::move(grad_perturbation)),
      epsilon_(epsilon) {
  if (!(epsilon_ >= 0.0)) throw std::invalid_argument("PerturbedSystem: epsilon must be >= 0");
  if (!perturbation_ || !grad_perturbation_) throw std::invalid_argument("PerturbedSystem: callables required");
}

double PerturbedSystem::energy(const PhaseState& s) const {
  const double e = base_.energy(s);
  if (epsilon_ == 0.0) return e;
  return e + epsilon_ * perturbation_(s.q());
}

SeparableSystem PerturbedSystem::combined() const {
  const SeparableSystem base = base_;
  const ScalarField vb = perturbation_;
  const VectorField gb = grad_perturbation_;
  const double eps = epsilon_;
  return SeparableSystem(
      base_.mass(), [base, vb, eps](const Vec& q) { return base.potential(q) + eps * vb(q); },
      [base, gb, eps](const Vec& q) { return vec::axpy(eps, gb(q), base.grad_potential(q)); });
}

namespace systems {

SeparableSystem harmonic_oscillator() {
  return SeparableSystem(
      Matrix::identity(1), [](const Vec& q) { return 0.5 * q[0] * q[0]; }, [](const Vec& q) { return Vec{q[0]}; },
      [](const Vec&) { return Matrix{{1.0}}; });
}

SeparableSystem cubic_oscillator(double epsilon) {
  return SeparableSystem(
      Matrix::identity(1),
      [epsilon](const Vec& q) { return 0.5 * q[0] * q[0] + epsilon / 3.0 * q[0] * q[0] * q[0]; },
      [epsilon](const Vec& q) { return Vec{q[0] + epsilon * q[0] * q[0]}; },
      [epsilon](const Vec& q) { return Matrix{{1.0 + 2.0 * epsilon * q[0]}}; });
}

PerturbedSystem perturbed_cubic_oscillator(double epsilon) {
  return PerturbedSystem(
      harmonic_oscillator(), [](const Vec& q) { return q[0] * q[0] * q[0] / 3.0; },
      [](const Vec& q) { return Vec{q[0] * q[0]}; }, epsilon);
}

}  // namespace systems

}  // namespace genvi
