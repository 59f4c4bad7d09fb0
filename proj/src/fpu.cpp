#include "genvi/fpu.hpp"

#include <cmath>
#include <stdexcept>

namespace genvi {

namespace {

// q padded with the fixed ends; index k of the result is q_k (1-based),
// with q_0 = q_{2m+1} = 0.
double padded(const Vec& q, std::size_t k) { return (k == 0 || k > q.size()) ? 0.0 : q[k - 1]; }

}  // namespace

FpuSystem::FpuSystem(int m, double omega, double quartic) : m_(m), omega_(omega), quartic_(quartic), k_(1, 1) {
  if (m_ < 1) throw std::invalid_argument("FpuSystem: m must be >= 1");
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw std::invalid_argument("FpuSystem: omega must be > 0");
  if (!std::isfinite(quartic_)) throw std::invalid_argument("FpuSystem: quartic coefficient must be finite");
  const std::size_t n = dim();
  k_ = Matrix(n, n);
  const double w2 = 0.5 * omega_ * omega_;
  for (std::size_t i = 0; i < n; i += 2) {
    k_(i, i) += w2;
    k_(i + 1, i + 1) += w2;
    k_(i, i + 1) -= w2;
    k_(i + 1, i) -= w2;
  }
}

void FpuSystem::check_dim(const Vec& q) const {
  if (q.size() != dim()) throw DimensionMismatch("FpuSystem: expected dimension " + std::to_string(dim()));
}

double FpuSystem::slow_potential(const Vec& q) const {
  check_dim(q);
  double acc = 0.0;
  for (int i = 0; i <= m_; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    const double d = padded(q, k + 1) - padded(q, k);
    acc += d * d * d * d;
  }
  return quartic_ * acc;
}

Vec FpuSystem::grad_slow(const Vec& q) const {
  check_dim(q);
  Vec g(dim(), 0.0);
  for (int i = 0; i <= m_; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    const double d = padded(q, k + 1) - padded(q, k);
    const double f = 4.0 * quartic_ * d * d * d;
    if (k + 1 <= dim()) g[k] += f;      // d/dq_{k+1}
    if (k >= 1) g[k - 1] -= f;          // d/dq_k
  }
  return g;
}

Matrix FpuSystem::hessian(const Vec& q) const {
  check_dim(q);
  Matrix hs = k_;
  for (int i = 0; i <= m_; ++i) {
    const auto k = static_cast<std::size_t>(2 * i);
    const double d = padded(q, k + 1) - padded(q, k);
    const double c = 12.0 * quartic_ * d * d;
    // spring between q_k and q_{k+1} (1-based), i.e. entries k-1 and k
    const bool lo = k >= 1, hi = k + 1 <= dim();
    if (hi) hs(k, k) += c;
    if (lo) hs(k - 1, k - 1) += c;
    if (lo && hi) {
      hs(k, k - 1) -= c;
      hs(k - 1, k) -= c;
    }
  }
  return hs;
}

double FpuSystem::potential(const Vec& q) const {
  check_dim(q);
  return 0.5 * vec::dot(q, k_ * q) + slow_potential(q);
}

Vec FpuSystem::grad_potential(const Vec& q) const { return vec::add(k_ * q, grad_slow(q)); }

double fpu_energy(const FpuSystem& sys, const PhaseState& s) {
  return 0.5 * vec::dot(s.p(), s.p()) + sys.potential(s.q());
}

double fpu_linear_energy(const FpuSystem& sys, const PhaseState& s) {
  if (s.dim() != sys.dim()) throw DimensionMismatch("fpu_linear_energy: dimension mismatch");
  return 0.5 * vec::dot(s.p(), s.p()) + 0.5 * vec::dot(s.q(), sys.stiffness() * s.q());
}

OscillatoryEnergy oscillatory_energy(const FpuSystem& sys, const PhaseState& s) {
  if (s.dim() != sys.dim()) throw DimensionMismatch("oscillatory_energy: dimension mismatch");
  OscillatoryEnergy out;
  const double w2 = sys.omega() * sys.omega();
  for (std::size_t j = 0; j < s.dim(); j += 2) {
    const double x = (s.q()[j + 1] - s.q()[j]) / std::sqrt(2.0);
    const double y = (s.p()[j + 1] - s.p()[j]) / std::sqrt(2.0);
    const double e = 0.5 * (y * y + w2 * x * x);
    out.per_spring.push_back(e);
    out.total += e;
  }
  return out;
}

PhaseState fpu_initial_state(const FpuSystem& sys) {
  Vec q(sys.dim(), 0.0), p(sys.dim(), 0.0);
  // slow (mean) coordinates x0, y0 and stiff (difference) coordinates x1, y1
  const double x0 = 1.0, y0 = 1.0, x1 = 1.0 / sys.omega(), y1 = 1.0;
  const double r = std::sqrt(2.0);
  q[0] = (x0 - x1) / r;
  q[1] = (x0 + x1) / r;
  p[0] = (y0 - y1) / r;
  p[1] = (y0 + y1) / r;
  return PhaseState(std::move(q), std::move(p));
}

SeparableSystem as_separable(const FpuSystem& sys) {
  return SeparableSystem(
      Matrix::identity(sys.dim()), [sys](const Vec& q) { return sys.potential(q); },
      [sys](const Vec& q) { return sys.grad_potential(q); }, [sys](const Vec& q) { return sys.hessian(q); });
}

PhaseState imex_step(const FpuSystem& sys, const PhaseState& s, double h) {
  if (s.dim() != sys.dim()) throw DimensionMismatch("imex_step: dimension mismatch");
  if (!std::isfinite(h)) throw std::invalid_argument("imex_step: step size must be finite");
  const Matrix& k = sys.stiffness();
  const std::size_t n = sys.dim();
  const Vec p = vec::axpy(-0.5 * h, sys.grad_slow(s.q()), s.p());

  // (I + h^2/4 K) q1 = (I - h^2/4 K) q + h p
  Matrix a = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) += 0.25 * h * h * k(i, j);
  const Vec kq = k * s.q();
  const Vec rhs = vec::axpy(h, p, vec::axpy(-0.25 * h * h, kq, s.q()));
  Vec q1 = Cholesky(a).solve(rhs);

  Vec p1 = vec::axpy(-0.5 * h, vec::add(kq, k * q1), p);
  p1 = vec::axpy(-0.5 * h, sys.grad_slow(q1), p1);
  return PhaseState(std::move(q1), std::move(p1));
}

OneStepMap imex_map(const FpuSystem& sys) {
  return OneStepMap("imex", [sys](const PhaseState& s, double h) { return imex_step(sys, s, h); });
}

}  // namespace genvi
