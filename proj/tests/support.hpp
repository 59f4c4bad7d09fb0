#pragma once

// Test-only helpers and independent oracles. Nothing here calls the
// library's solvers or quadrature.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "genvi/core.hpp"
#include "genvi/genfunc.hpp"

namespace testing {

using genvi::Matrix;
using genvi::PhaseState;
using genvi::SeparableSystem;
using genvi::Vec;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline PhaseState random_state(Rng& rng, std::size_t n = 1, double scale = 1.0) {
  Vec q(n), p(n);
  for (auto& x : q) x = scale * uniform(rng);
  for (auto& x : p) x = scale * uniform(rng);
  return PhaseState(q, p);
}

inline std::vector<PhaseState> random_states(Rng& rng, int count, std::size_t n = 1, double scale = 1.0) {
  std::vector<PhaseState> out;
  for (int i = 0; i < count; ++i) out.push_back(random_state(rng, n, scale));
  return out;
}

/// Two degrees of freedom, non-diagonal mass, non-quadratic coupled potential.
inline SeparableSystem coupled_system() {
  return SeparableSystem(
      Matrix{{2.0, 0.3}, {0.3, 1.0}},
      [](const Vec& q) {
        return 0.5 * (q[0] * q[0] + 2.0 * q[1] * q[1]) + 0.1 * q[0] * q[1] * q[1] + 0.05 * std::pow(q[0], 4);
      },
      [](const Vec& q) {
        return Vec{q[0] + 0.1 * q[1] * q[1] + 0.2 * std::pow(q[0], 3), 2.0 * q[1] + 0.2 * q[0] * q[1]};
      });
}

inline Vec minv(const SeparableSystem& sys, const Vec& p) { return sys.momentum_to_velocity(Vec(p.size()), p); }

inline Vec axpy(double a, const Vec& x, const Vec& y) {
  Vec out = y;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
  return out;
}

inline double max_diff(const PhaseState& a, const PhaseState& b) { return genvi::max_abs_diff(a, b); }

// Methods read off the quadrature tables; implicit ones by plain fixed-point
// iteration (a contraction for the step sizes used in tests).

inline PhaseState table_euler_a(const SeparableSystem& sys, const PhaseState& s, double h) {
  const Vec p1 = axpy(-h, sys.grad_potential(s.q()), s.p());
  return PhaseState(axpy(h, minv(sys, p1), s.q()), p1);
}

inline PhaseState table_euler_b(const SeparableSystem& sys, const PhaseState& s, double h) {
  const Vec q1 = axpy(h, minv(sys, s.p()), s.q());
  return PhaseState(q1, axpy(-h, sys.grad_potential(q1), s.p()));
}

inline Vec fixed_point(const std::function<Vec(const Vec&)>& g, Vec x) {
  for (int it = 0; it < 500; ++it) {
    const Vec y = g(x);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(y[i] - x[i]));
    x = y;
    if (d == 0.0) break;
  }
  return x;
}

/// initial-point rule, Type III: q1 = q0 + h M^-1 p1, p1 = p0 - h gradV(q1 - h M^-1 p0)
inline PhaseState table_initial_type3(const SeparableSystem& sys, const PhaseState& s, double h) {
  const Vec back = minv(sys, s.p());
  auto p1_of = [&](const Vec& q1) { return axpy(-h, sys.grad_potential(axpy(-h, back, q1)), s.p()); };
  const Vec q1 = fixed_point([&](const Vec& q1) { return axpy(h, minv(sys, p1_of(q1)), s.q()); }, s.q());
  return PhaseState(q1, p1_of(q1));
}

/// end-point rule, Type II: q1 = q0 + h M^-1 p0, p1 = p0 - h gradV(q0 + h M^-1 p1)
inline PhaseState table_end_type2(const SeparableSystem& sys, const PhaseState& s, double h) {
  const Vec p1 = fixed_point(
      [&](const Vec& p1) { return axpy(-h, sys.grad_potential(axpy(h, minv(sys, p1), s.q())), s.p()); }, s.p());
  return PhaseState(axpy(h, minv(sys, s.p()), s.q()), p1);
}

/// q1 = q0 + h M^-1 p0 - h^2/2 M^-1 gradV(q0),
/// p1 = p0 - h/2 [gradV(q0) + gradV(q0 + h M^-1 p1)]
inline PhaseState table_h_tvi_trapezoid(const SeparableSystem& sys, const PhaseState& s, double h) {
  const Vec g0 = sys.grad_potential(s.q());
  const Vec q1 = axpy(-0.5 * h * h, minv(sys, g0), axpy(h, minv(sys, s.p()), s.q()));
  const Vec p1 = fixed_point(
      [&](const Vec& p1) {
        const Vec ge = sys.grad_potential(axpy(h, minv(sys, p1), s.q()));
        Vec out = s.p();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= 0.5 * h * (g0[i] + ge[i]);
        return out;
      },
      s.p());
  return PhaseState(q1, p1);
}

/// Non-symplectic control: (q + h M^-1 p, p - h gradV(q)).
inline genvi::OneStepMap explicit_euler(const SeparableSystem& sys) {
  return genvi::OneStepMap("explicit_euler", [sys](const PhaseState& s, double h) {
    return PhaseState(axpy(h, minv(sys, s.p()), s.q()), axpy(-h, sys.grad_potential(s.q()), s.p()));
  });
}

// Averaged integrators for the unit oscillator with V_B = q^3/3, solved by
// dense bracketing plus bisection with 10^4-point composite midpoint
// integrals.

inline double midpoint_integral(const std::function<double(double)>& f, double h, int n = 10000) {
  const double dt = h / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f((i + 0.5) * dt);
  return acc * dt;
}

inline double bracket_and_bisect(const std::function<double(double)>& g, double center, double radius = 1.0,
                                 int samples = 400) {
  // scan outward from the centre so the root nearest the guess wins
  const double dx = radius / samples;
  double a = center, ga = g(a);
  if (ga == 0.0) return a;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int k = 1; k <= samples && !found; ++k) {
    for (const double sgn : {1.0, -1.0}) {
      const double x0 = center + sgn * (k - 1) * dx, x1 = center + sgn * k * dx;
      const double g0 = g(x0), g1 = g(x1);
      if ((g0 <= 0.0) != (g1 <= 0.0)) {
        lo = std::min(x0, x1);
        hi = std::max(x0, x1);
        found = true;
        break;
      }
    }
  }
  if (!found) return std::nan("");
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm <= 0.0) == (glo <= 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline PhaseState oracle_averaged_lagrangian(double q0, double p0, double h, double eps) {
  const double s = std::sin(h), c = std::cos(h);
  auto i1 = [&](double q1) {
    const double b = (q1 - q0 * c) / s;
    return midpoint_integral(
        [&](double t) {
          const double qa = q0 * std::cos(t) + b * std::sin(t);
          return qa * qa * std::sin(h - t) / s;
        },
        h);
  };
  const double q1 = bracket_and_bisect([&](double q1) { return p0 - eps * i1(q1) - (q1 - q0 * c) / s; },
                                       q0 * c + p0 * s);
  const double b = (q1 - q0 * c) / s;
  const double i2 = midpoint_integral(
      [&](double t) {
        const double qa = q0 * std::cos(t) + b * std::sin(t);
        return qa * qa * std::sin(t) / s;
      },
      h);
  return PhaseState(q1, (q1 * c - q0) / s - eps * i2);
}

inline PhaseState oracle_averaged_hamiltonian(double q0, double p0, double h, double eps) {
  const double s = std::sin(h), c = std::cos(h);
  auto i1 = [&](double p1) {
    const double b = (p1 + q0 * s) / c;
    return midpoint_integral(
        [&](double t) {
          const double qa = q0 * std::cos(t) + b * std::sin(t);
          return qa * qa * std::cos(h - t) / c;
        },
        h);
  };
  const double p1 = bracket_and_bisect([&](double p1) { return p0 - eps * i1(p1) - (p1 + q0 * s) / c; },
                                       p0 * c - q0 * s);
  const double b = (p1 + q0 * s) / c;
  const double i2 = midpoint_integral(
      [&](double t) {
        const double qa = q0 * std::cos(t) + b * std::sin(t);
        return qa * qa * std::sin(t) / c;
      },
      h);
  return PhaseState(p1 * s / c + q0 / c + eps * i2, p1);
}

}  // namespace testing
