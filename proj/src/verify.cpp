#include "genvi/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "genvi/averaged.hpp"

namespace genvi {

PhaseState integrate(const OneStepMap& map, const PhaseState& s0, double h, long long steps) {
  PhaseState s = s0;
  for (long long k = 0; k < steps; ++k) s = map(s, h);
  return s;
}

long long step_count(double T, double h) {
  if (!(T > 0.0) || !(h > 0.0)) throw std::invalid_argument("step_count: T and h must be positive");
  return std::llround(T / h);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderResult convergence_order(const OneStepMap& map, const ReferenceFlow& reference, const PhaseState& s0, double T,
                              std::vector<double> h_list) {
  if (h_list.size() < 3) throw std::invalid_argument("convergence_order: need at least three step sizes");
  if (!(T > 0.0)) throw std::invalid_argument("convergence_order: T must be positive");
  std::sort(h_list.begin(), h_list.end());
  for (double h : h_list) {
    if (!(h > 0.0)) throw std::invalid_argument("convergence_order: step sizes must be positive");
    const double n = T / h;
    if (std::abs(n - std::round(n)) > 1e-9 * n) throw std::invalid_argument("convergence_order: h must divide T");
  }
  const PhaseState exact = reference(s0, T);
  OrderResult out;
  out.h = h_list;
  for (double h : h_list) out.errors.push_back(max_abs_diff(integrate(map, s0, h, step_count(T, h)), exact));
  const double worst = *std::max_element(out.errors.begin(), out.errors.end());
  const bool any_zero = std::any_of(out.errors.begin(), out.errors.end(), [](double e) { return !(e > 0.0); });
  out.degenerate = worst <= kDegenerateError || any_zero;
  out.slope = out.degenerate ? std::nan("") : loglog_slope(out.h, out.errors);
  return out;
}

Matrix fd_jacobian(const OneStepMap& map, const PhaseState& s, double h, double step) {
  const Vec x = s.packed();
  const std::size_t n = x.size();
  Matrix d(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    const Vec fp = map(PhaseState::unpack(xp), h).packed();
    const Vec fm = map(PhaseState::unpack(xm), h).packed();
    for (std::size_t i = 0; i < n; ++i) {
      d(i, j) = (fp[i] - fm[i]) / (2.0 * step);
      if (!std::isfinite(d(i, j))) throw NonFiniteState("fd_jacobian: non-finite entry");
    }
  }
  return d;
}

Matrix canonical_j(std::size_t n) {
  Matrix j(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

double symplecticity_defect(const OneStepMap& map, const PhaseState& s, double h, double step) {
  const Matrix d = fd_jacobian(map, s, h, step);
  const Matrix j = canonical_j(s.dim());
  return (d.transposed() * j * d - j).norm_inf();
}

double symmetry_defect(const OneStepMap& map, const PhaseState& s, double h) {
  return max_abs_diff(map(map(s, -h), h), s);
}

double adjoint_defect(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings) {
  const PhaseState a = step_type3(adjoint_right(hd), s, h, settings);
  const PhaseState b = adjoint_map(to_map(hd, settings), settings)(s, h);
  return max_abs_diff(a, b);
}

double local_error(const OneStepMap& map, const ReferenceFlow& reference, const PhaseState& s, double h) {
  return max_abs_diff(map(s, h), reference(s, h));
}

ReferenceFlow rk4_reference(const SeparableSystem& sys, int substeps) {
  if (substeps < 1) throw std::invalid_argument("rk4_reference: substeps must be >= 1");
  return [sys, substeps](const PhaseState& s0, double t) {
    const std::size_t n = s0.dim();
    // y' = (M^{-1} p, -grad V(q))
    auto f = [&](const Vec& y) {
      const Vec q(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
      const Vec p(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
      return vec::concat(sys.momentum_to_velocity(q, p), vec::scaled(sys.grad_potential(q), -1.0));
    };
    const double dt = t / substeps;
    Vec y = s0.packed();
    for (int k = 0; k < substeps; ++k) {
      const Vec k1 = f(y);
      const Vec k2 = f(vec::axpy(0.5 * dt, k1, y));
      const Vec k3 = f(vec::axpy(0.5 * dt, k2, y));
      const Vec k4 = f(vec::axpy(dt, k3, y));
      Vec incr = vec::add(vec::add(k1, k4), vec::scaled(vec::add(k2, k3), 2.0));
      y = vec::axpy(dt / 6.0, incr, y);
    }
    return PhaseState::unpack(y);
  };
}

ReferenceFlow verlet_reference(const SeparableSystem& sys, double h_ref) {
  if (!(h_ref > 0.0)) throw std::invalid_argument("verlet_reference: h_ref must be positive");
  return [sys, h_ref](const PhaseState& s0, double t) {
    const auto n = std::max<long long>(1, static_cast<long long>(std::ceil(std::abs(t) / h_ref)));
    const double dt = t / static_cast<double>(n);
    Vec q = s0.q(), p = s0.p();
    for (long long k = 0; k < n; ++k) {
      p = vec::axpy(-0.5 * dt, sys.grad_potential(q), p);
      q = vec::axpy(dt, sys.momentum_to_velocity(q, p), q);
      p = vec::axpy(-0.5 * dt, sys.grad_potential(q), p);
    }
    return PhaseState(q, p);
  };
}

ReferenceFlow ho_reference() { return ho_rotation; }

double max_energy_error(const OneStepMap& map, const EnergyFn& energy, const PhaseState& s0, double T, double h,
                        double overflow_substitute, bool* substituted) {
  const long long steps = step_count(T, h);
  auto fail = [&] {
    if (substituted) *substituted = true;
    return overflow_substitute;
  };
  if (substituted) *substituted = false;
  try {
    const double e0 = energy(s0);
    PhaseState s = s0;
    double worst = 0.0;
    for (long long k = 0; k < steps; ++k) {
      s = map(s, h);
      const double de = std::abs(energy(s) - e0);
      if (!std::isfinite(de)) return fail();
      worst = std::max(worst, de);
    }
    return worst;
  } catch (const std::runtime_error&) {  // solver failure, singular matrix
    return fail();
  } catch (const std::domain_error&) {  // non-finite state, singular boundary problem
    return fail();
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

SweepResult energy_error_sweep(const OneStepMap& map, const EnergyFn& energy, const PhaseState& s0, double T,
                               const std::vector<double>& h_values, double overflow_substitute, unsigned threads) {
  if (!(T > 0.0)) throw std::invalid_argument("energy_error_sweep: T must be positive");
  for (double h : h_values)
    if (!(h > 0.0)) throw std::invalid_argument("energy_error_sweep: step sizes must be positive");
  SweepResult out;
  out.h_values = h_values;
  out.overflow_substitute = overflow_substitute;
  out.metric.assign(h_values.size(), 0.0);
  std::vector<char> sub(h_values.size(), 0);
  parallel_for(
      h_values.size(),
      [&](std::size_t i) {
        bool s = false;
        out.metric[i] = max_energy_error(map, energy, s0, T, h_values[i], overflow_substitute, &s);
        sub[i] = s ? 1 : 0;
      },
      threads);
  out.substituted.assign(sub.begin(), sub.end());
  return out;
}

}  // namespace genvi
