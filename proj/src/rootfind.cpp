#include "genvi/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace genvi {

namespace {

constexpr double kDampingFloor = 1e-10;

std::string describe(SolveFailure kind, double residual_norm, const std::string& context) {
  std::string msg = context.empty() ? std::string{} : context + ": ";
  msg += to_string(kind);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", residual_norm);
  msg += std::string(" (residual ") + buf + ")";
  return msg;
}

double checked_norm(const Vec& r) {
  return vec::all_finite(r) ? vec::norm_inf(r) : std::numeric_limits<double>::infinity();
}

}  // namespace

void SolveSettings::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("SolveSettings: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("SolveSettings: max_iter must be >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("SolveSettings: fd_step must be > 0");
}

const char* to_string(SolveFailure kind) {
  switch (kind) {
    case SolveFailure::max_iter_exceeded:
      return "MaxIterExceeded";
    case SolveFailure::singular_jacobian:
      return "SingularJacobian";
    case SolveFailure::non_finite_residual:
      return "NonFiniteResidual";
  }
  return "unknown";
}

SolveError::SolveError(SolveFailure kind, Vec last_iterate, double residual_norm, const std::string& context)
    : std::runtime_error(describe(kind, residual_norm, context)),
      kind_(kind),
      last_(std::move(last_iterate)),
      residual_norm_(residual_norm),
      context_(context) {}

SolveError SolveError::with_context(const std::string& label) const {
  const std::string ctx = context_.empty() ? label : label + ": " + context_;
  return SolveError(kind_, last_, residual_norm_, ctx);
}

SolveResult newton_solve(const Residual& residual, Vec guess, const SolveSettings& settings) {
  settings.validate();
  Vec x = std::move(guess);
  Vec r = residual(x);
  if (!vec::all_finite(r)) throw SolveError(SolveFailure::non_finite_residual, x, checked_norm(r));
  double norm = vec::norm_inf(r);
  const std::size_t n = x.size();
  const std::size_t m = r.size();
  if (m != n) throw DimensionMismatch("newton_solve: residual and unknown sizes differ");

  // Newton direction from a forward-difference Jacobian
  auto direction = [&](const Vec& xc, const Vec& rc, double nc) {
    Matrix jac(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Vec xj = xc;
      // power-of-two step, and the step actually taken after rounding
      const double nominal = std::exp2(std::round(std::log2(settings.fd_step * std::max(1.0, std::abs(xc[j])))));
      xj[j] += nominal;
      const double step = xj[j] - xc[j];
      const Vec rj = residual(xj);
      if (!vec::all_finite(rj)) throw SolveError(SolveFailure::non_finite_residual, xc, nc);
      for (std::size_t i = 0; i < n; ++i) jac(i, j) = (rj[i] - rc[i]) / step;
    }
    try {
      return lu_solve(jac, vec::scaled(rc, -1.0));
    } catch (const SingularMatrix&) {
      throw SolveError(SolveFailure::singular_jacobian, xc, nc);
    }
  };

  for (int iter = 0;; ++iter) {
    if (norm <= settings.tol) {
      // One more step once converged. Stopping anywhere under tol makes the
      // solution jitter by up to tol between nearby inputs, which shows up
      // in differenced Jacobians of the step map.
      if (norm > 0.0 && iter < settings.max_iter) {
        const Vec polished = vec::add(x, direction(x, r, norm));
        const Vec rp = residual(polished);
        if (vec::all_finite(rp) && vec::norm_inf(rp) < norm)
          return {polished, {iter + 1, vec::norm_inf(rp)}};
      }
      return {std::move(x), {iter, norm}};
    }
    if (iter == settings.max_iter) throw SolveError(SolveFailure::max_iter_exceeded, x, norm);

    const Vec dx = direction(x, r, norm);

    // Halve the step until the residual decreases; at the floor take the
    // damped step anyway so the iteration can leave a flat region.
    double lambda = 1.0;
    Vec trial, r_trial;
    double trial_norm = 0.0;
    for (;;) {
      trial = vec::axpy(lambda, dx, x);
      r_trial = residual(trial);
      trial_norm = checked_norm(r_trial);
      if (trial_norm < norm || lambda <= kDampingFloor) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(trial_norm)) throw SolveError(SolveFailure::non_finite_residual, x, norm);
    x = std::move(trial);
    r = std::move(r_trial);
    norm = trial_norm;
  }
}

}  // namespace genvi
