#include "genvi/genfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace genvi {

namespace {

Vec nan_vec(std::size_t n) { return Vec(n, std::numeric_limits<double>::quiet_NaN()); }

double fd_increment(double x) { return kGenFdStep * std::max(1.0, std::abs(x)); }

// Central-difference gradient of f in its first or second argument.
Vec central_partial(const GenValue& f, const Vec& a, const Vec& b, double h, bool first) {
  const Vec& x = first ? a : b;
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = fd_increment(x[i]);
    Vec xp = x, xm = x;
    xp[i] += d;
    xm[i] -= d;
    const double fp = first ? f(xp, b, h) : f(a, xp, h);
    const double fm = first ? f(xm, b, h) : f(a, xm, h);
    out[i] = (fp - fm) / (2.0 * d);
  }
  return out;
}

void require_step(double h, const std::string& label) {
  if (h == 0.0) throw std::invalid_argument(label + ": step size must be nonzero");
  if (!std::isfinite(h)) throw std::invalid_argument(label + ": step size must be finite");
}

SolveResult labelled_solve(const std::string& label, const Residual& r, Vec guess, const SolveSettings& settings) {
  try {
    return newton_solve(r, std::move(guess), settings);
  } catch (const SolveError& e) {
    throw e.with_context(label);
  }
}

// Difference partials carry roundoff of order 1e-10; a tighter residual
// target is unreachable.
template <class Kind>
SolveSettings settings_for(const GeneratingFunction<Kind>& g, SolveSettings settings) {
  if (g.derivative_mode() == DerivativeMode::finite_difference) settings.tol = std::max(settings.tol, kFdSolveTol);
  return settings;
}

// Raw legendre_minus images, with no finiteness check so a residual can
// carry NaN back to the solver.
Vec minus_raw(const DiscreteLagrangian& g, const Vec& a, const Vec& b, double h) {
  return vec::concat(a, vec::scaled(g.d1(a, b, h), -1.0));
}
Vec minus_raw(const DiscreteRightHamiltonian& g, const Vec& a, const Vec& b, double h) {
  return vec::concat(a, g.d1(a, b, h));
}
Vec minus_raw(const DiscreteLeftHamiltonian& g, const Vec& a, const Vec& b, double h) {
  return vec::concat(vec::scaled(g.d1(a, b, h), -1.0), a);
}

// Newton seed for (first, second) given the initial state.
BoundaryData boundary_guess(const DiscreteLagrangian& g, const PhaseState& s, double h) {
  return {s.q(), g.predict(s, h).q()};
}
BoundaryData boundary_guess(const DiscreteRightHamiltonian& g, const PhaseState& s, double h) {
  return {s.q(), g.predict(s, h).p()};
}
BoundaryData boundary_guess(const DiscreteLeftHamiltonian& g, const PhaseState& s, double h) {
  return {s.p(), g.predict(s, h).q()};
}

void require_dims(const PhaseState& s, const Vec& guess, const std::string& label) {
  if (guess.size() != s.dim()) throw DimensionMismatch(label + ": predictor changed the dimension");
}

}  // namespace

Predictor free_drift_predictor() {
  return [](const PhaseState& s, double h) { return PhaseState(vec::axpy(h, s.p(), s.q()), s.p()); };
}

Predictor explicit_euler_predictor(const SeparableSystem& sys) {
  return [sys](const PhaseState& s, double h) {
    const Vec v = sys.momentum_to_velocity(s.q(), s.p());
    return PhaseState(vec::axpy(h, v, s.q()), vec::axpy(-h, sys.grad_potential(s.q()), s.p()));
  };
}

template <class Kind>
GeneratingFunction<Kind>::GeneratingFunction(std::string label, GenValue value, Predictor predictor)
    : label_(std::move(label)),
      value_(std::move(value)),
      predictor_(predictor ? std::move(predictor) : free_drift_predictor()),
      mode_(DerivativeMode::finite_difference) {
  if (!value_) throw std::invalid_argument("GeneratingFunction: value callable required");
  const GenValue f = value_;
  d1_ = [f](const Vec& a, const Vec& b, double h) { return central_partial(f, a, b, h, true); };
  d2_ = [f](const Vec& a, const Vec& b, double h) { return central_partial(f, a, b, h, false); };
}

template <class Kind>
GeneratingFunction<Kind>::GeneratingFunction(std::string label, GenValue value, GenPartial d1, GenPartial d2,
                                             Predictor predictor, DerivativeMode mode)
    : label_(std::move(label)),
      value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      predictor_(predictor ? std::move(predictor) : free_drift_predictor()),
      mode_(mode) {
  if (!value_ || !d1_ || !d2_) throw std::invalid_argument("GeneratingFunction: callables required");
}

template <class Kind>
Vec GeneratingFunction<Kind>::d1(const Vec& a, const Vec& b, double h) const {
  if (a.size() != b.size()) throw DimensionMismatch(label_ + ": argument sizes differ");
  Vec g = d1_(a, b, h);
  if (g.size() != a.size()) throw DimensionMismatch(label_ + ": D1 has the wrong size");
  return g;
}

template <class Kind>
Vec GeneratingFunction<Kind>::d2(const Vec& a, const Vec& b, double h) const {
  if (a.size() != b.size()) throw DimensionMismatch(label_ + ": argument sizes differ");
  Vec g = d2_(a, b, h);
  if (g.size() != b.size()) throw DimensionMismatch(label_ + ": D2 has the wrong size");
  return g;
}

template <class Kind>
GeneratingFunction<Kind> GeneratingFunction<Kind>::relabeled(std::string label) const {
  GeneratingFunction copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

template class GeneratingFunction<kind::TypeI>;
template class GeneratingFunction<kind::TypeII>;
template class GeneratingFunction<kind::TypeIII>;

template <class Kind>
double derivative_consistency(const GeneratingFunction<Kind>& g, const Vec& a, const Vec& b, double h,
                              double delta) {
  const GenValue f = [&g](const Vec& x, const Vec& y, double t) { return g.value(x, y, t); };
  double worst = 0.0;
  for (int which = 0; which < 2; ++which) {
    const Vec& x = which == 0 ? a : b;
    const Vec analytic = which == 0 ? g.d1(a, b, h) : g.d2(a, b, h);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = delta * std::max(1.0, std::abs(x[i]));
      Vec xp = x, xm = x;
      xp[i] += d;
      xm[i] -= d;
      const double fp = which == 0 ? f(xp, b, h) : f(a, xp, h);
      const double fm = which == 0 ? f(xm, b, h) : f(a, xm, h);
      const double fd = (fp - fm) / (2.0 * d);
      worst = std::max(worst, std::abs(fd - analytic[i]) / std::max(1.0, std::abs(analytic[i])));
    }
  }
  return worst;
}

template double derivative_consistency(const DiscreteLagrangian&, const Vec&, const Vec&, double, double);
template double derivative_consistency(const DiscreteRightHamiltonian&, const Vec&, const Vec&, double, double);
template double derivative_consistency(const DiscreteLeftHamiltonian&, const Vec&, const Vec&, double, double);

OneStepMap::OneStepMap(std::string label, StepFn step) : label_(std::move(label)), step_(std::move(step)) {
  if (!step_) throw std::invalid_argument("OneStepMap: step callable required");
}

// p0 = -D1 L(q0, q1), solved for q1; then p1 = D2 L(q0, q1).
StepResult solve_step(const DiscreteLagrangian& ld, const PhaseState& s, double h, const SolveSettings& settings) {
  require_step(h, ld.label());
  const Vec& q0 = s.q();
  const Vec& p0 = s.p();
  Vec guess = ld.predict(s, h).q();
  require_dims(s, guess, ld.label());
  const Residual r = [&](const Vec& q1) { return vec::add(p0, ld.d1(q0, q1, h)); };
  SolveResult sol = labelled_solve(ld.label(), r, std::move(guess), settings_for(ld, settings));
  Vec p1 = ld.d2(q0, sol.x, h);
  return {PhaseState(std::move(sol.x), std::move(p1)), sol.stats};
}

// p0 = D1 H+(q0, p1), solved for p1; then q1 = D2 H+(q0, p1).
StepResult solve_step(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings) {
  require_step(h, hd.label());
  const Vec& q0 = s.q();
  const Vec& p0 = s.p();
  Vec guess = hd.predict(s, h).p();
  require_dims(s, guess, hd.label());
  const Residual r = [&](const Vec& p1) { return vec::sub(hd.d1(q0, p1, h), p0); };
  SolveResult sol = labelled_solve(hd.label(), r, std::move(guess), settings_for(hd, settings));
  Vec q1 = hd.d2(q0, sol.x, h);
  return {PhaseState(std::move(q1), std::move(sol.x)), sol.stats};
}

// q0 = -D1 H-(p0, q1), solved for q1; then p1 = -D2 H-(p0, q1).
StepResult solve_step(const DiscreteLeftHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings) {
  require_step(h, hd.label());
  const Vec& q0 = s.q();
  const Vec& p0 = s.p();
  Vec guess = hd.predict(s, h).q();
  require_dims(s, guess, hd.label());
  const Residual r = [&](const Vec& q1) { return vec::add(q0, hd.d1(p0, q1, h)); };
  SolveResult sol = labelled_solve(hd.label(), r, std::move(guess), settings_for(hd, settings));
  Vec p1 = vec::scaled(hd.d2(p0, sol.x, h), -1.0);
  return {PhaseState(std::move(sol.x), std::move(p1)), sol.stats};
}

PhaseState step_type1(const DiscreteLagrangian& ld, const PhaseState& s, double h, const SolveSettings& settings) {
  return solve_step(ld, s, h, settings).state;
}

PhaseState step_type2(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings) {
  return solve_step(hd, s, h, settings).state;
}

PhaseState step_type3(const DiscreteLeftHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings) {
  return solve_step(hd, s, h, settings).state;
}

OneStepMap to_map(const DiscreteLagrangian& ld, SolveSettings settings) {
  return OneStepMap(ld.label(), [ld, settings](const PhaseState& s, double h) { return step_type1(ld, s, h, settings); });
}

OneStepMap to_map(const DiscreteRightHamiltonian& hd, SolveSettings settings) {
  return OneStepMap(hd.label(), [hd, settings](const PhaseState& s, double h) { return step_type2(hd, s, h, settings); });
}

OneStepMap to_map(const DiscreteLeftHamiltonian& hd, SolveSettings settings) {
  return OneStepMap(hd.label(), [hd, settings](const PhaseState& s, double h) { return step_type3(hd, s, h, settings); });
}

PhaseState legendre_plus(const DiscreteLagrangian& ld, const Vec& q0, const Vec& q1, double h) {
  return PhaseState(q1, ld.d2(q0, q1, h));
}

PhaseState legendre_minus(const DiscreteLagrangian& ld, const Vec& q0, const Vec& q1, double h) {
  return PhaseState(q0, vec::scaled(ld.d1(q0, q1, h), -1.0));
}

PhaseState legendre_plus(const DiscreteRightHamiltonian& hd, const Vec& q0, const Vec& p1, double h) {
  return PhaseState(hd.d2(q0, p1, h), p1);
}

PhaseState legendre_minus(const DiscreteRightHamiltonian& hd, const Vec& q0, const Vec& p1, double h) {
  return PhaseState(q0, hd.d1(q0, p1, h));
}

PhaseState legendre_plus(const DiscreteLeftHamiltonian& hd, const Vec& p0, const Vec& q1, double h) {
  return PhaseState(q1, vec::scaled(hd.d2(p0, q1, h), -1.0));
}

PhaseState legendre_minus(const DiscreteLeftHamiltonian& hd, const Vec& p0, const Vec& q1, double h) {
  return PhaseState(vec::scaled(hd.d1(p0, q1, h), -1.0), p0);
}

template <class Kind>
BoundaryData invert_legendre_minus(const GeneratingFunction<Kind>& g, const PhaseState& s, double h,
                                   const SolveSettings& settings) {
  require_step(h, g.label());
  const std::size_t n = s.dim();
  const BoundaryData seed = boundary_guess(g, s, h);
  require_dims(s, seed.second, g.label());
  const Vec target = s.packed();
  const Residual r = [&](const Vec& z) {
    const Vec a(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
    const Vec b(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
    return vec::sub(minus_raw(g, a, b, h), target);
  };
  const SolveResult sol = labelled_solve(g.label() + " (inverse Legendre)", r, vec::concat(seed.first, seed.second),
                                         settings_for(g, settings));
  const auto mid = sol.x.begin() + static_cast<std::ptrdiff_t>(n);
  return {Vec(sol.x.begin(), mid), Vec(mid, sol.x.end())};
}

template BoundaryData invert_legendre_minus(const DiscreteLagrangian&, const PhaseState&, double,
                                            const SolveSettings&);
template BoundaryData invert_legendre_minus(const DiscreteRightHamiltonian&, const PhaseState&, double,
                                            const SolveSettings&);
template BoundaryData invert_legendre_minus(const DiscreteLeftHamiltonian&, const PhaseState&, double,
                                            const SolveSettings&);

template <class Kind>
PhaseState legendre_step(const GeneratingFunction<Kind>& g, const PhaseState& s, double h,
                         const SolveSettings& settings) {
  const BoundaryData bd = invert_legendre_minus(g, s, h, settings);
  return legendre_plus(g, bd.first, bd.second, h);
}

template PhaseState legendre_step(const DiscreteLagrangian&, const PhaseState&, double, const SolveSettings&);
template PhaseState legendre_step(const DiscreteRightHamiltonian&, const PhaseState&, double, const SolveSettings&);
template PhaseState legendre_step(const DiscreteLeftHamiltonian&, const PhaseState&, double, const SolveSettings&);

DiscreteLagrangian adjoint(const DiscreteLagrangian& ld) {
  return DiscreteLagrangian(
      ld.label() + "*", [ld](const Vec& q0, const Vec& q1, double h) { return -ld.value(q1, q0, -h); },
      [ld](const Vec& q0, const Vec& q1, double h) { return vec::scaled(ld.d2(q1, q0, -h), -1.0); },
      [ld](const Vec& q0, const Vec& q1, double h) { return vec::scaled(ld.d1(q1, q0, -h), -1.0); },
      ld.predictor(), ld.derivative_mode());
}

DiscreteLeftHamiltonian adjoint_right(const DiscreteRightHamiltonian& hd) {
  return DiscreteLeftHamiltonian(
      hd.label() + "*", [hd](const Vec& p0, const Vec& q1, double h) { return -hd.value(q1, p0, -h); },
      [hd](const Vec& p0, const Vec& q1, double h) { return vec::scaled(hd.d2(q1, p0, -h), -1.0); },
      [hd](const Vec& p0, const Vec& q1, double h) { return vec::scaled(hd.d1(q1, p0, -h), -1.0); },
      hd.predictor(), hd.derivative_mode());
}

DiscreteRightHamiltonian adjoint_left(const DiscreteLeftHamiltonian& hd) {
  return DiscreteRightHamiltonian(
      hd.label() + "*", [hd](const Vec& q0, const Vec& p1, double h) { return -hd.value(p1, q0, -h); },
      [hd](const Vec& q0, const Vec& p1, double h) { return vec::scaled(hd.d2(p1, q0, -h), -1.0); },
      [hd](const Vec& q0, const Vec& p1, double h) { return vec::scaled(hd.d1(p1, q0, -h), -1.0); },
      hd.predictor(), hd.derivative_mode());
}

OneStepMap adjoint_map(const OneStepMap& f, SolveSettings settings) {
  const std::string label = f.label() + "*";
  return OneStepMap(label, [f, settings, label](const PhaseState& x, double h) {
    require_step(h, label);
    const Vec target = x.packed();
    const Residual r = [&](const Vec& y) {
      try {
        return vec::sub(f(PhaseState::unpack(y), -h).packed(), target);
      } catch (const NonFiniteState&) {
        return nan_vec(y.size());
      }
    };
    Vec guess;
    try {
      guess = f(x, h).packed();
    } catch (const std::runtime_error&) {
      guess = target;
    } catch (const std::domain_error&) {
      guess = target;
    }
    SolveResult sol = labelled_solve(label, r, std::move(guess), settings);
    return PhaseState::unpack(sol.x);
  });
}

DiscreteLeftHamiltonian legendre_II_to_III(const DiscreteRightHamiltonian& hd, SolveSettings settings) {
  SolveSettings inner = settings;
  inner.tol = settings.tol * 0.1;
  const std::string label = hd.label() + " (as left Hamiltonian)";

  // (qk, pk1) from pk = D1 H+(qk, pk1), qk1 = D2 H+(qk, pk1).
  auto recover = [hd, inner, label](const Vec& pk, const Vec& qk1, double h) {
    if (pk.size() != qk1.size()) throw DimensionMismatch(label + ": argument sizes differ");
    require_step(h, label);
    const std::size_t n = pk.size();
    const Vec qk_guess = hd.predict(PhaseState(qk1, pk), -h).q();
    const Residual r = [&](const Vec& z) {
      const Vec qk(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
      const Vec pk1(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
      return vec::concat(vec::sub(hd.d1(qk, pk1, h), pk), vec::sub(hd.d2(qk, pk1, h), qk1));
    };
    const SolveResult sol = labelled_solve(label, r, vec::concat(qk_guess, pk), inner);
    const auto mid = sol.x.begin() + static_cast<std::ptrdiff_t>(n);
    return BoundaryData{Vec(sol.x.begin(), mid), Vec(mid, sol.x.end())};
  };

  return DiscreteLeftHamiltonian(
      label,
      [hd, recover](const Vec& pk, const Vec& qk1, double h) {
        const BoundaryData z = recover(pk, qk1, h);
        return -vec::dot(pk, z.first) - vec::dot(z.second, qk1) + hd.value(z.first, z.second, h);
      },
      [recover](const Vec& pk, const Vec& qk1, double h) { return vec::scaled(recover(pk, qk1, h).first, -1.0); },
      [recover](const Vec& pk, const Vec& qk1, double h) { return vec::scaled(recover(pk, qk1, h).second, -1.0); },
      hd.predictor(), DerivativeMode::analytic);
}

OneStepMap compose(std::vector<CompositionStage> stages, std::string label) {
  if (stages.empty()) throw std::invalid_argument("compose: at least one stage required");
  double total = 0.0;
  for (const auto& st : stages) {
    if (!std::isfinite(st.fraction)) throw std::invalid_argument("compose: non-finite fraction");
    total += st.fraction;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("compose: fractions must sum to 1");
  return OneStepMap(std::move(label), [stages = std::move(stages)](const PhaseState& s, double h) {
    PhaseState x = s;
    for (const auto& st : stages) x = st.map(x, st.fraction * h);
    return x;
  });
}

OneStepMap symmetric_compose(const OneStepMap& f, const OneStepMap& f_adjoint) {
  return compose({{f_adjoint, 0.5}, {f, 0.5}}, "sym(" + f.label() + ")");
}

OneStepMap symmetric_compose(const OneStepMap& f, SolveSettings settings) {
  return symmetric_compose(f, adjoint_map(f, settings));
}

OneStepMap symmetric_composition(const OneStepMap& f, const OneStepMap& f_adjoint, std::vector<double> alphas,
                                 std::vector<double> betas) {
  const std::size_t s = alphas.size();
  if (s == 0 || betas.size() != s)
    throw std::invalid_argument("symmetric_composition: need equally many alphas and betas");
  for (std::size_t i = 0; i < s; ++i)
    if (std::abs(alphas[s - 1 - i] - betas[i]) > 1e-14)
      throw std::invalid_argument("symmetric_composition: coefficients are not palindromic");
  std::vector<CompositionStage> stages;
  stages.reserve(2 * s);
  for (std::size_t i = 0; i < s; ++i) {
    stages.push_back({f_adjoint, betas[i]});
    stages.push_back({f, alphas[i]});
  }
  return compose(std::move(stages), "symcomp(" + f.label() + ")");
}

}  // namespace genvi
