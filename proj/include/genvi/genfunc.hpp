#pragma once

// Generating functions of symplectic maps and the one-step methods they
// define implicitly.
//
//   Type I   L_d(q0, q1; h)     p0 = -D1 L_d,       p1 =  D2 L_d
//   Type II  H_d^+(q0, p1; h)   p0 =  D1 H_d^+,     q1 =  D2 H_d^+
//   Type III H_d^-(p0, q1; h)   q0 = -D1 H_d^-,     p1 = -D2 H_d^-
//
// Each type is a distinct C++ type so that, e.g., a right Hamiltonian cannot
// be stepped with the left Hamiltonian equations by accident.

#include <functional>
#include <string>
#include <vector>

#include "genvi/core.hpp"
#include "genvi/rootfind.hpp"

namespace genvi {

enum class DerivativeMode { analytic, finite_difference };

namespace kind {
struct TypeI {};
struct TypeII {};
struct TypeIII {};
}  // namespace kind

/// (first, second, h) in the function's natural coordinates.
using GenValue = std::function<double(const Vec&, const Vec&, double)>;
using GenPartial = std::function<Vec(const Vec&, const Vec&, double)>;
/// Rough guess of the next state; only used to seed Newton.
using Predictor = std::function<PhaseState(const PhaseState&, double)>;

/// (q + h p, p): free motion with unit mass.
Predictor free_drift_predictor();
/// Explicit Euler for a separable system.
Predictor explicit_euler_predictor(const SeparableSystem& sys);

/// Central-difference step used for generating functions without analytic
/// partials, scaled by max(1, |x_i|).
inline constexpr double kGenFdStep = 1e-6;
/// Residual tolerance floor for steps of functions with difference partials.
inline constexpr double kFdSolveTol = 1e-9;

template <class Kind>
class GeneratingFunction {
 public:
  /// Partials from central differences of the value.
  GeneratingFunction(std::string label, GenValue value, Predictor predictor = {});
  /// Partials supplied by the caller.
  GeneratingFunction(std::string label, GenValue value, GenPartial d1, GenPartial d2, Predictor predictor = {},
                     DerivativeMode mode = DerivativeMode::analytic);

  double value(const Vec& a, const Vec& b, double h) const { return value_(a, b, h); }
  Vec d1(const Vec& a, const Vec& b, double h) const;
  Vec d2(const Vec& a, const Vec& b, double h) const;

  DerivativeMode derivative_mode() const { return mode_; }
  const std::string& label() const { return label_; }
  const Predictor& predictor() const { return predictor_; }
  PhaseState predict(const PhaseState& s, double h) const { return predictor_(s, h); }

  GeneratingFunction relabeled(std::string label) const;

 private:
  std::string label_;
  GenValue value_;
  GenPartial d1_;
  GenPartial d2_;
  Predictor predictor_;
  DerivativeMode mode_;
};

using DiscreteLagrangian = GeneratingFunction<kind::TypeI>;
using DiscreteRightHamiltonian = GeneratingFunction<kind::TypeII>;
using DiscreteLeftHamiltonian = GeneratingFunction<kind::TypeIII>;

extern template class GeneratingFunction<kind::TypeI>;
extern template class GeneratingFunction<kind::TypeII>;
extern template class GeneratingFunction<kind::TypeIII>;

/// Worst relative deviation of d1/d2 from central differences of the value
/// (relative to max(1, |partial|)).
template <class Kind>
double derivative_consistency(const GeneratingFunction<Kind>& g, const Vec& a, const Vec& b, double h,
                              double delta = 1e-6);

/// A one-step method Phi_h : (q0, p0) -> (q1, p1).
class OneStepMap {
 public:
  using StepFn = std::function<PhaseState(const PhaseState&, double)>;

  OneStepMap(std::string label, StepFn step);

  PhaseState operator()(const PhaseState& s, double h) const { return step_(s, h); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  StepFn step_;
};

struct StepResult {
  PhaseState state;
  SolveStats stats;
};

/// One step with solver diagnostics. h must be nonzero.
StepResult solve_step(const DiscreteLagrangian& ld, const PhaseState& s, double h, const SolveSettings& settings = {});
StepResult solve_step(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings = {});
StepResult solve_step(const DiscreteLeftHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings = {});

PhaseState step_type1(const DiscreteLagrangian& ld, const PhaseState& s, double h, const SolveSettings& settings = {});
PhaseState step_type2(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings = {});
PhaseState step_type3(const DiscreteLeftHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings = {});

OneStepMap to_map(const DiscreteLagrangian& ld, SolveSettings settings = {});
OneStepMap to_map(const DiscreteRightHamiltonian& hd, SolveSettings settings = {});
OneStepMap to_map(const DiscreteLeftHamiltonian& hd, SolveSettings settings = {});

// Discrete Legendre transforms, from natural coordinates to T*Q.
PhaseState legendre_plus(const DiscreteLagrangian& ld, const Vec& q0, const Vec& q1, double h);
PhaseState legendre_minus(const DiscreteLagrangian& ld, const Vec& q0, const Vec& q1, double h);
PhaseState legendre_plus(const DiscreteRightHamiltonian& hd, const Vec& q0, const Vec& p1, double h);
PhaseState legendre_minus(const DiscreteRightHamiltonian& hd, const Vec& q0, const Vec& p1, double h);
PhaseState legendre_plus(const DiscreteLeftHamiltonian& hd, const Vec& p0, const Vec& q1, double h);
PhaseState legendre_minus(const DiscreteLeftHamiltonian& hd, const Vec& p0, const Vec& q1, double h);

/// Natural coordinates (first, second) of a generating function.
struct BoundaryData {
  Vec first;
  Vec second;
};

/// Solves legendre_minus(first, second) = s for both arguments at once.
template <class Kind>
BoundaryData invert_legendre_minus(const GeneratingFunction<Kind>& g, const PhaseState& s, double h,
                                   const SolveSettings& settings = {});

/// legendre_plus o legendre_minus^{-1}: the step map assembled from the
/// transforms rather than from the discrete equations directly.
template <class Kind>
PhaseState legendre_step(const GeneratingFunction<Kind>& g, const PhaseState& s, double h,
                         const SolveSettings& settings = {});

/// L_d^*(q0, q1; h) = -L_d(q1, q0; -h)
DiscreteLagrangian adjoint(const DiscreteLagrangian& ld);
/// (H_d^+)^*(p0, q1; h) = -H_d^+(q1, p0; -h)
DiscreteLeftHamiltonian adjoint_right(const DiscreteRightHamiltonian& hd);
/// (H_d^-)^*(q0, p1; h) = -H_d^-(p1, q0; -h)
DiscreteRightHamiltonian adjoint_left(const DiscreteLeftHamiltonian& hd);

/// Phi_h^* = Phi_{-h}^{-1}, evaluated by solving F(y, -h) = x for y.
OneStepMap adjoint_map(const OneStepMap& f, SolveSettings settings = {});

/// H_d^-(p_k, q_{k+1}) = -p_k q_k - p_{k+1} q_{k+1} + H_d^+(q_k, p_{k+1}), with
/// (q_k, p_{k+1}) recovered from the discrete Hamilton equations of H_d^+.
/// Partials come from the same implicit solve: -D1 = q_k, -D2 = p_{k+1}.
DiscreteLeftHamiltonian legendre_II_to_III(const DiscreteRightHamiltonian& hd, SolveSettings settings = {});

struct CompositionStage {
  OneStepMap map;
  double fraction;
};

/// Stages run in the order given; stage i advances by fraction_i * h.
/// Fractions must sum to one.
OneStepMap compose(std::vector<CompositionStage> stages, std::string label = "composition");

/// F_{h/2} o F^*_{h/2}.
OneStepMap symmetric_compose(const OneStepMap& f, const OneStepMap& f_adjoint);
OneStepMap symmetric_compose(const OneStepMap& f, SolveSettings settings = {});

/// F^{a_s h} o F*^{b_s h} o ... o F^{a_1 h} o F*^{b_1 h} with the palindrome
/// condition a_{s+1-i} = b_i.
OneStepMap symmetric_composition(const OneStepMap& f, const OneStepMap& f_adjoint, std::vector<double> alphas,
                                 std::vector<double> betas);

}  // namespace genvi
