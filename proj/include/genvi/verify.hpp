#pragma once

// Numerical checks of order, symplecticity, symmetry and energy behaviour.

#include <functional>
#include <vector>

#include "genvi/core.hpp"
#include "genvi/genfunc.hpp"

namespace genvi {

using EnergyFn = std::function<double(const PhaseState&)>;
/// (s0, t) -> state at time t.
using ReferenceFlow = std::function<PhaseState(const PhaseState&, double)>;

/// n steps of size h.
PhaseState integrate(const OneStepMap& map, const PhaseState& s0, double h, long long steps);

/// Number of steps used to cover [0, T] with step h (nearest integer).
long long step_count(double T, double h);

struct OrderResult {
  double slope = 0.0;
  std::vector<double> h;       ///< ascending
  std::vector<double> errors;  ///< global error at T, same order as h
  bool degenerate = false;     ///< errors at roundoff level; slope meaningless
};

/// Least-squares slope of log(error at T) against log(h). Needs at least
/// three step sizes, each dividing T.
OrderResult convergence_order(const OneStepMap& map, const ReferenceFlow& reference, const PhaseState& s0, double T,
                              std::vector<double> h_list);

/// Errors below this are treated as exact.
inline constexpr double kDegenerateError = 1e-12;

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Central-difference Jacobian of s -> map(s, h).
Matrix fd_jacobian(const OneStepMap& map, const PhaseState& s, double h, double step = 1e-6);
/// Canonical J = [[0, I], [-I, 0]].
Matrix canonical_j(std::size_t n);
/// ||D^T J D - J|| in the induced infinity norm.
double symplecticity_defect(const OneStepMap& map, const PhaseState& s, double h, double step = 1e-6);

/// ||map(map(s, -h), h) - s||_inf
double symmetry_defect(const OneStepMap& map, const PhaseState& s, double h);

/// ||step of adjoint_right(hd) - adjoint_map(step of hd)||_inf at (s, h).
double adjoint_defect(const DiscreteRightHamiltonian& hd, const PhaseState& s, double h,
                      const SolveSettings& settings = {});

/// ||map(s, h) - reference(s, h)||_inf
double local_error(const OneStepMap& map, const ReferenceFlow& reference, const PhaseState& s, double h);

/// Classical RK4 on the Hamiltonian vector field with `substeps` steps per call.
ReferenceFlow rk4_reference(const SeparableSystem& sys, int substeps);
/// Stormer-Verlet with steps no longer than h_ref.
ReferenceFlow verlet_reference(const SeparableSystem& sys, double h_ref);
/// Exact flow of the unit harmonic oscillator.
ReferenceFlow ho_reference();

struct SweepResult {
  std::vector<double> h_values;
  std::vector<double> metric;       ///< max |H(t) - H(0)|
  std::vector<bool> substituted;    ///< run failed or produced non-finite values
  double overflow_substitute = 1e6;
};

/// Max |H - H0| over llround(T/h) steps; failures give `overflow_substitute`.
double max_energy_error(const OneStepMap& map, const EnergyFn& energy, const PhaseState& s0, double T, double h,
                        double overflow_substitute, bool* substituted = nullptr);

/// Runs every h concurrently; results are stored by h index.
SweepResult energy_error_sweep(const OneStepMap& map, const EnergyFn& energy, const PhaseState& s0, double T,
                               const std::vector<double>& h_values, double overflow_substitute = 1e6,
                               unsigned threads = 0);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0: hardware
/// concurrency). The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace genvi
