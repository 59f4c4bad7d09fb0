#pragma once

// Exact discrete generating functions of the unit harmonic oscillator
// (H_A = (p^2 + q^2)/2, n = 1) and averaged integrators for
// H = H_A + epsilon V_B(q).

#include <functional>
#include <stdexcept>
#include <string>

#include "genvi/core.hpp"
#include "genvi/genfunc.hpp"
#include "genvi/quadrature.hpp"
#include "genvi/rootfind.hpp"

namespace genvi {

/// The harmonic-oscillator boundary value problem has no unique solution for
/// this step size.
class SingularBvp : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class BoundaryKind {
  type1,  ///< data (q0, q1)
  type2,  ///< data (q0, p1)
};

/// q_A(t) = c1 cos t + c2 sin t through the boundary data.
struct HoBoundaryFlow {
  BoundaryKind kind;
  double h;
  double c1;
  double c2;

  double eval(double t) const;
};

/// Throws SingularBvp when |sin h| (type1) or |cos h| (type2) is at most
/// `singular_guard`; near the singular set this is the distance to it.
HoBoundaryFlow ho_bvp(BoundaryKind kind, double q0, double second, double h, double singular_guard = 1e-8);
inline double eval_qA(const HoBoundaryFlow& flow, double t) { return flow.eval(t); }

struct Perturbation1D {
  std::function<double(double)> potential;
  std::function<double(double)> gradient;
  std::string name;
};

/// V_B = q^3 / 3
Perturbation1D cubic_perturbation();

struct AveragedConfig {
  double epsilon = 0.0;
  QuadratureRule avg_quadrature = quadrature::gauss_legendre(4);
  double singular_guard = 1e-8;
  SolveSettings solve{};

  void validate() const;
};

/// q1 = q0 cos h + p0 sin h, p1 = q1 cot h - q0 csc h. Not guarded.
PhaseState exact_dl_ho_step(const PhaseState& s, double h);
/// p1 = p0 cos h - q0 sin h, q1 = p1 tan h + q0 sec h. Not guarded.
PhaseState exact_dh_ho_step(const PhaseState& s, double h);
/// Exact rotation (q, p) -> (q cos t + p sin t, p cos t - q sin t).
PhaseState ho_rotation(const PhaseState& s, double t);

/// L = [(q0^2 + q1^2) cos h - 2 q0 q1] / (2 sin h)
DiscreteLagrangian exact_ho_discrete_lagrangian();
/// H+ = [p1 q0 + (q0^2 + p1^2) sin h / 2] / cos h
DiscreteRightHamiltonian exact_ho_right_hamiltonian();

/// L_d = L_A^E(q0, q1) - epsilon int_0^h V_B(q_A(q0, q1, t)) dt
DiscreteLagrangian averaged_lagrangian(const AveragedConfig& cfg, const Perturbation1D& vb);
/// H_d^+ = H_A^{+,E}(q0, p1) + epsilon int_0^h V_B(q_A(q0, p1, t)) dt
DiscreteRightHamiltonian averaged_right_hamiltonian(const AveragedConfig& cfg, const Perturbation1D& vb);

/// Steps solved from the implicit kick equations directly, seeded by the
/// exact A-flow.
StepResult averaged_lagrangian_solve(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                     double h);
StepResult averaged_hamiltonian_solve(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                      double h);
PhaseState averaged_lagrangian_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                    double h);
PhaseState averaged_hamiltonian_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                     double h);

/// Half kick, exact rotation by h, half kick.
PhaseState kick_drift_kick_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s, double h);

OneStepMap exact_dl_ho_map();
OneStepMap exact_dh_ho_map();
OneStepMap averaged_lagrangian_map(AveragedConfig cfg, Perturbation1D vb);
OneStepMap averaged_hamiltonian_map(AveragedConfig cfg, Perturbation1D vb);
OneStepMap kick_drift_kick_map(AveragedConfig cfg, Perturbation1D vb);

}  // namespace genvi
