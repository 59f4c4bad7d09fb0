#pragma once

// Taylor variational integrators for separable systems.
//
// Order convention: an expansion of order r advances positions with a
// Taylor polynomial of degree r+1 and velocities/momenta with degree r,
//
//   r = 0:  (q + t M^{-1} p, p)
//   r = 1:  (q + t M^{-1} p + t^2/2 a(q), p - t grad V(q)),   a = -M^{-1} grad V
//
// and the same expansion is used at the quadrature points and for the
// boundary term.

#include <string>
#include <vector>

#include "genvi/core.hpp"
#include "genvi/genfunc.hpp"
#include "genvi/quadrature.hpp"

namespace genvi {

class TaylorExpansion {
 public:
  TaylorExpansion(SeparableSystem sys, int order);

  int order() const { return order_; }
  const SeparableSystem& system() const { return sys_; }

  /// Flow on T*Q.
  PhaseState flow(const PhaseState& s, double t) const;
  /// Flow on TQ: (q, v) -> (q(t), v(t)).
  void flow_tq(const Vec& q, const Vec& v, double t, Vec& q_out, Vec& v_out) const;

 private:
  SeparableSystem sys_;
  int order_;
};

/// L_d(q0, q1; h) = h sum_i b_i L(Psi_{c_i h}(q0, v0)), with v0 chosen so the
/// expanded trajectory reaches q1 at time h.
DiscreteLagrangian build_lagrangian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r);

/// H_d^+(q0, p1; h) = p1^T q1~ - h sum_i b_i [p_i^T qdot_i - H(q_i, p_i)] along
/// the expansion from (q0, p0~), p0~ chosen so the momentum reaches p1.
DiscreteRightHamiltonian build_right_hamiltonian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r);

/// Time-reflected counterpart: expand backwards from (q1, p1~) with p1~ chosen
/// so the momentum at time 0 is p0; H_d^-(p0, q1; h) = -p0^T q0~ - h sum_i b_i
/// [p_i^T qdot_i - H(q_i, p_i)].
DiscreteLeftHamiltonian build_left_hamiltonian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r);

/// Hand-coded classical maps: euler_a, euler_b, stormer_verlet,
/// h_tvi_trapezoid.
OneStepMap canned(const std::string& name, const SeparableSystem& sys, const SolveSettings& settings = {});
const std::vector<std::string>& canned_names();

}  // namespace genvi
