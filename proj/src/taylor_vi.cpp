#include "genvi/taylor_vi.hpp"

#include <stdexcept>
#include <utility>

namespace genvi {

namespace {

void check_order(int r) {
  if (r != 0 && r != 1) throw std::invalid_argument("Taylor expansion order must be 0 or 1, got " + std::to_string(r));
}

std::string tvi_label(const char* kind, const QuadratureRule& quad, int r) {
  return std::string(kind) + "_tvi[" + (quad.name.empty() ? "custom" : quad.name) + ",r=" + std::to_string(r) + "]";
}

// sum_i b_i [p_i^T M^{-1} p_i - H(q_i, p_i)] = sum_i b_i [T(p_i) - V(q_i)]
double action_density_sum(const TaylorExpansion& psi, const QuadratureRule& quad, const PhaseState& base,
                          double tscale, double toffset) {
  const SeparableSystem& sys = psi.system();
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const PhaseState pt = psi.flow(base, (quad.nodes[i] + toffset) * tscale);
    acc += quad.weights[i] * (sys.kinetic_from_momentum(pt.p()) - sys.potential(pt.q()));
  }
  return acc;
}

}  // namespace

TaylorExpansion::TaylorExpansion(SeparableSystem sys, int order) : sys_(std::move(sys)), order_(order) {
  check_order(order_);
}

PhaseState TaylorExpansion::flow(const PhaseState& s, double t) const {
  const Vec v = sys_.momentum_to_velocity(s.q(), s.p());
  Vec q = vec::axpy(t, v, s.q());
  if (order_ == 0) return PhaseState(std::move(q), s.p());
  const Vec g = sys_.grad_potential(s.q());
  q = vec::axpy(0.5 * t * t, sys_.acceleration(s.q()), q);
  return PhaseState(std::move(q), vec::axpy(-t, g, s.p()));
}

void TaylorExpansion::flow_tq(const Vec& q, const Vec& v, double t, Vec& q_out, Vec& v_out) const {
  q_out = vec::axpy(t, v, q);
  v_out = v;
  if (order_ == 0) return;
  const Vec a = sys_.acceleration(q);
  q_out = vec::axpy(0.5 * t * t, a, q_out);
  v_out = vec::axpy(t, a, v_out);
}

DiscreteLagrangian build_lagrangian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r) {
  check_order(r);
  quad.validate();
  const TaylorExpansion psi(sys, r);
  const std::string label = tvi_label("lagrangian", quad, r);

  // q1 = q0 + h v0 + [r=1] h^2/2 a(q0) is linear in v0.
  auto v0_of = [psi, r](const Vec& q0, const Vec& q1, double h) {
    Vec d = vec::sub(q1, q0);
    if (r == 1) d = vec::axpy(-0.5 * h * h, psi.system().acceleration(q0), d);
    return vec::scaled(d, 1.0 / h);
  };
  GenValue value = [psi, quad, v0_of](const Vec& q0, const Vec& q1, double h) {
    const Vec v0 = v0_of(q0, q1, h);
    double acc = 0.0;
    Vec qi, vi;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      psi.flow_tq(q0, v0, quad.nodes[i] * h, qi, vi);
      acc += quad.weights[i] * psi.system().lagrangian(qi, vi);
    }
    return h * acc;
  };
  const Predictor pred = explicit_euler_predictor(sys);
  if (r == 1) {
    // q_i = (1-c) q0 + c q1 + h^2/2 (c^2 - c) a0,  v_i = (q1 - q0)/h + h (c - 1/2) a0
    // D1 = sum b [-M v_i - h^2 (c - 1/2) S0 v_i - h (1-c) g_i + h^3/2 (c^2 - c) S0 M^{-1} g_i]
    // D2 = sum b [M v_i - h c g_i],  S0 the Hessian at q0
    auto partial = [sys, quad](const Vec& q0, const Vec& q1, double h, bool first) {
      const Vec a0 = sys.acceleration(q0);
      const Matrix s0 = first ? sys.hessian_potential(q0) : Matrix();
      const Vec dq = vec::sub(q1, q0);
      Vec out(q0.size(), 0.0);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        const double c = quad.nodes[i], b = quad.weights[i];
        const Vec qi = vec::axpy(0.5 * h * h * (c * c - c), a0, vec::axpy(c, dq, q0));
        const Vec vi = vec::axpy(h * (c - 0.5), a0, vec::scaled(dq, 1.0 / h));
        const Vec gi = sys.grad_potential(qi);
        const Vec mv = sys.mass() * vi;
        if (!first) {
          out = vec::axpy(b, vec::axpy(-h * c, gi, mv), out);
          continue;
        }
        Vec term = vec::scaled(mv, -1.0);
        term = vec::axpy(-h * h * (c - 0.5), s0 * vi, term);
        term = vec::axpy(-h * (1.0 - c), gi, term);
        term = vec::axpy(0.5 * h * h * h * (c * c - c), s0 * sys.momentum_to_velocity(q0, gi), term);
        out = vec::axpy(b, term, out);
      }
      return out;
    };
    return DiscreteLagrangian(
        label, std::move(value), [partial](const Vec& a, const Vec& b, double h) { return partial(a, b, h, true); },
        [partial](const Vec& a, const Vec& b, double h) { return partial(a, b, h, false); }, pred);
  }

  // r = 0: q_i = (1 - c_i) q0 + c_i q1, v = (q1 - q0)/h
  auto partial = [sys, quad](const Vec& q0, const Vec& q1, double h, bool first) {
    const Vec v = vec::scaled(vec::sub(q1, q0), 1.0 / h);
    Vec out = vec::scaled(sys.mass() * v, first ? -1.0 : 1.0);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double c = quad.nodes[i];
      const Vec qi = vec::axpy(c, vec::sub(q1, q0), q0);
      const double w = first ? (1.0 - c) : c;
      out = vec::axpy(-h * quad.weights[i] * w, sys.grad_potential(qi), out);
    }
    return out;
  };
  return DiscreteLagrangian(
      label, std::move(value), [partial](const Vec& a, const Vec& b, double h) { return partial(a, b, h, true); },
      [partial](const Vec& a, const Vec& b, double h) { return partial(a, b, h, false); }, pred);
}

DiscreteRightHamiltonian build_right_hamiltonian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r) {
  check_order(r);
  quad.validate();
  const TaylorExpansion psi(sys, r);
  const std::string label = tvi_label("right_hamiltonian", quad, r);

  GenValue value = [psi, quad, r](const Vec& q0, const Vec& p1, double h) {
    // p1 = p0~ - [r=1] h grad V(q0)
    const Vec p0t = r == 1 ? vec::axpy(h, psi.system().grad_potential(q0), p1) : p1;
    const PhaseState base(q0, p0t);
    const Vec q1t = psi.flow(base, h).q();
    return vec::dot(p1, q1t) - h * action_density_sum(psi, quad, base, h, 0.0);
  };
  const Predictor pred = explicit_euler_predictor(sys);
  if (r == 1) {
    // With W = M^{-1}, g0 = grad V(q0), S0 its Hessian:
    //   q1~ = q0 + h W p1 + h^2/2 W g0
    //   p_i = p1 + h (1-c) g0,   q_i = q0 + c h W p1 + h^2 (c - c^2/2) W g0
    GenPartial d1 = [sys, quad](const Vec& q0, const Vec& p1, double h) {
      const Vec g0 = sys.grad_potential(q0);
      const Matrix s0 = sys.hessian_potential(q0);
      const Vec wp1 = sys.momentum_to_velocity(q0, p1);
      const Vec wg0 = sys.momentum_to_velocity(q0, g0);
      Vec out = vec::axpy(0.5 * h * h, s0 * wp1, p1);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        const double c = quad.nodes[i], b = quad.weights[i];
        const Vec pi = vec::axpy(h * (1.0 - c), g0, p1);
        const Vec qi = vec::axpy(h * h * (c - 0.5 * c * c), wg0, vec::axpy(c * h, wp1, q0));
        const Vec gi = sys.grad_potential(qi);
        Vec term = vec::scaled(s0 * sys.momentum_to_velocity(q0, pi), -h * (1.0 - c));
        term = vec::add(term, vec::axpy(h * h * (c - 0.5 * c * c), s0 * sys.momentum_to_velocity(q0, gi), gi));
        out = vec::axpy(h * b, term, out);
      }
      return out;
    };
    GenPartial d2 = [sys, quad](const Vec& q0, const Vec& p1, double h) {
      const Vec g0 = sys.grad_potential(q0);
      const Vec wp1 = sys.momentum_to_velocity(q0, p1);
      const Vec wg0 = sys.momentum_to_velocity(q0, g0);
      const Vec q1t = vec::axpy(0.5 * h * h, wg0, vec::axpy(h, wp1, q0));
      Vec psum(q0.size(), 0.0), gsum(q0.size(), 0.0);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        const double c = quad.nodes[i], b = quad.weights[i];
        psum = vec::axpy(b, vec::axpy(h * (1.0 - c), g0, p1), psum);
        const Vec qi = vec::axpy(h * h * (c - 0.5 * c * c), wg0, vec::axpy(c * h, wp1, q0));
        gsum = vec::axpy(b * c, sys.grad_potential(qi), gsum);
      }
      // q1~ + h W p1 - h W sum b p_i + h^2 W sum b c g_i
      const Vec inner = vec::axpy(h, gsum, vec::sub(p1, psum));
      return vec::axpy(h, sys.momentum_to_velocity(q0, inner), q1t);
    };
    return DiscreteRightHamiltonian(label, std::move(value), std::move(d1), std::move(d2), pred);
  }

  // r = 0: q_i = q0 + c_i h M^{-1} p1,
  // H = p1^T q0 + h/2 p1^T M^{-1} p1 + h sum b_i V(q_i)
  GenPartial d1 = [sys, quad](const Vec& q0, const Vec& p1, double h) {
    const Vec v = sys.momentum_to_velocity(q0, p1);
    Vec out = p1;
    for (std::size_t i = 0; i < quad.size(); ++i)
      out = vec::axpy(h * quad.weights[i], sys.grad_potential(vec::axpy(quad.nodes[i] * h, v, q0)), out);
    return out;
  };
  GenPartial d2 = [sys, quad](const Vec& q0, const Vec& p1, double h) {
    const Vec v = sys.momentum_to_velocity(q0, p1);
    Vec g(q0.size(), 0.0);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double c = quad.nodes[i];
      g = vec::axpy(quad.weights[i] * c, sys.grad_potential(vec::axpy(c * h, v, q0)), g);
    }
    return vec::axpy(h * h, sys.momentum_to_velocity(q0, g), vec::axpy(h, v, q0));
  };
  return DiscreteRightHamiltonian(label, std::move(value), std::move(d1), std::move(d2), pred);
}

DiscreteLeftHamiltonian build_left_hamiltonian_tvi(const SeparableSystem& sys, const QuadratureRule& quad, int r) {
  check_order(r);
  quad.validate();
  const TaylorExpansion psi(sys, r);
  const std::string label = tvi_label("left_hamiltonian", quad, r);

  GenValue value = [psi, quad, r](const Vec& p0, const Vec& q1, double h) {
    // momentum expanded backwards from p1~ lands on p0
    const Vec p1t = r == 1 ? vec::axpy(-h, psi.system().grad_potential(q1), p0) : p0;
    const PhaseState base(q1, p1t);
    const Vec q0t = psi.flow(base, -h).q();
    // point i sits at time -(1 - c_i) h from the end
    return -vec::dot(p0, q0t) - h * action_density_sum(psi, quad, base, h, -1.0);
  };
  const Predictor pred = explicit_euler_predictor(sys);
  if (r == 1) {
    // With w = 1 - c, g1 = grad V(q1), S1 its Hessian:
    //   q0~ = q1 - h W p0 + h^2/2 W g1
    //   p_i = p0 - c h g1,   q_i = q1 - w h W p0 + h^2 (w - w^2/2) W g1
    GenPartial d1 = [sys, quad](const Vec& p0, const Vec& q1, double h) {
      const Vec g1 = sys.grad_potential(q1);
      const Vec wp0 = sys.momentum_to_velocity(q1, p0);
      const Vec wg1 = sys.momentum_to_velocity(q1, g1);
      const Vec q0t = vec::axpy(0.5 * h * h, wg1, vec::axpy(-h, wp0, q1));
      Vec psum(q1.size(), 0.0), gsum(q1.size(), 0.0);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        const double c = quad.nodes[i], b = quad.weights[i], w = 1.0 - c;
        psum = vec::axpy(b, vec::axpy(-c * h, g1, p0), psum);
        const Vec qi = vec::axpy(h * h * (w - 0.5 * w * w), wg1, vec::axpy(-w * h, wp0, q1));
        gsum = vec::axpy(b * w, sys.grad_potential(qi), gsum);
      }
      // -q0~ + h W p0 - h W sum b p_i - h^2 W sum b w g_i
      const Vec inner = vec::axpy(-h, gsum, vec::sub(p0, psum));
      return vec::axpy(h, sys.momentum_to_velocity(q1, inner), vec::scaled(q0t, -1.0));
    };
    GenPartial d2 = [sys, quad](const Vec& p0, const Vec& q1, double h) {
      const Vec g1 = sys.grad_potential(q1);
      const Matrix s1 = sys.hessian_potential(q1);
      const Vec wp0 = sys.momentum_to_velocity(q1, p0);
      const Vec wg1 = sys.momentum_to_velocity(q1, g1);
      Vec out = vec::scaled(vec::axpy(0.5 * h * h, s1 * wp0, p0), -1.0);
      for (std::size_t i = 0; i < quad.size(); ++i) {
        const double c = quad.nodes[i], b = quad.weights[i], w = 1.0 - c;
        const Vec pi = vec::axpy(-c * h, g1, p0);
        const Vec qi = vec::axpy(h * h * (w - 0.5 * w * w), wg1, vec::axpy(-w * h, wp0, q1));
        const Vec gi = sys.grad_potential(qi);
        Vec term = vec::scaled(s1 * sys.momentum_to_velocity(q1, pi), c * h);
        term = vec::add(term, vec::axpy(h * h * (w - 0.5 * w * w), s1 * sys.momentum_to_velocity(q1, gi), gi));
        out = vec::axpy(h * b, term, out);
      }
      return out;
    };
    return DiscreteLeftHamiltonian(label, std::move(value), std::move(d1), std::move(d2), pred);
  }

  // r = 0: q_i = q1 - (1 - c_i) h M^{-1} p0,
  // H = -p0^T q1 + h/2 p0^T M^{-1} p0 + h sum b_i V(q_i)
  GenPartial d1 = [sys, quad](const Vec& p0, const Vec& q1, double h) {
    const Vec v = sys.momentum_to_velocity(q1, p0);
    Vec g(q1.size(), 0.0);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double w = 1.0 - quad.nodes[i];
      g = vec::axpy(quad.weights[i] * w, sys.grad_potential(vec::axpy(-w * h, v, q1)), g);
    }
    return vec::axpy(-h * h, sys.momentum_to_velocity(q1, g), vec::axpy(h, v, vec::scaled(q1, -1.0)));
  };
  GenPartial d2 = [sys, quad](const Vec& p0, const Vec& q1, double h) {
    const Vec v = sys.momentum_to_velocity(q1, p0);
    Vec out = vec::scaled(p0, -1.0);
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double w = 1.0 - quad.nodes[i];
      out = vec::axpy(h * quad.weights[i], sys.grad_potential(vec::axpy(-w * h, v, q1)), out);
    }
    return out;
  };
  return DiscreteLeftHamiltonian(label, std::move(value), std::move(d1), std::move(d2), pred);
}

const std::vector<std::string>& canned_names() {
  static const std::vector<std::string> names{"euler_a", "euler_b", "stormer_verlet", "h_tvi_trapezoid"};
  return names;
}

OneStepMap canned(const std::string& name, const SeparableSystem& sys, const SolveSettings& settings) {
  if (name == "euler_a") {
    return OneStepMap(name, [sys](const PhaseState& s, double h) {
      Vec p1 = vec::axpy(-h, sys.grad_potential(s.q()), s.p());
      Vec q1 = vec::axpy(h, sys.momentum_to_velocity(s.q(), p1), s.q());
      return PhaseState(std::move(q1), std::move(p1));
    });
  }
  if (name == "euler_b") {
    return OneStepMap(name, [sys](const PhaseState& s, double h) {
      Vec q1 = vec::axpy(h, sys.momentum_to_velocity(s.q(), s.p()), s.q());
      Vec p1 = vec::axpy(-h, sys.grad_potential(q1), s.p());
      return PhaseState(std::move(q1), std::move(p1));
    });
  }
  if (name == "stormer_verlet") {
    return OneStepMap(name, [sys](const PhaseState& s, double h) {
      const Vec ph = vec::axpy(-0.5 * h, sys.grad_potential(s.q()), s.p());
      Vec q1 = vec::axpy(h, sys.momentum_to_velocity(s.q(), ph), s.q());
      Vec p1 = vec::axpy(-0.5 * h, sys.grad_potential(q1), ph);
      return PhaseState(std::move(q1), std::move(p1));
    });
  }
  if (name == "h_tvi_trapezoid") {
    // q1 = q0 + h M^{-1} p0 - h^2/2 M^{-1} grad V(q0)
    // p1 = p0 - h/2 [grad V(q0) + grad V(q0 + h M^{-1} p1)]   (implicit in p1)
    return OneStepMap(name, [sys, settings](const PhaseState& s, double h) {
      if (h == 0.0) throw std::invalid_argument("h_tvi_trapezoid: step size must be nonzero");
      const Vec& q0 = s.q();
      const Vec g0 = sys.grad_potential(q0);
      Vec q1 = vec::axpy(h, sys.momentum_to_velocity(q0, s.p()), q0);
      q1 = vec::axpy(0.5 * h * h, sys.acceleration(q0), q1);
      const Residual res = [&](const Vec& p1) {
        const Vec qe = vec::axpy(h, sys.momentum_to_velocity(q0, p1), q0);
        return vec::sub(p1, vec::axpy(-0.5 * h, vec::add(g0, sys.grad_potential(qe)), s.p()));
      };
      SolveResult sol;
      try {
        sol = newton_solve(res, vec::axpy(-h, g0, s.p()), settings);
      } catch (const SolveError& e) {
        throw e.with_context("h_tvi_trapezoid");
      }
      return PhaseState(std::move(q1), std::move(sol.x));
    });
  }
  throw std::invalid_argument("unknown method: " + name);
}

}  // namespace genvi
