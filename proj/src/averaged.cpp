#include "genvi/averaged.hpp"

#include <cmath>
#include <utility>

namespace genvi {

namespace {

void require_1d(const PhaseState& s, const char* what) {
  if (s.dim() != 1) throw DimensionMismatch(std::string(what) + ": harmonic-oscillator methods are one-dimensional");
}

void require_1d(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != 1 || b.size() != 1)
    throw DimensionMismatch(std::string(what) + ": harmonic-oscillator methods are one-dimensional");
}

// int_0^h f(t) dt; h may be negative.
template <class F>
double integrate(const QuadratureRule& rule, double h, F&& f) {
  return h * rule.apply([&](double c) { return f(c * h); });
}

// Trajectory-averaged impulses
//   i1 = int V_B'(q_A) dq_A/dq0 dt,   i2 = int V_B'(q_A) dq_A/d(second) dt
// and the averaged potential itself.
struct Averages {
  double value;
  double i1;
  double i2;
};

Averages averages(const AveragedConfig& cfg, const Perturbation1D& vb, const HoBoundaryFlow& f) {
  const double h = f.h;
  // type1: sin(h-t)/sin h, sin t/sin h;  type2: cos(h-t)/cos h, sin t/cos h
  const bool t1 = f.kind == BoundaryKind::type1;
  const double den = t1 ? std::sin(h) : std::cos(h);
  const QuadratureRule& rule = cfg.avg_quadrature;
  Averages a{};
  a.value = integrate(rule, h, [&](double t) { return vb.potential(f.eval(t)); });
  a.i1 = integrate(rule, h, [&](double t) {
    const double w = t1 ? std::sin(h - t) : std::cos(h - t);
    return vb.gradient(f.eval(t)) * w / den;
  });
  a.i2 = integrate(rule, h, [&](double t) { return vb.gradient(f.eval(t)) * std::sin(t) / den; });
  return a;
}

double scalar(const Vec& v) { return v[0]; }

SolveResult scalar_solve(const std::string& label, const std::function<double(double)>& r, double guess,
                         const SolveSettings& settings) {
  const Residual res = [&](const Vec& x) { return Vec{r(x[0])}; };
  try {
    return newton_solve(res, Vec{guess}, settings);
  } catch (const SolveError& e) {
    throw e.with_context(label);
  }
}

}  // namespace

double HoBoundaryFlow::eval(double t) const { return c1 * std::cos(t) + c2 * std::sin(t); }

HoBoundaryFlow ho_bvp(BoundaryKind kind, double q0, double second, double h, double singular_guard) {
  if (!(singular_guard >= 0.0)) throw std::invalid_argument("ho_bvp: singular_guard must be >= 0");
  const double s = std::sin(h);
  const double c = std::cos(h);
  if (kind == BoundaryKind::type1) {
    if (std::abs(s) <= singular_guard) throw SingularBvp("ho_bvp: h is too close to a multiple of pi");
    return {kind, h, q0, (second - q0 * c) / s};
  }
  if (std::abs(c) <= singular_guard) throw SingularBvp("ho_bvp: h is too close to an odd multiple of pi/2");
  return {kind, h, q0, (second + q0 * s) / c};
}

Perturbation1D cubic_perturbation() {
  return {[](double q) { return q * q * q / 3.0; }, [](double q) { return q * q; }, "cubic"};
}

void AveragedConfig::validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("AveragedConfig: epsilon must be >= 0");
  if (!(singular_guard >= 0.0)) throw std::invalid_argument("AveragedConfig: singular_guard must be >= 0");
  avg_quadrature.validate();
  solve.validate();
}

PhaseState exact_dl_ho_step(const PhaseState& s, double h) {
  require_1d(s, "exact_dl_ho_step");
  const double q0 = s.q()[0], p0 = s.p()[0];
  const double q1 = q0 * std::cos(h) + p0 * std::sin(h);
  const double p1 = q1 * (std::cos(h) / std::sin(h)) - q0 * (1.0 / std::sin(h));
  return PhaseState(q1, p1);
}

PhaseState exact_dh_ho_step(const PhaseState& s, double h) {
  require_1d(s, "exact_dh_ho_step");
  const double q0 = s.q()[0], p0 = s.p()[0];
  const double p1 = p0 * std::cos(h) - q0 * std::sin(h);
  const double q1 = p1 * std::tan(h) + q0 * (1.0 / std::cos(h));
  return PhaseState(q1, p1);
}

PhaseState ho_rotation(const PhaseState& s, double t) {
  require_1d(s, "ho_rotation");
  const double q = s.q()[0], p = s.p()[0];
  const double c = std::cos(t), sn = std::sin(t);
  return PhaseState(q * c + p * sn, p * c - q * sn);
}

DiscreteLagrangian exact_ho_discrete_lagrangian() {
  return DiscreteLagrangian(
      "exact_ho_L",
      [](const Vec& a, const Vec& b, double h) {
        require_1d(a, b, "exact_ho_L");
        const double q0 = a[0], q1 = b[0];
        return ((q0 * q0 + q1 * q1) * std::cos(h) - 2.0 * q0 * q1) / (2.0 * std::sin(h));
      },
      [](const Vec& a, const Vec& b, double h) { return Vec{(a[0] * std::cos(h) - b[0]) / std::sin(h)}; },
      [](const Vec& a, const Vec& b, double h) { return Vec{(b[0] * std::cos(h) - a[0]) / std::sin(h)}; },
      ho_rotation);
}

DiscreteRightHamiltonian exact_ho_right_hamiltonian() {
  return DiscreteRightHamiltonian(
      "exact_ho_H+",
      [](const Vec& a, const Vec& b, double h) {
        require_1d(a, b, "exact_ho_H+");
        const double q0 = a[0], p1 = b[0];
        return (p1 * q0 + 0.5 * (q0 * q0 + p1 * p1) * std::sin(h)) / std::cos(h);
      },
      [](const Vec& a, const Vec& b, double h) { return Vec{(b[0] + a[0] * std::sin(h)) / std::cos(h)}; },
      [](const Vec& a, const Vec& b, double h) { return Vec{(a[0] + b[0] * std::sin(h)) / std::cos(h)}; },
      ho_rotation);
}

DiscreteLagrangian averaged_lagrangian(const AveragedConfig& cfg, const Perturbation1D& vb) {
  cfg.validate();
  const DiscreteLagrangian la = exact_ho_discrete_lagrangian();
  auto avg = [cfg, vb](const Vec& a, const Vec& b, double h) {
    require_1d(a, b, "averaged_lagrangian");
    return averages(cfg, vb, ho_bvp(BoundaryKind::type1, a[0], b[0], h, cfg.singular_guard));
  };
  const double eps = cfg.epsilon;
  return DiscreteLagrangian(
      "averaged_L",
      [la, avg, eps](const Vec& a, const Vec& b, double h) { return la.value(a, b, h) - eps * avg(a, b, h).value; },
      [la, avg, eps](const Vec& a, const Vec& b, double h) {
        return Vec{scalar(la.d1(a, b, h)) - eps * avg(a, b, h).i1};
      },
      [la, avg, eps](const Vec& a, const Vec& b, double h) {
        return Vec{scalar(la.d2(a, b, h)) - eps * avg(a, b, h).i2};
      },
      ho_rotation);
}

DiscreteRightHamiltonian averaged_right_hamiltonian(const AveragedConfig& cfg, const Perturbation1D& vb) {
  cfg.validate();
  const DiscreteRightHamiltonian ha = exact_ho_right_hamiltonian();
  auto avg = [cfg, vb](const Vec& a, const Vec& b, double h) {
    require_1d(a, b, "averaged_right_hamiltonian");
    return averages(cfg, vb, ho_bvp(BoundaryKind::type2, a[0], b[0], h, cfg.singular_guard));
  };
  const double eps = cfg.epsilon;
  return DiscreteRightHamiltonian(
      "averaged_H+",
      [ha, avg, eps](const Vec& a, const Vec& b, double h) { return ha.value(a, b, h) + eps * avg(a, b, h).value; },
      [ha, avg, eps](const Vec& a, const Vec& b, double h) {
        return Vec{scalar(ha.d1(a, b, h)) + eps * avg(a, b, h).i1};
      },
      [ha, avg, eps](const Vec& a, const Vec& b, double h) {
        return Vec{scalar(ha.d2(a, b, h)) + eps * avg(a, b, h).i2};
      },
      ho_rotation);
}

// p0 - eps i1 = (q1 - q0 cos h)/sin h, solved for q1;
// p1 = (q1 cos h - q0)/sin h - eps i2.
StepResult averaged_lagrangian_solve(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                     double h) {
  require_1d(s, "averaged_lagrangian_step");
  if (h == 0.0) throw std::invalid_argument("averaged_lagrangian_step: step size must be nonzero");
  const double q0 = s.q()[0], p0 = s.p()[0];
  const double sn = std::sin(h), cs = std::cos(h);
  if (std::abs(sn) <= cfg.singular_guard) throw SingularBvp("averaged_lagrangian_step: h is too close to a multiple of pi");
  auto flow = [&](double q1) { return HoBoundaryFlow{BoundaryKind::type1, h, q0, (q1 - q0 * cs) / sn}; };
  const auto r = [&](double q1) {
    return p0 - cfg.epsilon * averages(cfg, vb, flow(q1)).i1 - (q1 - q0 * cs) / sn;
  };
  const SolveResult sol = scalar_solve("averaged_L", r, q0 * cs + p0 * sn, cfg.solve);
  const double q1 = sol.x[0];
  const double p1 = (q1 * cs - q0) / sn - cfg.epsilon * averages(cfg, vb, flow(q1)).i2;
  return {PhaseState(q1, p1), sol.stats};
}

// p0 - eps i1 = (p1 + q0 sin h)/cos h, solved for p1;
// q1 = p1 tan h + q0 sec h + eps i2.
StepResult averaged_hamiltonian_solve(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                      double h) {
  require_1d(s, "averaged_hamiltonian_step");
  if (h == 0.0) throw std::invalid_argument("averaged_hamiltonian_step: step size must be nonzero");
  const double q0 = s.q()[0], p0 = s.p()[0];
  const double sn = std::sin(h), cs = std::cos(h);
  if (std::abs(cs) <= cfg.singular_guard)
    throw SingularBvp("averaged_hamiltonian_step: h is too close to an odd multiple of pi/2");
  auto flow = [&](double p1) { return HoBoundaryFlow{BoundaryKind::type2, h, q0, (p1 + q0 * sn) / cs}; };
  const auto r = [&](double p1) {
    return p0 - cfg.epsilon * averages(cfg, vb, flow(p1)).i1 - (p1 + q0 * sn) / cs;
  };
  const SolveResult sol = scalar_solve("averaged_H", r, p0 * cs - q0 * sn, cfg.solve);
  const double p1 = sol.x[0];
  const double q1 = p1 * std::tan(h) + q0 / cs + cfg.epsilon * averages(cfg, vb, flow(p1)).i2;
  return {PhaseState(q1, p1), sol.stats};
}

PhaseState averaged_lagrangian_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                    double h) {
  return averaged_lagrangian_solve(cfg, vb, s, h).state;
}

PhaseState averaged_hamiltonian_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s,
                                     double h) {
  return averaged_hamiltonian_solve(cfg, vb, s, h).state;
}

PhaseState kick_drift_kick_step(const AveragedConfig& cfg, const Perturbation1D& vb, const PhaseState& s, double h) {
  require_1d(s, "kick_drift_kick_step");
  const double k = 0.5 * h * cfg.epsilon;
  const PhaseState half(s.q()[0], s.p()[0] - k * vb.gradient(s.q()[0]));
  const PhaseState drifted = ho_rotation(half, h);
  const double q1 = drifted.q()[0];
  return PhaseState(q1, drifted.p()[0] - k * vb.gradient(q1));
}

OneStepMap exact_dl_ho_map() { return OneStepMap("exact_dl", exact_dl_ho_step); }
OneStepMap exact_dh_ho_map() { return OneStepMap("exact_dh", exact_dh_ho_step); }

OneStepMap averaged_lagrangian_map(AveragedConfig cfg, Perturbation1D vb) {
  cfg.validate();
  return OneStepMap("averaged_L", [cfg = std::move(cfg), vb = std::move(vb)](const PhaseState& s, double h) {
    return averaged_lagrangian_step(cfg, vb, s, h);
  });
}

OneStepMap averaged_hamiltonian_map(AveragedConfig cfg, Perturbation1D vb) {
  cfg.validate();
  return OneStepMap("averaged_H", [cfg = std::move(cfg), vb = std::move(vb)](const PhaseState& s, double h) {
    return averaged_hamiltonian_step(cfg, vb, s, h);
  });
}

OneStepMap kick_drift_kick_map(AveragedConfig cfg, Perturbation1D vb) {
  cfg.validate();
  return OneStepMap("kick_drift_kick", [cfg = std::move(cfg), vb = std::move(vb)](const PhaseState& s, double h) {
    return kick_drift_kick_step(cfg, vb, s, h);
  });
}

}  // namespace genvi
