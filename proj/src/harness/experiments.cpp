#include "genvi/harness/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "genvi/averaged.hpp"
#include "genvi/taylor_vi.hpp"
#include "genvi/verify.hpp"

namespace genvi::harness {

CsvTable run_resonance(const ResonanceConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.grid();
  const double T = cfg.horizon();

  // the sweep studies blow-up near the singular step sizes, so no guard
  AveragedConfig acfg;
  acfg.epsilon = cfg.eps;
  acfg.singular_guard = 0.0;
  const Perturbation1D vb = cubic_perturbation();
  const PerturbedSystem psys = systems::perturbed_cubic_oscillator(cfg.eps);
  const SeparableSystem ho = systems::harmonic_oscillator();

  const EnergyFn perturbed = [psys](const PhaseState& s) { return psys.energy(s); };
  const EnergyFn harmonic = [ho](const PhaseState& s) { return ho.energy(s); };
  struct Column {
    OneStepMap map;
    EnergyFn energy;
  };
  const std::vector<Column> cols{{averaged_lagrangian_map(acfg, vb), perturbed},
                                 {averaged_hamiltonian_map(acfg, vb), perturbed},
                                 {exact_dl_ho_map(), harmonic},
                                 {exact_dh_ho_map(), harmonic}};

  const PhaseState s0(1.0, 0.0);
  const std::size_t nh = grid.size();
  std::vector<double> metric(cols.size() * nh, 0.0);
  // one task per (method, h); results land at a fixed index
  parallel_for(
      metric.size(),
      [&](std::size_t k) {
        const Column& c = cols[k / nh];
        metric[k] = max_energy_error(c.map, c.energy, s0, T, grid[k % nh], cfg.overflow);
      },
      cfg.threads);

  CsvTable t;
  t.columns = {"h", "err_avgL", "err_avgH", "err_exactDL", "err_exactDH", "err_min"};
  t.comment = cfg.describe();
  for (std::size_t i = 0; i < nh; ++i) {
    const double l = metric[i], h = metric[nh + i];
    t.rows.push_back({grid[i], l, h, metric[2 * nh + i], metric[3 * nh + i], std::min(l, h)});
  }
  return t;
}

OneStepMap fpu_method_map(const FpuSystem& sys, const std::string& method) {
  if (method == "sv") return canned("stormer_verlet", as_separable(sys));
  if (method == "htvi") return canned("h_tvi_trapezoid", as_separable(sys));
  if (method == "imex") return imex_map(sys);
  throw ConfigError("unknown FPU method '" + method + "'");
}

CsvTable run_fpu(const FpuConfig& cfg) {
  cfg.validate();
  const FpuSystem sys(cfg.m, cfg.omega);
  const OneStepMap map = fpu_method_map(sys, cfg.method);
  const long long steps = step_count(cfg.horizon(), cfg.h);

  CsvTable t;
  t.columns.push_back("t");
  for (int j = 1; j <= cfg.m; ++j) t.columns.push_back("I" + std::to_string(j));
  t.columns.push_back("I_total");
  t.columns.push_back("H");
  t.comment = cfg.describe();

  auto record = [&](long long k, const PhaseState& s) {
    const OscillatoryEnergy e = oscillatory_energy(sys, s);
    std::vector<double> row{static_cast<double>(k) * cfg.h};
    row.insert(row.end(), e.per_spring.begin(), e.per_spring.end());
    row.push_back(e.total);
    row.push_back(fpu_energy(sys, s));
    t.rows.push_back(std::move(row));
  };
  PhaseState s = fpu_initial_state(sys);
  record(0, s);
  for (long long k = 1; k <= steps; ++k) {
    s = map(s, cfg.h);
    if (k % cfg.stride == 0 || k == steps) record(k, s);
  }
  return t;
}

double fpu_oscillatory_drift(const FpuSystem& sys, const std::string& method, double h, double T) {
  const OneStepMap map = fpu_method_map(sys, method);
  PhaseState s = fpu_initial_state(sys);
  const double i0 = oscillatory_energy(sys, s).total;
  double worst = 0.0;
  const long long steps = step_count(T, h);
  for (long long k = 0; k < steps; ++k) {
    s = map(s, h);
    worst = std::max(worst, std::abs(oscillatory_energy(sys, s).total - i0));
  }
  return worst;
}

OneStepMap order_method_map(const std::string& name) {
  const SeparableSystem ho = systems::harmonic_oscillator();
  if (name == "sym_euler_a") return symmetric_compose(canned("euler_a", ho));
  if (name == "exact_dl") return exact_dl_ho_map();
  if (name == "exact_dh") return exact_dh_ho_map();
  try {
    return canned(name, ho);
  } catch (const std::invalid_argument&) {
    throw ConfigError("unknown method '" + name + "'");
  }
}

OrderReport run_order(const OrderConfig& cfg) {
  cfg.validate();
  const OrderResult r =
      convergence_order(order_method_map(cfg.method), ho_reference(), PhaseState(1.0, 0.0), cfg.t_final, cfg.h_values);
  return {cfg.method, r.h, r.errors, r.slope, r.degenerate};
}

CsvTable order_table(const OrderReport& report) {
  CsvTable t;
  t.columns = {"h", "error"};
  t.comment = "experiment=order method=" + report.method + " system=harmonic_oscillator q0=1 p0=0";
  for (std::size_t i = 0; i < report.h.size(); ++i) t.rows.push_back({report.h[i], report.errors[i]});
  return t;
}

std::string run_adjoint_demo() {
  const SeparableSystem ho = systems::harmonic_oscillator();
  const PhaseState s(0.8, -0.3);
  const double h = 0.1;
  std::ostringstream os;
  os << "# state (q, p) = (0.8, -0.3), h = 0.1, harmonic oscillator unless noted\n";

  // H+ of symplectic Euler-A: p1^T q0 + h H(q0, p1)
  const DiscreteRightHamiltonian euler_a(
      "euler_a_H+",
      [ho](const Vec& q0, const Vec& p1, double t) { return vec::dot(p1, q0) + t * ho.energy(PhaseState(q0, p1)); },
      [ho](const Vec& q0, const Vec& p1, double t) { return vec::axpy(t, ho.grad_potential(q0), p1); },
      [ho](const Vec& q0, const Vec& p1, double t) { return vec::axpy(t, ho.momentum_to_velocity(q0, p1), q0); });
  const DiscreteRightHamiltonian exact = exact_ho_right_hamiltonian();
  AveragedConfig acfg;
  acfg.epsilon = 0.1;
  const DiscreteRightHamiltonian averaged = averaged_right_hamiltonian(acfg, cubic_perturbation());

  for (const DiscreteRightHamiltonian* hd : {&euler_a, &exact, &averaged}) {
    const double step_h = hd == &averaged ? 0.3 : h;
    const OneStepMap fwd = to_map(*hd);
    const OneStepMap as_left = to_map(legendre_II_to_III(*hd));
    const OneStepMap adj = to_map(adjoint_right(*hd));
    os << hd->label() << " h=" << format_number(step_h) << "\n";
    os << "  adjoint_defect                      " << format_number(adjoint_defect(*hd, s, step_h)) << "\n";
    os << "  |F(H-) - F(H+)| via Legendre         " << format_number(max_abs_diff(as_left(s, step_h), fwd(s, step_h)))
       << "\n";
    os << "  |F(H-) - F((H+)*)| self-adjointness  "
       << format_number(max_abs_diff(as_left(s, step_h), adj(s, step_h))) << "\n";
    os << "  symmetry_defect                     " << format_number(symmetry_defect(fwd, s, step_h)) << "\n";
  }
  return os.str();
}

}  // namespace genvi::harness
