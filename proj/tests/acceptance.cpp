// Acceptance suite: one PASS/FAIL line per criterion.
//
//   genvi_acceptance        run all criteria
//   genvi_acceptance N      run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "genvi/averaged.hpp"
#include "genvi/fpu.hpp"
#include "genvi/genfunc.hpp"
#include "genvi/harness/csv.hpp"
#include "genvi/harness/experiments.hpp"
#include "genvi/taylor_vi.hpp"
#include "genvi/verify.hpp"
#include "support.hpp"

using namespace genvi;
using testing::max_diff;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double measured, const char* rel, double threshold) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[!]") << what << "=" << measured << rel << threshold << " ";
  }
  void at_most(const std::string& what, double measured, double threshold) {
    require(measured <= threshold, what, measured, "<=", threshold);
  }
  void at_least(const std::string& what, double measured, double threshold) {
    require(measured >= threshold, what, measured, ">=", threshold);
  }
  void within(const std::string& what, double measured, double target, double tol) {
    const bool ok = std::abs(measured - target) <= tol;
    if (!ok) pass = false;
    detail << (ok ? "" : "[!]") << what << "=" << measured << " in " << target << "+-" << tol << " ";
  }
};

AveragedConfig averaged_config(double eps, double guard = 1e-8) {
  AveragedConfig cfg;
  cfg.epsilon = eps;
  cfg.singular_guard = guard;
  return cfg;
}

using TableFn = PhaseState (*)(const SeparableSystem&, const PhaseState&, double);

double table_gap(const OneStepMap& built, const SeparableSystem& sys, TableFn table, unsigned seed) {
  testing::Rng rng(seed);
  double worst = 0.0;
  for (const auto& s : testing::random_states(rng, 50))
    for (const double h : {0.05, 0.1}) worst = std::max(worst, max_diff(built(s, h), table(sys, s, h)));
  return worst;
}

double map_gap(const OneStepMap& a, const OneStepMap& b, double h, unsigned seed) {
  testing::Rng rng(seed);
  double worst = 0.0;
  for (const auto& s : testing::random_states(rng, 50)) worst = std::max(worst, max_diff(a(s, h), b(s, h)));
  return worst;
}

// 1: table equivalence and the same-as-type-I pattern
void criterion_tables(Outcome& o) {
  const auto sys = systems::cubic_oscillator(0.1);
  const auto ini = quadrature::rectangle_initial();
  const auto end = quadrature::rectangle_end();
  const auto li = to_map(build_lagrangian_tvi(sys, ini, 0));
  const auto ri = to_map(build_right_hamiltonian_tvi(sys, ini, 0));
  const auto mi = to_map(build_left_hamiltonian_tvi(sys, ini, 0));
  const auto le = to_map(build_lagrangian_tvi(sys, end, 0));
  const auto re = to_map(build_right_hamiltonian_tvi(sys, end, 0));
  const auto me = to_map(build_left_hamiltonian_tvi(sys, end, 0));

  o.at_most("initial/I", table_gap(li, sys, testing::table_euler_a, 1), 1e-10);
  o.at_most("initial/II", table_gap(ri, sys, testing::table_euler_a, 2), 1e-10);
  o.at_most("initial/III", table_gap(mi, sys, testing::table_initial_type3, 3), 1e-10);
  o.at_most("end/I", table_gap(le, sys, testing::table_euler_b, 4), 1e-10);
  o.at_most("end/II", table_gap(re, sys, testing::table_end_type2, 5), 1e-10);
  o.at_most("end/III", table_gap(me, sys, testing::table_euler_b, 6), 1e-10);

  o.at_most("initial II==I", map_gap(ri, li, 0.1, 7), 1e-10);
  o.at_least("initial III!=I", map_gap(mi, li, 0.1, 8), 1e-6);
  o.at_most("end III==I", map_gap(me, le, 0.1, 9), 1e-10);
  o.at_least("end II!=I", map_gap(re, le, 0.1, 10), 1e-6);
}

// 2: global order on the oscillator against the exact rotation
void criterion_order(Outcome& o) {
  const auto ho = systems::harmonic_oscillator();
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  const PhaseState s0(1.0, 0.0);
  auto slope = [&](const OneStepMap& m) { return convergence_order(m, ho_reference(), s0, 1.0, hs).slope; };
  o.within("euler_a", slope(canned("euler_a", ho)), 1.0, 0.15);
  o.within("euler_b", slope(canned("euler_b", ho)), 1.0, 0.15);
  o.within("stormer_verlet", slope(canned("stormer_verlet", ho)), 2.0, 0.15);
  o.within("h_tvi_trapezoid", slope(canned("h_tvi_trapezoid", ho)), 2.0, 0.2);
  o.within("sym(euler_a)", slope(symmetric_compose(canned("euler_a", ho))), 2.0, 0.2);
}

// 3: adjoint algebra
void criterion_adjoint(Outcome& o) {
  const auto cubic = systems::cubic_oscillator(0.1);
  const DiscreteRightHamiltonian ea("euler_a_H+", [cubic](const Vec& q0, const Vec& p1, double h) {
    return vec::dot(p1, q0) + h * cubic.energy(PhaseState(q0, p1));
  });
  const auto avg = averaged_right_hamiltonian(averaged_config(0.1), cubic_perturbation());
  const auto exact = exact_ho_right_hamiltonian();

  testing::Rng rng(2024);
  double dbl = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec a{testing::uniform(rng)}, b{testing::uniform(rng)};
    const double h = testing::uniform(rng, 0.05, 0.5);
    for (const auto* g : {&ea, &avg, &exact}) {
      const auto gg = adjoint_left(adjoint_right(*g));
      dbl = std::max(dbl, std::abs(gg.value(a, b, h) - g->value(a, b, h)));
    }
  }
  o.at_most("double adjoint", dbl, 1e-13);

  const auto a_adj = adjoint_map(canned("euler_a", cubic));
  const auto eb = canned("euler_b", cubic);
  double gap = 0.0;
  for (const auto& s : testing::random_states(rng, 20)) gap = std::max(gap, max_diff(a_adj(s, 0.1), eb(s, 0.1)));
  o.at_most("adjoint(euler_a) vs euler_b", gap, 1e-10);

  double d_exact = 0.0, d_avg = 0.0;
  for (const auto& s : testing::random_states(rng, 10)) {
    d_exact = std::max(d_exact, adjoint_defect(exact, s, 0.3));
    d_avg = std::max(d_avg, adjoint_defect(avg, s, 0.3));
  }
  o.at_most("adjoint_defect exact", d_exact, 1e-9);
  o.at_most("adjoint_defect averaged", d_avg, 1e-8);
}

// 4: symmetry
void criterion_symmetry(Outcome& o) {
  const auto cubic = systems::cubic_oscillator(0.1);
  const auto vb = cubic_perturbation();
  testing::Rng rng(99);
  const auto states = testing::random_states(rng, 20);
  auto worst = [&](const OneStepMap& m, double h) {
    double w = 0.0;
    for (const auto& s : states) w = std::max(w, symmetry_defect(m, s, h));
    return w;
  };
  o.at_most("stormer_verlet", worst(canned("stormer_verlet", cubic), 0.3), 1e-8);
  o.at_most("exact_dl", worst(exact_dl_ho_map(), 0.3), 1e-8);
  o.at_most("exact_dh", worst(exact_dh_ho_map(), 0.3), 1e-8);
  o.at_most("averaged_L", worst(averaged_lagrangian_map(averaged_config(0.1), vb), 0.3), 1e-8);
  o.at_most("averaged_H", worst(averaged_hamiltonian_map(averaged_config(0.1), vb), 0.3), 1e-8);
  const PhaseState s0(1.0, 0.0);
  o.at_least("euler_a", symmetry_defect(canned("euler_a", cubic), s0, 0.1), 1e-4);
  o.at_least("h_tvi_trapezoid", symmetry_defect(canned("h_tvi_trapezoid", cubic), s0, 0.1), 1e-4);
}

// 5: symplecticity of every shipped map
void criterion_symplectic(Outcome& o) {
  const auto cubic = systems::cubic_oscillator(0.1);
  const auto vb = cubic_perturbation();
  std::vector<OneStepMap> maps;
  for (const auto& name : canned_names()) maps.push_back(canned(name, cubic));
  maps.push_back(symmetric_compose(canned("euler_a", cubic)));
  for (const auto& rule : {quadrature::rectangle_initial(), quadrature::rectangle_end(), quadrature::trapezoid()})
    for (const int r : {0, 1}) {
      maps.push_back(to_map(build_lagrangian_tvi(cubic, rule, r)));
      maps.push_back(to_map(build_right_hamiltonian_tvi(cubic, rule, r)));
      maps.push_back(to_map(build_left_hamiltonian_tvi(cubic, rule, r)));
    }
  maps.push_back(exact_dl_ho_map());
  maps.push_back(exact_dh_ho_map());
  maps.push_back(averaged_lagrangian_map(averaged_config(0.1), vb));
  maps.push_back(averaged_hamiltonian_map(averaged_config(0.1), vb));
  maps.push_back(kick_drift_kick_map(averaged_config(0.1), vb));

  double worst = 0.0;
  std::string worst_name;
  const PhaseState s(0.8, -0.3);
  for (const auto& m : maps)
    for (const double h : {0.05, 0.1}) {
      const double d = symplecticity_defect(m, s, h);
      if (d > worst) {
        worst = d;
        worst_name = m.label();
      }
    }
  o.at_most("worst 1D map (" + worst_name + ")", worst, 1e-6);

  const FpuSystem fpu;
  const auto sep = as_separable(fpu);
  const auto f0 = fpu_initial_state(fpu);
  double wf = 0.0;
  for (const auto& m : {canned("stormer_verlet", sep), canned("h_tvi_trapezoid", sep), imex_map(fpu)})
    wf = std::max(wf, symplecticity_defect(m, f0, 0.01));
  o.at_most("worst FPU map", wf, 1e-6);
  o.at_least("explicit Euler control", symplecticity_defect(testing::explicit_euler(cubic), s, 0.1), 1e-3);
}

// 6: averaged local truncation error
void criterion_truncation(Outcome& o) {
  const auto vb = cubic_perturbation();
  const PhaseState s0(1.0, 0.0);
  const std::vector<double> hs{0.05, 0.1, 0.2, 0.4};
  for (const bool lagrangian : {true, false}) {
    const std::string tag = lagrangian ? "avgL" : "avgH";
    auto local = [&](double eps, double h) {
      const auto cfg = averaged_config(eps);
      const auto m = lagrangian ? averaged_lagrangian_map(cfg, vb) : averaged_hamiltonian_map(cfg, vb);
      return local_error(m, rk4_reference(systems::cubic_oscillator(eps), 2000), s0, h);
    };
    std::vector<double> errs;
    for (const double h : hs) errs.push_back(local(0.1, h));
    o.within(tag + " slope", loglog_slope(hs, errs), 3.0, 0.25);
    o.within(tag + " eps ratio", local(0.1, 0.2) / local(0.05, 0.2), 4.0, 1.2);
  }
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 7: resonance at desk scale
void criterion_resonance(Outcome& o) {
  const double T = 1000.0;
  const auto sys = systems::perturbed_cubic_oscillator(0.1);
  const EnergyFn pert = [sys](const PhaseState& s) { return sys.energy(s); };
  const EnergyFn ho = [](const PhaseState& s) { return 0.5 * (s.q()[0] * s.q()[0] + s.p()[0] * s.p()[0]); };
  const PhaseState s0(1.0, 0.0);
  const auto vb = cubic_perturbation();
  const auto avg_l = averaged_lagrangian_map(averaged_config(0.1, 0.0), vb);
  const auto avg_h = averaged_hamiltonian_map(averaged_config(0.1, 0.0), vb);

  const auto band = linspace(0.3, 1.2, 19);
  const auto near_half = linspace(kPi / 2 - 0.05, kPi / 2 + 0.05, 11);
  const auto near_pi = linspace(kPi - 0.05, kPi + 0.05, 11);

  auto max_of = [](const SweepResult& r) { return *std::max_element(r.metric.begin(), r.metric.end()); };
  const double med_h = median(energy_error_sweep(avg_h, pert, s0, T, band).metric);
  const double peak_h = max_of(energy_error_sweep(avg_h, pert, s0, T, near_half));
  o.at_least("avgH peak/median", peak_h / med_h, 1e2);
  const double med_l = median(energy_error_sweep(avg_l, pert, s0, T, band).metric);
  const double peak_l = max_of(energy_error_sweep(avg_l, pert, s0, T, near_pi));
  o.at_least("avgL peak/median", peak_l / med_l, 1e2);

  const auto dl = energy_error_sweep(exact_dl_ho_map(), ho, s0, T, {1.0, kPi});
  o.at_most("exactDL h=1", dl.metric[0], 1e-9);
  if (dl.substituted[1]) o.at_least("exactDL h=pi substituted", dl.metric[1], 1e6);
  else o.at_least("exactDL pi/h=1 ratio", dl.metric[1] / std::max(dl.metric[0], 1e-300), 1e3);

  const auto dh = energy_error_sweep(exact_dh_ho_map(), ho, s0, T, {1.0, kPi / 2});
  o.at_most("exactDH h=1", dh.metric[0], 1e-9);
  if (dh.substituted[1]) o.at_least("exactDH h=pi/2 substituted", dh.metric[1], 1e6);
  else o.at_least("exactDH pi/2 / h=1 ratio", dh.metric[1] / std::max(dh.metric[0], 1e-300), 1e3);
}

// 8: FPU ordering of the oscillatory-energy drift
void criterion_fpu(Outcome& o) {
  const FpuSystem sys(3, 50.0);
  double drift[3];
  const char* names[3] = {"imex", "sv", "htvi"};
  parallel_for(3, [&](std::size_t i) { drift[i] = harness::fpu_oscillatory_drift(sys, names[i], 0.01, 200.0); });
  o.detail << "imex=" << drift[0] << " sv=" << drift[1] << " htvi=" << drift[2] << " ";
  o.at_most("imex-sv", drift[0] - drift[1], 0.0);
  o.at_most("sv-htvi", drift[1] - drift[2], 0.0);
  o.at_least("htvi/sv", drift[2] / drift[1], 2.0);
}

// 9: averaged steps against the brute-force oracle
void criterion_oracle(Outcome& o) {
  const auto vb = cubic_perturbation();
  const PhaseState s0(1.0, 0.0);
  o.at_most("avgL", max_diff(averaged_lagrangian_step(averaged_config(0.1), vb, s0, 0.3),
                             testing::oracle_averaged_lagrangian(1.0, 0.0, 0.3, 0.1)),
            1e-6);
  o.at_most("avgH", max_diff(averaged_hamiltonian_step(averaged_config(0.1), vb, s0, 0.3),
                             testing::oracle_averaged_hamiltonian(1.0, 0.0, 0.3, 0.1)),
            1e-6);
}

// 10: two CLI runs give byte-identical CSV
void criterion_determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "genvi_acceptance";
  fs::create_directories(dir);
  const fs::path a = dir / "run_a.csv", b = dir / "run_b.csv";
  fs::remove(a);
  fs::remove(b);
  for (const auto& p : {a, b}) {
    const std::string cmd = std::string("\"") + GENVI_CLI_PATH + "\" resonance --eps 0.1 --h-min 0.1 --h-max 10 " +
                            "--h-count 50 --t-final 1000 --out \"" + p.string() + "\" > /dev/null";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "exit status", rc, "==", 0);
  }
  if (!fs::exists(a) || !fs::exists(b)) {
    o.pass = false;
    o.detail << "missing output ";
    return;
  }
  const std::string ta = harness::read_text_file(a.string());
  const std::string tb = harness::read_text_file(b.string());
  o.require(ta == tb && !ta.empty(), "identical", ta == tb ? 1.0 : 0.0, "==", 1.0);
  o.detail << "bytes=" << ta.size() << " ";
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "table equivalence", 5, criterion_tables},
      {2, "convergence order", 10, criterion_order},
      {3, "adjoint algebra", 5, criterion_adjoint},
      {4, "symmetry", 5, criterion_symmetry},
      {5, "symplecticity", 10, criterion_symplectic},
      {6, "averaged truncation error", 10, criterion_truncation},
      {7, "resonance reproduction", 120, criterion_resonance},
      {8, "FPU ordering", 60, criterion_fpu},
      {9, "oracle equivalence", 30, criterion_oracle},
      {10, "determinism", 1e9, criterion_determinism},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (argc > 1 && (only < 1 || only > 10)) {
    std::cerr << "usage: genvi_acceptance [1-10]\n";
    return 2;
  }

  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Outcome o;
    o.detail.precision(4);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what() << " ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail << "[!]runtime over " << c.budget_s << "s ";
    }
    ok = ok && o.pass;
    std::printf("%s criterion %d %s: %s(%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
