#pragma once

#include <string>
#include <vector>

#include "genvi/core.hpp"
#include "genvi/fpu.hpp"
#include "genvi/genfunc.hpp"
#include "genvi/harness/config.hpp"
#include "genvi/harness/csv.hpp"

namespace genvi::harness {

/// Columns h, err_avgL, err_avgH, err_exactDL, err_exactDH, err_min; the last
/// is the smaller of the two averaged errors.
CsvTable run_resonance(const ResonanceConfig& cfg);

/// Columns t, I1..Im, I_total, H.
CsvTable run_fpu(const FpuConfig& cfg);

/// Step map used for an FPU method name (sv, htvi, imex).
OneStepMap fpu_method_map(const FpuSystem& sys, const std::string& method);

/// Largest |I_total(t) - I_total(0)| along an FPU run, every step.
double fpu_oscillatory_drift(const FpuSystem& sys, const std::string& method, double h, double T);

struct OrderReport {
  std::string method;
  std::vector<double> h;
  std::vector<double> errors;
  double slope;
  bool degenerate;
};

/// Global-error study on the harmonic oscillator from (1, 0).
OrderReport run_order(const OrderConfig& cfg);
OneStepMap order_method_map(const std::string& name);
CsvTable order_table(const OrderReport& report);

/// Text report of adjoint and self-adjointness defects.
std::string run_adjoint_demo();

}  // namespace genvi::harness
