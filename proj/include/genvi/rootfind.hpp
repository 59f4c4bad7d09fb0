#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "genvi/linalg.hpp"

namespace genvi {

struct SolveSettings {
  double tol = 1e-12;     ///< residual infinity-norm threshold
  int max_iter = 50;
  double fd_step = 1e-7;  ///< forward-difference increment, scaled by max(1, |x_i|)

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double residual_norm = 0.0;
};

struct SolveResult {
  Vec x;
  SolveStats stats;
};

enum class SolveFailure { max_iter_exceeded, singular_jacobian, non_finite_residual };

const char* to_string(SolveFailure kind);

class SolveError : public std::runtime_error {
 public:
  SolveError(SolveFailure kind, Vec last_iterate, double residual_norm, const std::string& context = {});

  SolveFailure kind() const { return kind_; }
  const Vec& last_iterate() const { return last_; }
  double residual_norm() const { return residual_norm_; }

  /// Same failure, message prefixed with the name of whatever was being solved.
  SolveError with_context(const std::string& label) const;

 private:
  SolveFailure kind_;
  Vec last_;
  double residual_norm_;
  std::string context_;
};

using Residual = std::function<Vec(const Vec&)>;

/// Damped Newton iteration with a forward-difference Jacobian. On return
/// the residual infinity-norm is at most settings.tol.
SolveResult newton_solve(const Residual& residual, Vec guess, const SolveSettings& settings = {});

}  // namespace genvi
