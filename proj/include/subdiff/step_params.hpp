#pragma once

#include <string>

#include "subdiff/exponent.hpp"
#include "subdiff/time_mesh.hpp"

namespace subdiff {

/// Rule for choosing the per-step exponent alpha_n (and with it the
/// superconvergence point t_{n-theta_n}, theta_n = alpha_n/2).  The offset
/// convention is t_{n-a} := a t_{n-1} + (1-a) t_n.
///
/// Every rule must produce an alpha_n satisfying
///   alpha(t_{n-alpha_n/2}) >= alpha_n - condition_slack,
/// which is what makes the chosen point superconvergent; a violation is a
/// hard error, never silently patched.
struct SuperconvPolicy {
  enum class Kind { interval_min, offset, offset_frac, newton, at_left, at_right };

  Kind kind = Kind::interval_min;
  double offset_a = 0.5;       ///< Kind::offset: alpha_n = alpha(t_{n-a})
  double frac_c = 0.5;         ///< Kind::offset_frac: a = c * alpha(t_n)
  double newton_tol = 1e-12;   ///< Kind::newton fixed-point tolerance
  int newton_max_iter = 50;
  double condition_slack = 1e-14;

  static SuperconvPolicy interval_min();
  static SuperconvPolicy offset(double a);
  static SuperconvPolicy offset_frac(double c);
  static SuperconvPolicy newton(double tol = 1e-12, int max_iter = 50);
  static SuperconvPolicy at_left();
  static SuperconvPolicy at_right();
};

/// Resolved per-step temporal parameters.
struct StepParams {
  int n = 0;
  double alpha_n = 0.0;     ///< chosen exponent kappa for step n
  double theta_n = 0.0;     ///< alpha_n / 2, in [0, 1/2)
  double t_super = 0.0;     ///< t_{n-theta_n}
  double alpha_star = 0.0;  ///< alpha(t_super), the frozen evaluation exponent
};

StepParams select_step_params(const VariableExponent& alpha,
                              const GradedMesh& mesh, int n,
                              const SuperconvPolicy& policy);

std::string to_string(const SuperconvPolicy& policy);

}  // namespace subdiff
