#include "subdiff/step_params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "subdiff/errors.hpp"

namespace subdiff {

namespace {

double blend(double tl, double tr, double a) { return a * tl + (1.0 - a) * tr; }

/// Minimum of alpha over [tl, tr]: 33-point scan, then golden-section
/// refinement of the bracketing interval.
double sampled_min(const VariableExponent& alpha, double tl, double tr) {
  constexpr int kScan = 33;
  double best = alpha(tl);
  int best_i = 0;
  for (int i = 1; i < kScan; ++i) {
    const double t = tl + (tr - tl) * i / (kScan - 1);
    const double v = alpha(t);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double lo = tl + (tr - tl) * std::max(best_i - 1, 0) / (kScan - 1);
  double hi = tl + (tr - tl) * std::min(best_i + 1, kScan - 1) / (kScan - 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = alpha(x1);
  double f2 = alpha(x2);
  for (int it = 0; it < 30; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = alpha(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = alpha(x2);
    }
  }
  return std::min({best, f1, f2});
}

double interval_min(const VariableExponent& alpha, double tl, double tr) {
  switch (alpha.hint()) {
    case Monotonicity::increasing: return alpha(tl);
    case Monotonicity::decreasing: return alpha(tr);
    default: return sampled_min(alpha, tl, tr);
  }
}

double interval_max(const VariableExponent& alpha, double tl, double tr) {
  switch (alpha.hint()) {
    case Monotonicity::increasing: return alpha(tr);
    case Monotonicity::decreasing: return alpha(tl);
    default: {
      constexpr int kScan = 33;
      double best = alpha(tl);
      for (int i = 1; i < kScan; ++i)
        best = std::max(best, alpha(tl + (tr - tl) * i / (kScan - 1)));
      return best;
    }
  }
}

std::string step_context(int n, const SuperconvPolicy& policy) {
  return "step n=" + std::to_string(n) + ", policy " + to_string(policy);
}

}  // namespace

SuperconvPolicy SuperconvPolicy::interval_min() { return {}; }

SuperconvPolicy SuperconvPolicy::offset(double a) {
  SuperconvPolicy p;
  p.kind = Kind::offset;
  p.offset_a = a;
  return p;
}

SuperconvPolicy SuperconvPolicy::offset_frac(double c) {
  SuperconvPolicy p;
  p.kind = Kind::offset_frac;
  p.frac_c = c;
  return p;
}

SuperconvPolicy SuperconvPolicy::newton(double tol, int max_iter) {
  SuperconvPolicy p;
  p.kind = Kind::newton;
  p.newton_tol = tol;
  p.newton_max_iter = max_iter;
  return p;
}

SuperconvPolicy SuperconvPolicy::at_left() {
  SuperconvPolicy p;
  p.kind = Kind::at_left;
  return p;
}

SuperconvPolicy SuperconvPolicy::at_right() {
  SuperconvPolicy p;
  p.kind = Kind::at_right;
  return p;
}

std::string to_string(const SuperconvPolicy& policy) {
  char buf[64];
  switch (policy.kind) {
    case SuperconvPolicy::Kind::interval_min: return "interval_min";
    case SuperconvPolicy::Kind::offset:
      std::snprintf(buf, sizeof buf, "offset %g", policy.offset_a);
      return buf;
    case SuperconvPolicy::Kind::offset_frac:
      std::snprintf(buf, sizeof buf, "offset_frac %g", policy.frac_c);
      return buf;
    case SuperconvPolicy::Kind::newton: return "newton";
    case SuperconvPolicy::Kind::at_left: return "at_left";
    default: return "at_right";
  }
}

StepParams select_step_params(const VariableExponent& alpha,
                              const GradedMesh& mesh, int n,
                              const SuperconvPolicy& policy) {
  if (n < 1 || n > mesh.N)
    throw ValidationError("select_step_params: step index " + std::to_string(n) +
                          " outside 1.." + std::to_string(mesh.N));
  const double tl = mesh.node(n - 1);
  const double tr = mesh.node(n);

  double kappa = 0.0;
  switch (policy.kind) {
    case SuperconvPolicy::Kind::interval_min:
      kappa = interval_min(alpha, tl, tr);
      break;
    case SuperconvPolicy::Kind::offset: {
      if (!(policy.offset_a >= 0.0 && policy.offset_a <= 1.0))
        throw ValidationError("select_step_params: offset a outside [0,1]");
      kappa = alpha(blend(tl, tr, policy.offset_a));
      break;
    }
    case SuperconvPolicy::Kind::offset_frac: {
      if (!(policy.frac_c >= 0.0 && policy.frac_c <= 1.0))
        throw ValidationError("select_step_params: offset fraction outside [0,1]");
      const double a = policy.frac_c * alpha(tr);
      kappa = alpha(blend(tl, tr, a));
      break;
    }
    case SuperconvPolicy::Kind::newton: {
      kappa = alpha(tr);
      double resid = std::abs(alpha(blend(tl, tr, kappa / 2.0)) - kappa);
      double best = kappa;
      double best_resid = resid;
      // Iterate past the tolerance until the residual stalls, so the
      // returned kappa satisfies the condition to roundoff, not just tol.
      for (int it = 0; it < policy.newton_max_iter && best_resid > 0.0; ++it) {
        const double next = alpha(blend(tl, tr, kappa / 2.0));
        const double jump = std::abs(next - kappa);
        kappa = (jump > 2.0 * resid) ? 0.5 * (kappa + next) : next;
        resid = std::abs(alpha(blend(tl, tr, kappa / 2.0)) - kappa);
        if (resid < best_resid) {
          best = kappa;
          best_resid = resid;
        } else if (best_resid <= policy.newton_tol) {
          break;
        }
      }
      if (best_resid > policy.newton_tol)
        throw NumericalError("select_step_params: fixed-point iteration for "
                             "kappa = alpha(t_{n-kappa/2}) did not converge at " +
                             step_context(n, policy));
      kappa = best;
      break;
    }
    case SuperconvPolicy::Kind::at_left:
      kappa = alpha(tl);
      break;
    case SuperconvPolicy::Kind::at_right:
      kappa = alpha(tr);
      break;
  }

  const double lo = interval_min(alpha, tl, tr);
  const double hi = interval_max(alpha, tl, tr);
  if (kappa < lo - policy.condition_slack || kappa > hi + policy.condition_slack)
    throw NumericalError("select_step_params: alpha_n=" + std::to_string(kappa) +
                         " outside sampled range [" + std::to_string(lo) + "," +
                         std::to_string(hi) + "] at " + step_context(n, policy));

  StepParams p;
  p.n = n;
  p.alpha_n = kappa;
  p.theta_n = 0.5 * kappa;
  p.t_super = blend(tl, tr, p.theta_n);
  p.alpha_star = alpha(p.t_super);
  if (p.alpha_star < p.alpha_n - policy.condition_slack)
    throw NumericalError(
        "select_step_params: superconvergence condition violated, "
        "alpha(t_super)=" + std::to_string(p.alpha_star) + " < alpha_n=" +
        std::to_string(p.alpha_n) + " at " + step_context(n, policy));
  if (!(p.theta_n >= 0.0 && p.theta_n < 0.5))
    throw NumericalError("select_step_params: theta_n outside [0,1/2) at " +
                         step_context(n, policy));
  return p;
}

}  // namespace subdiff
