#pragma once

// Independent reference computations for test use: adaptive tanh-sinh
// quadrature of the defining integrals, tabulated gamma values, and
// finite-difference spatial derivatives. Nothing here reuses the closed
// forms under test.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "subdiff/step_params.hpp"
#include "subdiff/time_mesh.hpp"

namespace oracle {

// f receives (x, x - a, b - x); the distances stay accurate near the
// endpoints, where our integrands may be singular. Long double throughout:
// some weight integrals extract an odd component ~tau/t_super times smaller
// than the integrand, and the extra mantissa keeps the cancellation noise
// below the comparison tolerances.
using Real = long double;

inline double tanh_sinh_ld(const std::function<Real(Real, Real, Real)>& f,
                           Real a, Real b, Real tol = 1e-16L) {
  if (!(b > a)) {
    if (b == a) return 0.0;
    throw std::invalid_argument("tanh_sinh: b < a");
  }
  const Real half = 0.5L * (b - a);
  const Real pi_half = 1.57079632679489661923L;

  auto pair_sum = [&](Real t) -> Real {
    const Real u = pi_half * std::sinh(t);
    const Real ch = std::cosh(u);
    const Real w = pi_half * std::cosh(t) / (ch * ch);
    if (!(w > 1e-300L)) return 0.0L;
    const Real e2u = std::exp(2.0L * u);
    const Real d_small = half * 2.0L / (1.0L + e2u);
    const Real d_big = (b - a) - d_small;
    if (d_small <= 0.0L) return 0.0L;
    Real s = w * f(a + d_big, d_big, d_small);
    if (t > 0.0L) s += w * f(a + d_small, d_small, d_big);
    return s;
  };

  Real h = 1.0L;
  Real raw = pair_sum(0.0L);
  for (int j = 1; j * h <= 7.5L; ++j) raw += pair_sum(j * h);
  Real integral = half * h * raw;

  for (int level = 1; level <= 13; ++level) {
    h *= 0.5L;
    for (int j = 1; j * h <= 7.5L; j += 2) raw += pair_sum(j * h);
    const Real refined = half * h * raw;
    const Real change = std::fabs(refined - integral);
    integral = refined;
    if (level >= 3 && change <= tol * (std::fabs(integral) + 1e-300L)) break;
  }
  return static_cast<double>(integral);
}

inline double tanh_sinh(const std::function<double(double, double, double)>& f,
                        double a, double b, double tol = 5e-14) {
  return tanh_sinh_ld(
      [&](Real x, Real da, Real db) -> Real {
        return f(static_cast<double>(x), static_cast<double>(da),
                 static_cast<double>(db));
      },
      a, b, tol);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 5e-14) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b, tol);
}

// Gamma(x) reference values to 20 significant digits (arbitrary-precision
// evaluation, frozen).
struct GammaSample {
  double x;
  double value;
};

inline constexpr std::array<GammaSample, 9> kGammaTable{{
    {0.5, 1.7724538509055160273},
    {0.75, 1.2254167024651776451},
    {1.25, 0.90640247705547707798},
    {1.5, 0.88622692545275801365},
    {1.75, 0.91906252684888323385},
    {2.5, 1.3293403881791370205},
    {3.25, 2.5492569667185292818},
    {3.7, 4.1706517837966031654},
    {4.0, 6.0},
}};

// Gamma(1.6)/Gamma(1.3), frozen to 20 digits.
inline constexpr double kGammaRatio_16_13 = 0.99559278421583461105;

// Constant-order Caputo derivative of t^delta by direct quadrature of
// (1/Gamma(1-alpha)) * integral_0^t delta s^{delta-1} (t-s)^{-alpha} ds.
inline double caputo_power_quadrature(double delta, double alpha, double t) {
  if (alpha == 0.0) return std::pow(t, delta);
  const double g = std::tgamma(1.0 - alpha);
  const Real d = delta;
  const Real al = alpha;
  const double val = tanh_sinh_ld(
      [&](Real, Real s_from_0, Real t_minus_s) -> Real {
        return d * std::pow(s_from_0, d - 1.0L) * std::pow(t_minus_s, -al);
      },
      0.0L, t);
  return val / g;
}

// Piecewise-linear weight of the discrete operator, by quadrature of its
// defining integral: (1/tau_k) int_{t_{k-1}}^{min(t_k, t_super)}
// (t_super - s)^{-alpha} / Gamma(1-alpha) ds, 1 <= k <= n.
inline double a_weight_quadrature(const subdiff::GradedMesh& mesh,
                                  const subdiff::StepParams& params, int k) {
  const double al = params.alpha_star;
  const double ts = params.t_super;
  const double lo = mesh.node(k - 1);
  const double hi = std::min(mesh.node(k), ts);
  const double tau = mesh.step(k);
  if (al == 0.0) return (hi - lo) / tau;
  const double g = std::tgamma(1.0 - al);
  const Real gap = static_cast<Real>(ts) - static_cast<Real>(hi);
  const Real ald = al;
  const double val = tanh_sinh_ld(
      [&](Real, Real, Real hi_minus_s) -> Real {
        return std::pow(gap + hi_minus_s, -ald);
      },
      lo, hi);
  return val / (tau * g);
}

// Quadratic-correction weight: (2/(tau_k(tau_k+tau_{k+1}))) *
// int_{t_{k-1}}^{t_k} (s - t_{k-1/2})(t_super - s)^{-alpha}/Gamma(1-alpha) ds.
inline double b_weight_quadrature(const subdiff::GradedMesh& mesh,
                                  const subdiff::StepParams& params, int k) {
  const double al = params.alpha_star;
  const double ts = params.t_super;
  const double lo = mesh.node(k - 1);
  const double hi = mesh.node(k);
  const double tauk = mesh.step(k);
  const double taukp = mesh.step(k + 1);
  const double g = std::tgamma(1.0 - al);
  const Real gap = static_cast<Real>(ts) - static_cast<Real>(hi);
  const Real half_tau = 0.5L * static_cast<Real>(tauk);
  const Real ald = al;
  const double val = tanh_sinh_ld(
      [&](Real, Real s_minus_lo, Real hi_minus_s) -> Real {
        return (s_minus_lo - half_tau) * std::pow(gap + hi_minus_s, -ald);
      },
      lo, hi);
  return 2.0 * val / (tauk * (tauk + taukp) * g);
}

// The two auxiliary interval integrals of the monotonicity analysis:
//   I = (alpha*/Gamma(1-alpha*)) int (t_k - s)/tau_k (t_super-s)^{-alpha*-1} ds
//   J = (alpha*/Gamma(1-alpha*)) int (s - t_{k-1})/tau_k (t_super-s)^{-alpha*-1} ds
// over [t_{k-1}, t_k], 1 <= k <= n-1.
inline std::array<double, 2> ij_quadrature(const subdiff::GradedMesh& mesh,
                                           const subdiff::StepParams& params,
                                           int k) {
  const double al = params.alpha_star;
  if (al == 0.0) return {0.0, 0.0};
  const double ts = params.t_super;
  const double lo = mesh.node(k - 1);
  const double hi = mesh.node(k);
  const double tau = mesh.step(k);
  const double scale = al / (std::tgamma(1.0 - al) * tau);
  const Real gap = static_cast<Real>(ts) - static_cast<Real>(hi);
  const Real ald = al;
  const double vi = tanh_sinh_ld(
      [&](Real, Real, Real hi_minus_s) -> Real {
        return hi_minus_s * std::pow(gap + hi_minus_s, -ald - 1.0L);
      },
      lo, hi);
  const double vj = tanh_sinh_ld(
      [&](Real, Real s_minus_lo, Real hi_minus_s) -> Real {
        return s_minus_lo * std::pow(gap + hi_minus_s, -ald - 1.0L);
      },
      lo, hi);
  return {scale * vi, scale * vj};
}

// Five-point centred Laplacian; h = 1e-3 keeps truncation and roundoff
// below 1e-8 for the manufactured amplitudes in use.
inline double fd_laplacian(const std::function<double(double, double)>& g,
                           double x, double y, double h = 1e-3) {
  auto second = [&](bool in_x) {
    auto at = [&](double offset) {
      return in_x ? g(x + offset, y) : g(x, y + offset);
    };
    return (-at(-2 * h) + 16 * at(-h) - 30 * at(0) + 16 * at(h) - at(2 * h)) /
           (12 * h * h);
  };
  return second(true) + second(false);
}

}  // namespace oracle
