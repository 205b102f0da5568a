#pragma once

#include <cmath>

namespace subdiff {

/// u1^p - u0^p for 0 < u0 <= u1, evaluated without catastrophic cancellation
/// when u1/u0 is close to 1 (far-history kernel weights on graded meshes).
inline double pow_diff(double u0, double u1, double p) {
  if (u0 == 0.0) return std::pow(u1, p);
  const double h = (u1 - u0) / u0;
  return std::pow(u0, p) * std::expm1(p * std::log1p(h));
}

/// int_{-beta}^{beta} s (1+s)^{-g} ds, as a series in beta^2.  Converges for
/// beta < 1; intended for beta <= ~0.25.  The result is negative for g > 0.
inline double sym_odd_moment(double g, double beta) {
  const double b2 = beta * beta;
  double term = 2.0 * g * beta * b2 / 3.0;  // i = 1
  double sum = term;
  for (int i = 1; i < 40; ++i) {
    const double k = 2.0 * i;
    term *= (g + k - 1.0) * (g + k) * b2 / (k * (k + 3.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return -sum;
}

/// int_{-beta}^{beta} (1+s)^{-g} ds, series in beta^2 (all terms positive).
inline double sym_even_moment(double g, double beta) {
  const double b2 = beta * beta;
  double term = 2.0 * beta;  // i = 0
  double sum = term;
  for (int i = 0; i < 40; ++i) {
    const double k = 2.0 * i;
    term *= (g + k) * (g + k + 1.0) * b2 / ((k + 2.0) * (k + 3.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

/// Relative gap by which `lhs >= rhs` fails; <= 0 when the inequality holds.
/// Used by the property audit so that exact-arithmetic inequalities are not
/// reported as violations due to last-digit roundoff.
inline double inequality_defect(double lhs, double rhs, double scale = 0.0) {
  const double mag = std::max({std::abs(lhs), std::abs(rhs), scale, 1e-300});
  return (rhs - lhs) / mag;
}

}  // namespace subdiff
