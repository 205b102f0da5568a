#include "subdiff/l21.hpp"

#include <cmath>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/numeric.hpp"

namespace subdiff {

namespace {

/// int_{u0}^{u1} (m - w) w^{-alpha} dw with m = (u0+u1)/2.  Series form for
/// thin intervals (relative half-width beta small), direct antiderivatives
/// otherwise; the crossover keeps both branches at ~1e-15 relative accuracy.
double centered_moment(double u0, double u1, double alpha) {
  const double m = 0.5 * (u0 + u1);
  const double beta = (u1 - u0) / (2.0 * m);
  if (beta <= 0.2)
    return -std::pow(m, 2.0 - alpha) * sym_odd_moment(alpha, beta);
  const double p1 = pow_diff(u0, u1, 1.0 - alpha);
  const double p2 = pow_diff(u0, u1, 2.0 - alpha);
  return m * p1 / (1.0 - alpha) - p2 / (2.0 - alpha);
}

}  // namespace

CoeffRow l21_coefficients(const GradedMesh& mesh, const StepParams& params) {
  const int n = params.n;
  if (n < 1 || n > mesh.N)
    throw ValidationError("l21_coefficients: step index out of range");

  CoeffRow row;
  row.n = n;
  row.alpha_star = params.alpha_star;
  row.theta_n = params.theta_n;
  row.a.assign(static_cast<size_t>(n), 0.0);
  row.b.assign(static_cast<size_t>(n), 0.0);
  row.c.assign(static_cast<size_t>(n), 0.0);

  const double al = params.alpha_star;
  const double ts = params.t_super;
  const double tau_n = mesh.step(n);

  if (al == 0.0) {
    // Degenerate heat-like limit: the operator becomes the plain backward
    // difference over [t_0, t_n], so every c weight is exactly 1.
    for (int j = 0; j < n; ++j) {
      row.a[static_cast<size_t>(j)] = 1.0;
      row.c[static_cast<size_t>(j)] = 1.0;
    }
    return row;
  }

  const double g1 = std::tgamma(1.0 - al);
  const double g2 = std::tgamma(2.0 - al);

  row.a[0] = std::pow((1.0 - params.theta_n) * tau_n, 1.0 - al) / (tau_n * g2);
  for (int k = 1; k < n; ++k) {
    const double tau_k = mesh.step(k);
    const double u0 = ts - mesh.node(k);
    const double u1 = ts - mesh.node(k - 1);
    row.a[static_cast<size_t>(n - k)] = pow_diff(u0, u1, 1.0 - al) / (tau_k * g2);
    row.b[static_cast<size_t>(n - k)] =
        2.0 * centered_moment(u0, u1, al) /
        (tau_k * (tau_k + mesh.step(k + 1)) * g1);
  }

  if (n == 1) {
    row.c[0] = row.a[0];
    return row;
  }
  row.c[0] = row.a[0] + mesh.ratio(n - 1) * row.b[1];
  for (int k = 2; k <= n - 1; ++k)
    row.c[static_cast<size_t>(n - k)] = row.a[static_cast<size_t>(n - k)] +
                                        mesh.ratio(k - 1) * row.b[static_cast<size_t>(n - k + 1)] -
                                        row.b[static_cast<size_t>(n - k)];
  row.c[static_cast<size_t>(n - 1)] =
      row.a[static_cast<size_t>(n - 1)] - row.b[static_cast<size_t>(n - 1)];
  return row;
}

double apply_l21sigma(const CoeffRow& row, const std::vector<double>& history) {
  if (history.size() != static_cast<size_t>(row.n) + 1)
    throw ValidationError("apply_l21sigma: history must hold v^0..v^n");
  double sum = 0.0;
  for (int k = 1; k <= row.n; ++k)
    sum += row.c[static_cast<size_t>(row.n - k)] *
           (history[static_cast<size_t>(k)] - history[static_cast<size_t>(k - 1)]);
  return sum;
}

Eigen::VectorXd apply_l21sigma(const CoeffRow& row,
                               const std::vector<Eigen::VectorXd>& history) {
  if (history.size() != static_cast<size_t>(row.n) + 1)
    throw ValidationError("apply_l21sigma: history must hold v^0..v^n");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(history[0].size());
  for (int k = 1; k <= row.n; ++k)
    sum += row.c[static_cast<size_t>(row.n - k)] *
           (history[static_cast<size_t>(k)] - history[static_cast<size_t>(k - 1)]);
  return sum;
}

double caputo_power_reference(double delta, double alpha, double t) {
  if (!(delta > 0.0))
    throw ValidationError("caputo_power_reference: delta must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ValidationError("caputo_power_reference: alpha must lie in [0,1)");
  if (!(t > 0.0))
    throw ValidationError("caputo_power_reference: t must be positive");
  return std::tgamma(1.0 + delta) / std::tgamma(1.0 + delta - alpha) *
         std::pow(t, delta - alpha);
}

IJPair ij_quantities(const GradedMesh& mesh, const StepParams& params, int k) {
  const int n = params.n;
  if (k < 1 || k >= n)
    throw ValidationError("ij_quantities: require 1 <= k <= n-1");

  IJPair out;
  const double al = params.alpha_star;
  if (al == 0.0) return out;

  const double ts = params.t_super;
  const double tau_k = mesh.step(k);
  const double u0 = ts - mesh.node(k);
  const double u1 = ts - mesh.node(k - 1);
  const double g1 = std::tgamma(1.0 - al);
  const double m = 0.5 * (u0 + u1);
  const double beta = (u1 - u0) / (2.0 * m);
  const double scale = al / (g1 * tau_k);

  if (beta <= 0.2) {
    const double odd = sym_odd_moment(al + 1.0, beta);    // negative
    const double even = sym_even_moment(al + 1.0, beta);  // positive
    const double mp = std::pow(m, 1.0 - al);
    out.I = scale * mp * (beta * even + odd);
    out.J = scale * mp * (beta * even - odd);
  } else {
    const double d1 = pow_diff(u0, u1, 1.0 - al) / (1.0 - al);  // int w^{-al}
    const double d0 = -pow_diff(u0, u1, -al) / al;              // int w^{-al-1}
    out.I = scale * (d1 - u0 * d0);
    out.J = scale * (u1 * d0 - d1);
  }
  return out;
}

}  // namespace subdiff
