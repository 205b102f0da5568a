#pragma once

#include <Eigen/Core>
#include <vector>

#include "subdiff/step_params.hpp"
#include "subdiff/time_mesh.hpp"

namespace subdiff {

/// Weights of the discrete fractional-derivative operator at step n,
///   D v^{n-theta_n} = sum_{k=1..n} c[n-k] (v^k - v^{k-1}),
/// all evaluated with the exponent frozen at alpha_star = alpha(t_{n-theta_n}).
///
/// a[j] (j = 0..n-1) are the piecewise-linear weights, a[0] belonging to the
/// current interval; b[j] (j = 1..n-1, b[0] = 0) are the quadratic
/// corrections on history intervals; c[j] combines them per interval.
struct CoeffRow {
  int n = 0;
  double alpha_star = 0.0;
  double theta_n = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
};

CoeffRow l21_coefficients(const GradedMesh& mesh, const StepParams& params);

/// sum_{k=1..n} c[n-k] (v[k] - v[k-1]), accumulated in ascending k.
double apply_l21sigma(const CoeffRow& row, const std::vector<double>& history);
Eigen::VectorXd apply_l21sigma(const CoeffRow& row,
                               const std::vector<Eigen::VectorXd>& history);

/// Exact variable-exponent Caputo derivative of t^delta at time t with the
/// exponent frozen at alpha:  Gamma(1+delta)/Gamma(1+delta-alpha) t^{delta-alpha}.
double caputo_power_reference(double delta, double alpha, double t);

/// Auxiliary interval quantities used by the kernel-weight inequalities:
/// first/second barycentric moments of (t_super - s)^{-alpha-1} over
/// [t_{k-1}, t_k], scaled as in the monotonicity analysis.
struct IJPair {
  double I = 0.0;
  double J = 0.0;
};

IJPair ij_quantities(const GradedMesh& mesh, const StepParams& params, int k);

}  // namespace subdiff
