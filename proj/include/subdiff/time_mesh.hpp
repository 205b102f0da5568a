#pragma once

#include <vector>

namespace subdiff {

/// Graded time mesh t_n = T (n/N)^r.  For r >= 1 the step ratios
/// rho_k = tau_k / tau_{k+1} are nonincreasing in k and bounded by 1.
struct GradedMesh {
  double T = 1.0;
  int N = 0;
  double r = 1.0;
  std::vector<double> nodes;   ///< t_0..t_N
  std::vector<double> steps;   ///< tau_1..tau_N, steps[k-1] = t_k - t_{k-1}
  std::vector<double> ratios;  ///< rho_1..rho_{N-1}, ratios[k-1] = tau_k/tau_{k+1}

  double node(int n) const { return nodes[static_cast<size_t>(n)]; }
  double step(int k) const { return steps[static_cast<size_t>(k - 1)]; }
  double ratio(int k) const { return ratios[static_cast<size_t>(k - 1)]; }
};

GradedMesh build_graded_mesh(double T, int N, double r);

}  // namespace subdiff
