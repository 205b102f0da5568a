#include "subdiff/time_mesh.hpp"

#include <cmath>
#include <string>

#include "subdiff/errors.hpp"

namespace subdiff {

GradedMesh build_graded_mesh(double T, int N, double r) {
  if (!(T > 0.0)) throw ValidationError("build_graded_mesh: T must be positive");
  if (N < 1) throw ValidationError("build_graded_mesh: N must be >= 1");
  if (!(r >= 1.0)) throw ValidationError("build_graded_mesh: r must be >= 1");

  GradedMesh m;
  m.T = T;
  m.N = N;
  m.r = r;
  m.nodes.resize(static_cast<size_t>(N) + 1);
  m.steps.resize(static_cast<size_t>(N));
  for (int n = 0; n <= N; ++n)
    m.nodes[static_cast<size_t>(n)] =
        T * std::pow(static_cast<double>(n) / N, r);
  m.nodes[0] = 0.0;
  m.nodes[static_cast<size_t>(N)] = T;
  for (int k = 1; k <= N; ++k) {
    const double tau = m.nodes[static_cast<size_t>(k)] - m.nodes[static_cast<size_t>(k - 1)];
    if (!(tau > 0.0))
      throw ValidationError("build_graded_mesh: nonpositive step tau_" +
                            std::to_string(k));
    m.steps[static_cast<size_t>(k - 1)] = tau;
  }
  if (N > 1) {
    m.ratios.resize(static_cast<size_t>(N) - 1);
    for (int k = 1; k < N; ++k)
      m.ratios[static_cast<size_t>(k - 1)] =
          m.steps[static_cast<size_t>(k - 1)] / m.steps[static_cast<size_t>(k)];
  }
  return m;
}

}  // namespace subdiff
