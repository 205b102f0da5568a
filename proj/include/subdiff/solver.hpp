#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "subdiff/exponent.hpp"
#include "subdiff/fem2d.hpp"
#include "subdiff/l21.hpp"
#include "subdiff/sparse.hpp"
#include "subdiff/step_params.hpp"
#include "subdiff/time_mesh.hpp"

namespace subdiff {

enum class ProblemKind { subdiffusion, mobile_immobile };

using SpaceTimeField = std::function<double(double, double, double)>;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::subdiffusion;
  VariableExponent exponent;
  DiffusionTensor K;
  SpaceTimeField source;
  ScalarField initial;
  VectorField initial_gradient;
  bool initial_is_zero = false;
  double T = 1.0;
  // Mobile-immobile extras: k(t) multiplying the Caputo term, and the
  // first-step corrector field f(., 0) - L u0.
  std::function<double(double)> mobile_coefficient;
  ScalarField hat_u1;
  SpaceTimeField exact;
};

struct SchemeConfig {
  int N = 8;
  double r = 1.0;
  SuperconvPolicy policy = SuperconvPolicy::interval_min();
  int M = 8;
  int p = 1;
  double cg_tol = 1e-11;
  int cg_max_iter = 0;
  int quad_assembly = 4;
  int quad_load = 6;
};

struct StepRecord {
  StepParams params;
  CGReport cg;
};

struct SolutionHistory {
  GradedMesh tmesh;
  FESpace space;
  SchemeConfig config;
  std::vector<Eigen::VectorXd> U;
  std::vector<StepRecord> steps;
  std::vector<Eigen::VectorXd> mass_delta;
  double max_energy_defect = 0.0;
  long long axpy_count = 0;
};

struct SolverState {
  ProblemSpec problem;
  SchemeConfig config;
  QuadratureRule quad_asm;
  QuadratureRule quad_load;
  SparseMatrix M_int;
  SparseMatrix A_int;
  SolutionHistory history;
  std::vector<Eigen::VectorXd> U_int;
  Eigen::VectorXd mass_u_int;
  std::vector<double> mass_norm2;
};

SolverState initialize(const ProblemSpec& problem, const SchemeConfig& config);

// One step of the L2-1sigma finite element scheme on the graded mesh;
// appends U^n to the state and returns the full-dof coefficients.
Eigen::VectorXd step_subdiffusion(SolverState& state, int n);

// One step of the mobile-immobile variant (uniform mesh only).
Eigen::VectorXd step_mobile_immobile(SolverState& state, int n);

SolutionHistory run(const ProblemSpec& problem, const SchemeConfig& config);

struct CertificateReport {
  bool applicable = true;
  bool holds = true;
  std::vector<double> norms;
  std::vector<double> bounds;
  double max_ratio = 0.0;
};

// Checks the discrete stability bound
//   ||u^n|| <= ||u^0|| + 2 (1+2^r) e^r t_n^{a*} Gmax ||f||max
// with Gmax = max_j Gamma(1 + 1/ln N - a_j*) / Gamma(1 + 1/ln N) and a* the
// supremum of the exponent; subdiffusion runs with N >= 2 only.
CertificateReport stability_certificate(const SolutionHistory& history,
                                        const ProblemSpec& problem);

}  // namespace subdiff
