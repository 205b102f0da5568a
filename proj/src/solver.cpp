#include "subdiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/numeric.hpp"

namespace subdiff {

namespace {

void validate_config(const ProblemSpec& problem, const SchemeConfig& config) {
  if (config.N < 1) throw ValidationError("config: N must be >= 1");
  if (config.M < 1) throw ValidationError("config: M must be >= 1");
  if (config.p != 1 && config.p != 2) {
    throw ValidationError("config: p must be 1 or 2");
  }
  if (!(config.r >= 1.0)) throw ValidationError("config: r must be >= 1");
  if (!(config.cg_tol > 0.0)) throw ValidationError("config: cg_tol <= 0");
  if (problem.kind == ProblemKind::mobile_immobile && config.r != 1.0) {
    throw ValidationError(
        "config: the mobile-immobile scheme requires a uniform mesh (r = 1)");
  }
  if (problem.kind == ProblemKind::mobile_immobile && !problem.hat_u1) {
    throw ValidationError(
        "problem: mobile-immobile runs need the first-step corrector field");
  }
  if (!problem.source) throw ValidationError("problem: source term missing");
  if (!problem.initial_is_zero && !problem.initial) {
    throw ValidationError("problem: initial condition missing");
  }
  if (problem.T != problem.exponent.horizon()) {
    throw ValidationError("problem: exponent horizon differs from T");
  }
}

Eigen::VectorXd project_initial(const ProblemSpec& problem,
                                const FESpace& space, const SparseMatrix& A,
                                const QuadratureRule& quad, double cg_tol) {
  if (problem.initial_is_zero) {
    return Eigen::VectorXd::Zero(space.dof_count());
  }
  for (int d = 0; d < space.dof_count(); ++d) {
    if (space.boundary[d]) {
      const auto& c = space.dof_coords[d];
      if (std::abs(problem.initial(c.x(), c.y())) > 1e-12) {
        throw ValidationError(
            "problem: initial condition does not vanish on the boundary");
      }
    }
  }
  if (!problem.initial_gradient) {
    throw ValidationError(
        "problem: elliptic projection of u0 needs its analytic gradient");
  }
  return elliptic_projection(space, A, problem.K, problem.initial_gradient,
                             quad, cg_tol)
      .coeffs;
}

void check_finite(const Eigen::VectorXd& v, int n) {
  if (!v.allFinite()) {
    throw NumericalError("step " + std::to_string(n) +
                         ": non-finite entries in the solution");
  }
}

// Caputo-part energy inequality, checked from the cached quantities:
// 2 (sum_k c_{n-k} M dU^k, theta U^{n-1} + (1-theta) U^n)
//   >= sum_k c_{n-k} (|U^k|_M^2 - |U^{k-1}|_M^2).
void record_energy(SolverState& state, const CoeffRow& row,
                   const Eigen::VectorXd& weighted_sum, int n) {
  const double theta = row.theta_n;
  const Eigen::VectorXd eval_point =
      theta * state.U_int[n - 1] + (1.0 - theta) * state.U_int[n];
  const double lhs = 2.0 * weighted_sum.dot(eval_point);
  double rhs = 0.0;
  double scale = 0.0;
  for (int k = 1; k <= n; ++k) {
    rhs += row.c[n - k] * (state.mass_norm2[k] - state.mass_norm2[k - 1]);
    scale += row.c[n - k] * (state.mass_norm2[k] + state.mass_norm2[k - 1]);
  }
  const double defect = inequality_defect(lhs, rhs, scale);
  state.history.max_energy_defect =
      std::max(state.history.max_energy_defect, defect);
  if (defect > 1e-6) {
    throw NumericalError("step " + std::to_string(n) +
                         ": discrete energy inequality violated (defect " +
                         std::to_string(defect) + ")");
  }
}

void accept_step(SolverState& state, const CoeffRow& row,
                 const StepParams& params, const CGReport& report,
                 const Eigen::VectorXd& inner,
                 Eigen::VectorXd history_weighted, int n) {
  const FESpace& space = state.history.space;
  Eigen::VectorXd full = extend_interior(space, inner);
  check_finite(full, n);

  state.U_int.push_back(inner);
  const Eigen::VectorXd mdelta =
      spmv(state.M_int, state.U_int[n] - state.U_int[n - 1]);
  state.mass_u_int += mdelta;
  state.mass_norm2.push_back(state.U_int[n].dot(state.mass_u_int));
  state.history.mass_delta.push_back(mdelta);
  state.history.U.push_back(std::move(full));
  state.history.steps.push_back(StepRecord{params, report});

  history_weighted += row.c[0] * mdelta;
  record_energy(state, row, history_weighted, n);
}

}  // namespace

SolverState initialize(const ProblemSpec& problem,
                       const SchemeConfig& config) {
  validate_config(problem, config);
  if (problem.mobile_coefficient) {
    for (int s = 0; s <= 100; ++s) {
      const double t = problem.T * s / 100.0;
      if (problem.mobile_coefficient(t) < 0.0) {
        throw ValidationError(
            "problem: mobile-immobile coefficient negative at t = " +
            std::to_string(t));
      }
    }
  }

  SolverState state{problem,
                    config,
                    triangle_quadrature(config.quad_assembly),
                    triangle_quadrature(config.quad_load),
                    {},
                    {},
                    {},
                    {},
                    {},
                    {}};
  state.history.tmesh = build_graded_mesh(problem.T, config.N, config.r);
  state.history.space =
      build_fe_space(build_unit_square_mesh(config.M), config.p);
  state.history.config = config;

  const FESpace& space = state.history.space;
  const SparseMatrix M_full = assemble_mass(space, state.quad_asm);
  const SparseMatrix A_full =
      assemble_stiffness(space, problem.K, state.quad_asm);
  state.M_int = submatrix(M_full, space.interior);
  state.A_int = submatrix(A_full, space.interior);

  Eigen::VectorXd u0 = project_initial(problem, space, state.A_int,
                                       state.quad_load, config.cg_tol);
  state.U_int.push_back(restrict_interior(space, u0));
  state.mass_u_int = spmv(state.M_int, state.U_int[0]);
  state.mass_norm2.push_back(state.U_int[0].dot(state.mass_u_int));
  state.history.U.push_back(std::move(u0));
  return state;
}

Eigen::VectorXd step_subdiffusion(SolverState& state, int n) {
  if (state.problem.kind != ProblemKind::subdiffusion) {
    throw ValidationError("step_subdiffusion: wrong problem kind");
  }
  if (n != static_cast<int>(state.U_int.size())) {
    throw ValidationError("step_subdiffusion: steps must run in order");
  }
  const FESpace& space = state.history.space;
  const StepParams params = select_step_params(
      state.problem.exponent, state.history.tmesh, n, state.config.policy);
  const CoeffRow row = l21_coefficients(state.history.tmesh, params);
  const double theta = row.theta_n;

  const SparseMatrix lhs =
      csr_combine(row.c[0], state.M_int, 1.0 - theta, state.A_int);

  const auto& f = state.problem.source;
  const double ts = params.t_super;
  Eigen::VectorXd rhs = restrict_interior(
      space, assemble_functional(
                 space, [&](double x, double y) { return f(x, y, ts); },
                 state.quad_load));
  rhs += row.c[0] * state.mass_u_int;
  Eigen::VectorXd history_weighted =
      Eigen::VectorXd::Zero(state.M_int.nrows);
  for (int k = 1; k <= n - 1; ++k) {
    history_weighted += row.c[n - k] * state.history.mass_delta[k - 1];
    ++state.history.axpy_count;
  }
  rhs -= history_weighted;
  rhs -= theta * spmv(state.A_int, state.U_int[n - 1]);

  Eigen::VectorXd guess = state.U_int[n - 1];
  if (n >= 2) {
    const double scale =
        state.history.tmesh.step(n) / state.history.tmesh.step(n - 1);
    guess += scale * (state.U_int[n - 1] - state.U_int[n - 2]);
  }
  const auto [inner, report] = cg_solve(
      lhs, rhs, state.config.cg_tol, state.config.cg_max_iter, &guess);
  accept_step(state, row, params, report, inner, std::move(history_weighted),
              n);
  return state.history.U.back();
}

Eigen::VectorXd step_mobile_immobile(SolverState& state, int n) {
  if (state.problem.kind != ProblemKind::mobile_immobile) {
    throw ValidationError("step_mobile_immobile: wrong problem kind");
  }
  if (n != static_cast<int>(state.U_int.size())) {
    throw ValidationError("step_mobile_immobile: steps must run in order");
  }
  const FESpace& space = state.history.space;
  const GradedMesh& tmesh = state.history.tmesh;
  const double tau = tmesh.step(1);
  const StepParams params = select_step_params(
      state.problem.exponent, tmesh, n, state.config.policy);
  const CoeffRow row = l21_coefficients(tmesh, params);
  const double theta = row.theta_n;
  const double alpha_n = params.alpha_n;
  const double k_n = state.problem.mobile_coefficient
                         ? state.problem.mobile_coefficient(params.t_super)
                         : 1.0;

  const double mass_scale =
      (n == 1) ? (2.0 - alpha_n) / tau + k_n * row.c[0]
               : (3.0 - alpha_n) / (2.0 * tau) + k_n * row.c[0];
  const SparseMatrix lhs =
      csr_combine(mass_scale, state.M_int, 1.0 - theta, state.A_int);

  const auto& f = state.problem.source;
  const double ts = params.t_super;
  Eigen::VectorXd rhs = restrict_interior(
      space, assemble_functional(
                 space, [&](double x, double y) { return f(x, y, ts); },
                 state.quad_load));
  Eigen::VectorXd history_weighted =
      Eigen::VectorXd::Zero(state.M_int.nrows);
  if (n == 1) {
    const auto& hat = state.problem.hat_u1;
    rhs += (1.0 - alpha_n) *
           restrict_interior(
               space, assemble_functional(
                          space,
                          [&](double x, double y) { return hat(x, y); },
                          state.quad_load));
    rhs += ((2.0 - alpha_n) / tau + k_n * row.c[0]) *
           spmv(state.M_int, state.U_int[0]);
  } else {
    const Eigen::VectorXd bdf =
        (4.0 - 2.0 * alpha_n) * state.U_int[n - 1] -
        (1.0 - alpha_n) * state.U_int[n - 2];
    rhs += (1.0 / (2.0 * tau)) * spmv(state.M_int, bdf);
    rhs += k_n * row.c[0] * state.mass_u_int;
    for (int k = 1; k <= n - 1; ++k) {
      history_weighted += row.c[n - k] * state.history.mass_delta[k - 1];
      ++state.history.axpy_count;
    }
    rhs -= k_n * history_weighted;
  }
  rhs -= theta * spmv(state.A_int, state.U_int[n - 1]);

  Eigen::VectorXd guess = state.U_int[n - 1];
  if (n >= 2) guess += state.U_int[n - 1] - state.U_int[n - 2];
  const auto [inner, report] = cg_solve(
      lhs, rhs, state.config.cg_tol, state.config.cg_max_iter, &guess);
  accept_step(state, row, params, report, inner, std::move(history_weighted),
              n);
  return state.history.U.back();
}

SolutionHistory run(const ProblemSpec& problem, const SchemeConfig& config) {
  SolverState state = initialize(problem, config);
  for (int n = 1; n <= config.N; ++n) {
    try {
      if (problem.kind == ProblemKind::subdiffusion) {
        step_subdiffusion(state, n);
      } else {
        step_mobile_immobile(state, n);
      }
    } catch (const ValidationError& e) {
      throw ValidationError("run aborted at step " + std::to_string(n) +
                            " (policy " + to_string(config.policy) +
                            "): " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("run aborted at step " + std::to_string(n) +
                           " (policy " + to_string(config.policy) +
                           "): " + e.what());
    }
  }
  return std::move(state.history);
}

CertificateReport stability_certificate(const SolutionHistory& history,
                                        const ProblemSpec& problem) {
  if (problem.kind != ProblemKind::subdiffusion) {
    throw ValidationError(
        "stability_certificate: defined for subdiffusion runs only");
  }
  const int N = history.config.N;
  CertificateReport report;
  if (N < 2) {
    report.applicable = false;
    report.holds = true;
    return report;
  }
  const FESpace& space = history.space;
  const QuadratureRule quad = triangle_quadrature(history.config.quad_load);
  const SparseMatrix M_full = assemble_mass(
      space, triangle_quadrature(history.config.quad_assembly));

  report.norms.reserve(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double n2 = history.U[k].dot(spmv(M_full, history.U[k]));
    report.norms.push_back(std::sqrt(std::max(n2, 0.0)));
  }

  const double lN = 1.0 / std::log(static_cast<double>(N));
  const double r = history.config.r;
  const double alpha_sup = problem.exponent.sup_bound();
  const double front = 2.0 * (1.0 + std::pow(2.0, r)) * std::exp(r);
  const double gamma_den = std::tgamma(1.0 + lN);

  double gamma_max = 0.0;
  double f_max = 0.0;
  report.bounds.assign(N + 1, 0.0);
  report.bounds[0] = report.norms[0];
  for (int n = 1; n <= N; ++n) {
    const StepParams& params = history.steps[n - 1].params;
    gamma_max =
        std::max(gamma_max, std::tgamma(1.0 + lN - params.alpha_star));
    double f_norm2 = 0.0;
    const auto& f = problem.source;
    const double ts = params.t_super;
    for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
      const auto& tri = space.mesh.triangles[cell];
      const Eigen::Vector2d v0 = space.mesh.vertices[tri[0]];
      const Eigen::Vector2d v1 = space.mesh.vertices[tri[1]];
      const Eigen::Vector2d v2 = space.mesh.vertices[tri[2]];
      const double two_area =
          (v1.x() - v0.x()) * (v2.y() - v0.y()) -
          (v2.x() - v0.x()) * (v1.y() - v0.y());
      for (size_t q = 0; q < quad.points.size(); ++q) {
        const auto& l = quad.points[q];
        const Eigen::Vector2d x = l[0] * v0 + l[1] * v1 + l[2] * v2;
        const double val = f(x.x(), x.y(), ts);
        f_norm2 += quad.weights[q] * two_area * val * val;
      }
    }
    f_max = std::max(f_max, std::sqrt(std::max(f_norm2, 0.0)));

    const double tn = history.tmesh.node(n);
    const double bound =
        report.norms[0] +
        front * std::pow(tn, alpha_sup) * (gamma_max / gamma_den) * f_max;
    report.bounds[n] = bound;
    const double ratio = report.norms[n] / std::max(bound, 1e-300);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (report.norms[n] > bound * (1.0 + 1e-12)) report.holds = false;
  }
  return report;
}

}  // namespace subdiff
