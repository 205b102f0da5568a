#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subdiff/exponent.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/step_params.hpp"

namespace subdiff {

// A manufactured problem with known exact solution; delta is the temporal
// regularity index of u near t = 0.
struct ManufacturedCase {
  std::string name;
  double delta = 0.0;
  ProblemSpec problem;
};

// ex1: increasing exponent ending at 0.9, u = (1+t^delta) sin(pi x) sin(pi y).
// ex2: alpha(t) = 0.9 exp(-t), u = (1+t^delta) sin(2 pi x) sin(2 pi y).
// ex3: mobile-immobile, exponent between alpha0 and alphaT,
//      u = t^(3-alpha0) sin(2 pi x) sin(2 pi y).
ManufacturedCase builtin_case(const std::string& name, double delta,
                              double alpha0 = 0.0, double alphaT = 0.0);

struct RunSpec {
  std::string case_name;
  ProblemKind kind = ProblemKind::subdiffusion;
  double delta = 0.0;
  double alpha0 = 0.0;
  double alphaT = 0.0;
  std::vector<int> N_list;
  std::vector<int> M_list;
  double r = 1.0;
  int p = 1;
  SuperconvPolicy policy = SuperconvPolicy::interval_min();
  double cg_tol = 1e-11;
  int quad_degree = 6;
  std::string out;
};

RunSpec parse_config(const std::string& text);
std::string serialize_config(const RunSpec& spec);
SuperconvPolicy parse_policy(const std::string& text);

ManufacturedCase case_from_spec(const RunSpec& spec);
SchemeConfig scheme_config(const RunSpec& spec, int N, int M);

struct ReportRow {
  std::string case_name;
  std::string policy;
  int p = 1;
  double r = 1.0;
  double delta = 0.0;
  int M = 0;
  int N = 0;
  double error = 0.0;
  double order = 0.0;
  bool has_order = false;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
};

// Max over n = 1..N of the L2 distance to the exact solution at t_n.
double history_error(const ManufacturedCase& mc,
                     const SolutionHistory& history);

ConvergenceReport converge_time_case(const ManufacturedCase& mc,
                                     const RunSpec& spec, int threads = 1,
                                     std::vector<SolutionHistory>* histories =
                                         nullptr);
ConvergenceReport converge_space_case(const ManufacturedCase& mc,
                                      const RunSpec& spec, int threads = 1,
                                      std::vector<SolutionHistory>* histories =
                                          nullptr);
ConvergenceReport converge_time(const RunSpec& spec, int threads = 1);
ConvergenceReport converge_space(const RunSpec& spec, int threads = 1);

void emit_csv(const ConvergenceReport& report, const std::string& path);
std::string render_csv(const ConvergenceReport& report);

// Numerical verification sweep over the temporal coefficient inequalities.
struct AuditFamily {
  std::string label;
  VariableExponent exponent;
};

struct AuditSweep {
  std::vector<AuditFamily> families;
  std::vector<double> r_values;
  std::vector<int> N_values;
  unsigned long long seed = 0;
};

AuditSweep default_audit_sweep();

struct AuditViolation {
  std::string family;
  std::string policy;
  std::string invariant;
  double r = 0.0;
  int N = 0;
  int n = 0;
  int k = 0;
  double defect = 0.0;
};

struct AuditReport {
  long long runs = 0;
  long long checks = 0;
  std::vector<AuditViolation> violations;
};

AuditReport property_audit(const AuditSweep& sweep);

}  // namespace subdiff
