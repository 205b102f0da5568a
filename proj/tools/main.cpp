#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "subdiff/errors.hpp"
#include "subdiff/harness.hpp"
#include "subdiff/solver.hpp"

namespace {

subdiff::RunSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw subdiff::IoError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return subdiff::parse_config(buffer.str());
}

int do_run(const std::string& config_path, const std::string& out_override) {
  subdiff::RunSpec spec = load_spec(config_path);
  if (!out_override.empty()) spec.out = out_override;
  if (spec.N_list.size() != 1 || spec.M_list.size() != 1) {
    throw subdiff::ValidationError(
        "run: config must give exactly one N and one M");
  }
  const subdiff::ManufacturedCase mc = subdiff::case_from_spec(spec);
  const subdiff::SolutionHistory history = subdiff::run(
      mc.problem, subdiff::scheme_config(spec, spec.N_list[0], spec.M_list[0]));

  long long cg_total = 0;
  for (const subdiff::StepRecord& step : history.steps) {
    cg_total += step.cg.iterations;
  }
  std::printf("case=%s policy=%s p=%d r=%g N=%d M=%d cg_iterations=%lld\n",
              mc.name.c_str(), to_string(spec.policy).c_str(), spec.p, spec.r,
              spec.N_list[0], spec.M_list[0], cg_total);

  double error = 0.0;
  bool have_error = false;
  if (mc.problem.exact) {
    error = subdiff::history_error(mc, history);
    have_error = true;
    std::printf("max L2 error = %.4e\n", error);
  }

  if (mc.problem.kind == subdiff::ProblemKind::subdiffusion) {
    const subdiff::CertificateReport cert =
        subdiff::stability_certificate(history, mc.problem);
    if (!cert.applicable) {
      std::printf("certificate: not applicable (N < 2)\n");
    } else if (cert.holds) {
      std::printf("certificate: holds (max norm/bound ratio %.4f)\n",
                  cert.max_ratio);
    } else {
      std::printf("certificate: VIOLATED (max norm/bound ratio %.4f)\n",
                  cert.max_ratio);
    }
  } else {
    std::printf("certificate: not applicable (mobile-immobile scheme)\n");
  }

  if (!spec.out.empty() && have_error) {
    subdiff::ConvergenceReport report;
    subdiff::ReportRow row;
    row.case_name = mc.name;
    row.policy = to_string(spec.policy);
    row.p = spec.p;
    row.r = spec.r;
    row.delta = mc.delta;
    row.M = spec.M_list[0];
    row.N = spec.N_list[0];
    row.error = error;
    report.rows.push_back(row);
    subdiff::emit_csv(report, spec.out);
    std::printf("wrote %s\n", spec.out.c_str());
  }
  return 0;
}

int do_converge(bool time_axis, const std::string& config_path,
                const std::string& out_override, int threads) {
  subdiff::RunSpec spec = load_spec(config_path);
  if (!out_override.empty()) spec.out = out_override;
  const subdiff::ConvergenceReport report =
      time_axis ? subdiff::converge_time(spec, threads)
                : subdiff::converge_space(spec, threads);
  if (spec.out.empty()) {
    std::fputs(subdiff::render_csv(report).c_str(), stdout);
  } else {
    subdiff::emit_csv(report, spec.out);
    std::printf("wrote %s (%zu rows)\n", spec.out.c_str(),
                report.rows.size());
  }
  return 0;
}

int do_audit(unsigned long long seed) {
  subdiff::AuditSweep sweep = subdiff::default_audit_sweep();
  sweep.seed = seed;
  const subdiff::AuditReport report = subdiff::property_audit(sweep);
  std::printf("runs=%lld checks=%lld violations=%zu\n", report.runs,
              report.checks, report.violations.size());
  for (const subdiff::AuditViolation& v : report.violations) {
    std::printf("violation: family=%s policy=%s invariant='%s' r=%g N=%d "
                "n=%d k=%d defect=%.3e\n",
                v.family.c_str(), v.policy.c_str(), v.invariant.c_str(), v.r,
                v.N, v.n, v.k, v.defect);
  }
  return report.violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-exponent subdiffusion solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int threads = 1;
  unsigned long long seed = 0;

  CLI::App* run_cmd =
      app.add_subcommand("run", "solve one configuration and report the error");
  run_cmd->add_option("--config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_override, "write a one-row CSV here");

  CLI::App* time_cmd =
      app.add_subcommand("converge-time", "temporal refinement study");
  time_cmd->add_option("--config", config_path, "config file")->required();
  time_cmd->add_option("--out", out_override, "CSV output path");
  time_cmd->add_option("--threads", threads, "parallel runs")
      ->check(CLI::Range(1, 64));

  CLI::App* space_cmd =
      app.add_subcommand("converge-space", "spatial refinement study");
  space_cmd->add_option("--config", config_path, "config file")->required();
  space_cmd->add_option("--out", out_override, "CSV output path");
  space_cmd->add_option("--threads", threads, "parallel runs")
      ->check(CLI::Range(1, 64));

  CLI::App* audit_cmd = app.add_subcommand(
      "audit", "verify the coefficient inequalities over the standard sweep");
  audit_cmd->add_option("--seed", seed, "shuffle the run order (0 = in order)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return do_run(config_path, out_override);
    if (time_cmd->parsed()) {
      return do_converge(true, config_path, out_override, threads);
    }
    if (space_cmd->parsed()) {
      return do_converge(false, config_path, out_override, threads);
    }
    if (audit_cmd->parsed()) return do_audit(seed);
  } catch (const subdiff::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const subdiff::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const subdiff::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
