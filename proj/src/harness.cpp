#include "subdiff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "subdiff/errors.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/l21.hpp"
#include "subdiff/numeric.hpp"

namespace subdiff {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647693;

double ramp(double t) {
  return 1.0 - t - std::sin(kTwoPi * (1.0 - t)) / kTwoPi;
}

}  // namespace

ManufacturedCase builtin_case(const std::string& name, double delta,
                              double alpha0, double alphaT) {
  if (name == "ex1") {
    if (!(delta > 0.0 && delta < 0.9)) {
      throw ValidationError("ex1: delta must lie in (0, 0.9)");
    }
    VariableExponent exponent(
        [delta](double t) { return 0.9 + (delta - 0.9) * ramp(t); }, 0.9, 1.0,
        Monotonicity::increasing);
    auto shape = [](double x, double y) {
      return std::sin(kPi * x) * std::sin(kPi * y);
    };
    ProblemSpec problem{
        ProblemKind::subdiffusion,
        exponent,
        DiffusionTensor::scaled_identity(1.0),
        [delta, exponent](double x, double y, double t) {
          const double s = std::sin(kPi * x) * std::sin(kPi * y);
          if (t <= 0.0) {
            return (std::tgamma(1.0 + delta) + 2.0 * kPi * kPi) * s;
          }
          return (caputo_power_reference(delta, exponent(t), t) +
                  2.0 * kPi * kPi * (1.0 + std::pow(t, delta))) *
                 s;
        },
        shape,
        [](double x, double y) {
          return Eigen::Vector2d(
              kPi * std::cos(kPi * x) * std::sin(kPi * y),
              kPi * std::sin(kPi * x) * std::cos(kPi * y));
        },
        false,
        1.0,
        {},
        {},
        [delta](double x, double y, double t) {
          return (1.0 + std::pow(t, delta)) * std::sin(kPi * x) *
                 std::sin(kPi * y);
        }};
    return ManufacturedCase{name, delta, std::move(problem)};
  }
  if (name == "ex2") {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw ValidationError("ex2: delta must lie in (0, 1)");
    }
    VariableExponent exponent([](double t) { return 0.9 * std::exp(-t); },
                              0.9, 1.0, Monotonicity::decreasing);
    ProblemSpec problem{
        ProblemKind::subdiffusion,
        exponent,
        DiffusionTensor::scaled_identity(0.001),
        [delta, exponent](double x, double y, double t) {
          if (t <= 0.0) {
            throw ValidationError("ex2: source undefined at t = 0");
          }
          const double s = std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
          return (caputo_power_reference(delta, exponent(t), t) +
                  0.008 * kPi * kPi * (1.0 + std::pow(t, delta))) *
                 s;
        },
        [](double x, double y) {
          return std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
        },
        [](double x, double y) {
          return Eigen::Vector2d(
              kTwoPi * std::cos(kTwoPi * x) * std::sin(kTwoPi * y),
              kTwoPi * std::sin(kTwoPi * x) * std::cos(kTwoPi * y));
        },
        false,
        1.0,
        {},
        {},
        [delta](double x, double y, double t) {
          return (1.0 + std::pow(t, delta)) * std::sin(kTwoPi * x) *
                 std::sin(kTwoPi * y);
        }};
    return ManufacturedCase{name, delta, std::move(problem)};
  }
  if (name == "ex3") {
    if (!(alpha0 >= 0.0 && alpha0 < 1.0 && alphaT >= 0.0 && alphaT < 1.0)) {
      throw ValidationError("ex3: exponent endpoints must lie in [0, 1)");
    }
    const Monotonicity hint = alphaT > alpha0   ? Monotonicity::increasing
                              : alphaT < alpha0 ? Monotonicity::decreasing
                                                : Monotonicity::none;
    VariableExponent exponent(
        [alpha0, alphaT](double t) {
          return alphaT + (alpha0 - alphaT) * ramp(t);
        },
        std::max(alpha0, alphaT), 1.0, hint);
    const double power = 3.0 - alpha0;
    ProblemSpec problem{
        ProblemKind::mobile_immobile,
        exponent,
        DiffusionTensor::scaled_identity(0.001),
        [power, exponent](double x, double y, double t) {
          if (t <= 0.0) return 0.0;
          const double s = std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
          return (power * std::pow(t, power - 1.0) +
                  0.008 * kPi * kPi * std::pow(t, power) +
                  caputo_power_reference(power, exponent(t), t)) *
                 s;
        },
        [](double, double) { return 0.0; },
        {},
        true,
        1.0,
        [](double) { return 1.0; },
        [](double, double) { return 0.0; },
        [power](double x, double y, double t) {
          return std::pow(t, power) * std::sin(kTwoPi * x) *
                 std::sin(kTwoPi * y);
        }};
    return ManufacturedCase{name, power, std::move(problem)};
  }
  throw ValidationError("builtin_case: unknown case '" + name + "'");
}

SuperconvPolicy parse_policy(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  double arg = 0.0;
  const bool has_arg = static_cast<bool>(in >> arg);
  std::string rest;
  if (in >> rest) {
    throw ValidationError("policy: trailing text '" + rest + "'");
  }
  if (kind == "interval_min") {
    if (has_arg) throw ValidationError("policy: interval_min takes no value");
    return SuperconvPolicy::interval_min();
  }
  if (kind == "newton") {
    if (has_arg) throw ValidationError("policy: newton takes no value");
    return SuperconvPolicy::newton();
  }
  if (kind == "at_left") {
    if (has_arg) throw ValidationError("policy: at_left takes no value");
    return SuperconvPolicy::at_left();
  }
  if (kind == "at_right") {
    if (has_arg) throw ValidationError("policy: at_right takes no value");
    return SuperconvPolicy::at_right();
  }
  if (kind == "offset") {
    if (!has_arg || !(arg >= 0.0 && arg <= 1.0)) {
      throw ValidationError("policy: offset needs a value in [0, 1]");
    }
    return SuperconvPolicy::offset(arg);
  }
  if (kind == "offset_frac") {
    if (!has_arg || !(arg >= 0.0 && arg <= 1.0)) {
      throw ValidationError("policy: offset_frac needs a value in [0, 1]");
    }
    return SuperconvPolicy::offset_frac(arg);
  }
  throw ValidationError("policy: unknown policy '" + kind + "'");
}

namespace {

struct ParsedLine {
  int number = 0;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  size_t a = 0;
  size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void config_error(int line, const std::string& message) {
  throw ValidationError("config line " + std::to_string(line) + ": " +
                        message);
}

double parse_number(const ParsedLine& line) {
  size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(line.value, &pos);
  } catch (const std::exception&) {
    config_error(line.number, "malformed number for " + line.key + ": '" +
                                  line.value + "'");
  }
  if (pos != line.value.size()) {
    config_error(line.number, "malformed number for " + line.key + ": '" +
                                  line.value + "'");
  }
  return value;
}

int parse_integer(const ParsedLine& line) {
  const double v = parse_number(line);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    config_error(line.number, line.key + " must be an integer");
  }
  return static_cast<int>(v);
}

std::vector<int> parse_int_list(const ParsedLine& line) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(line.value);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) {
      config_error(line.number, "empty entry in " + line.key + " list");
    }
    ParsedLine entry{line.number, line.key, token};
    out.push_back(parse_integer(entry));
  }
  if (out.empty()) config_error(line.number, line.key + " list is empty");
  return out;
}

}  // namespace

RunSpec parse_config(const std::string& text) {
  static const std::vector<std::string> known{
      "problem", "case", "delta", "alpha0",      "alphaT", "N",  "M",
      "r",       "p",    "policy", "cg_tol", "quad_degree", "out"};
  std::map<std::string, ParsedLine> entries;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      config_error(number, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error(number, "unknown key '" + key + "'");
    }
    if (entries.count(key) != 0) {
      config_error(number, "duplicate key '" + key + "'");
    }
    if (value.empty()) config_error(number, "empty value for '" + key + "'");
    entries.emplace(key, ParsedLine{number, key, value});
  }

  auto require = [&](const std::string& key) -> const ParsedLine& {
    auto it = entries.find(key);
    if (it == entries.end()) {
      throw ValidationError("config: missing required key '" + key + "'");
    }
    return it->second;
  };
  auto maybe = [&](const std::string& key) -> const ParsedLine* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  RunSpec spec;
  spec.case_name = require("case").value;
  if (spec.case_name != "ex1" && spec.case_name != "ex2" &&
      spec.case_name != "ex3") {
    config_error(require("case").number,
                 "case must be ex1, ex2 or ex3, got '" + spec.case_name + "'");
  }
  spec.kind = spec.case_name == "ex3" ? ProblemKind::mobile_immobile
                                      : ProblemKind::subdiffusion;
  if (const ParsedLine* line = maybe("problem")) {
    const std::string& v = line->value;
    ProblemKind parsed;
    if (v == "subdiffusion") {
      parsed = ProblemKind::subdiffusion;
    } else if (v == "mobile_immobile" || v == "mobile-immobile") {
      parsed = ProblemKind::mobile_immobile;
    } else {
      config_error(line->number, "unknown problem kind '" + v + "'");
    }
    if (parsed != spec.kind) {
      config_error(line->number,
                   "problem kind does not match case " + spec.case_name);
    }
  }

  if (spec.case_name == "ex3") {
    const ParsedLine& a0 = require("alpha0");
    spec.alpha0 = parse_number(a0);
    const ParsedLine& aT = require("alphaT");
    spec.alphaT = parse_number(aT);
    if (!(spec.alpha0 >= 0.0 && spec.alpha0 < 1.0)) {
      config_error(a0.number, "alpha0 must lie in [0, 1)");
    }
    if (!(spec.alphaT >= 0.0 && spec.alphaT < 1.0)) {
      config_error(aT.number, "alphaT must lie in [0, 1)");
    }
    if (maybe("delta") != nullptr) {
      config_error(maybe("delta")->number, "delta does not apply to ex3");
    }
  } else {
    const ParsedLine& d = require("delta");
    spec.delta = parse_number(d);
    const double hi = spec.case_name == "ex1" ? 0.9 : 1.0;
    if (!(spec.delta > 0.0 && spec.delta < hi)) {
      std::ostringstream msg;
      msg << "delta must lie in (0, " << hi << ") for " << spec.case_name;
      config_error(d.number, msg.str());
    }
  }

  spec.N_list = parse_int_list(require("N"));
  spec.M_list = parse_int_list(require("M"));
  for (int N : spec.N_list) {
    if (N < 1) config_error(require("N").number, "N entries must be >= 1");
  }
  for (int M : spec.M_list) {
    if (M < 1) config_error(require("M").number, "M entries must be >= 1");
  }

  if (const ParsedLine* line = maybe("r")) {
    spec.r = parse_number(*line);
    if (!(spec.r >= 1.0)) {
      config_error(line->number, "r must be >= 1 (got " + line->value + ")");
    }
  }
  if (const ParsedLine* line = maybe("p")) {
    spec.p = parse_integer(*line);
    if (spec.p != 1 && spec.p != 2) {
      config_error(line->number, "p must be 1 or 2");
    }
  }
  if (const ParsedLine* line = maybe("policy")) {
    try {
      spec.policy = parse_policy(line->value);
    } catch (const ValidationError& e) {
      config_error(line->number, e.what());
    }
  }
  if (const ParsedLine* line = maybe("cg_tol")) {
    spec.cg_tol = parse_number(*line);
    if (!(spec.cg_tol > 0.0 && spec.cg_tol < 1.0)) {
      config_error(line->number, "cg_tol must lie in (0, 1)");
    }
  }
  if (const ParsedLine* line = maybe("quad_degree")) {
    spec.quad_degree = parse_integer(*line);
    if (spec.quad_degree != 2 && spec.quad_degree != 4 &&
        spec.quad_degree != 6) {
      config_error(line->number, "quad_degree must be 2, 4 or 6");
    }
  }
  if (const ParsedLine* line = maybe("out")) spec.out = line->value;
  return spec;
}

std::string serialize_config(const RunSpec& spec) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  auto list = [](const std::vector<int>& values) {
    std::string s;
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) s += ",";
      s += std::to_string(values[i]);
    }
    return s;
  };
  out << "case = " << spec.case_name << "\n";
  out << "problem = "
      << (spec.kind == ProblemKind::subdiffusion ? "subdiffusion"
                                                 : "mobile_immobile")
      << "\n";
  if (spec.case_name == "ex3") {
    out << "alpha0 = " << num(spec.alpha0) << "\n";
    out << "alphaT = " << num(spec.alphaT) << "\n";
  } else {
    out << "delta = " << num(spec.delta) << "\n";
  }
  out << "N = " << list(spec.N_list) << "\n";
  out << "M = " << list(spec.M_list) << "\n";
  out << "r = " << num(spec.r) << "\n";
  out << "p = " << spec.p << "\n";
  out << "policy = " << to_string(spec.policy) << "\n";
  out << "cg_tol = " << num(spec.cg_tol) << "\n";
  out << "quad_degree = " << spec.quad_degree << "\n";
  if (!spec.out.empty()) out << "out = " << spec.out << "\n";
  return out.str();
}

ManufacturedCase case_from_spec(const RunSpec& spec) {
  ManufacturedCase mc =
      builtin_case(spec.case_name, spec.delta, spec.alpha0, spec.alphaT);
  if (mc.problem.kind != spec.kind) {
    throw ValidationError("case_from_spec: problem kind mismatch");
  }
  return mc;
}

SchemeConfig scheme_config(const RunSpec& spec, int N, int M) {
  SchemeConfig config;
  config.N = N;
  config.M = M;
  config.r = spec.r;
  config.p = spec.p;
  config.policy = spec.policy;
  config.cg_tol = spec.cg_tol;
  config.quad_assembly = 4;
  config.quad_load = spec.quad_degree;
  return config;
}

double history_error(const ManufacturedCase& mc,
                     const SolutionHistory& history) {
  if (!mc.problem.exact) {
    throw ValidationError("history_error: case has no exact solution");
  }
  const QuadratureRule quad = triangle_quadrature(6);
  double worst = 0.0;
  for (size_t n = 1; n < history.U.size(); ++n) {
    const double t = history.tmesh.node(static_cast<int>(n));
    const double err = l2_error(
        history.space, FEFunction{history.U[n]},
        [&](double x, double y) { return mc.problem.exact(x, y, t); }, quad);
    worst = std::max(worst, err);
  }
  return worst;
}

namespace {

void run_indexed(int count, int threads,
                 const std::function<void(int)>& task) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) break;
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_doubling(const std::vector<int>& values, const char* key) {
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] != 2 * values[i - 1]) {
      throw ValidationError(std::string(key) +
                            " list must double at each refinement");
    }
  }
}

ConvergenceReport build_report(const ManufacturedCase& mc,
                               const RunSpec& spec,
                               const std::vector<int>& N_per_row,
                               const std::vector<int>& M_per_row,
                               const std::vector<double>& errors) {
  ConvergenceReport report;
  for (size_t i = 0; i < errors.size(); ++i) {
    ReportRow row;
    row.case_name = mc.name;
    row.policy = to_string(spec.policy);
    row.p = spec.p;
    row.r = spec.r;
    row.delta = mc.delta;
    row.M = M_per_row[i];
    row.N = N_per_row[i];
    row.error = errors[i];
    if (i > 0) {
      row.order = std::log2(errors[i - 1] / errors[i]);
      row.has_order = true;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

template <class Annotate>
void run_study(int count, int threads, const Annotate& annotate,
               const std::function<void(int)>& task) {
  run_indexed(count, threads, [&](int i) {
    try {
      task(i);
    } catch (const ValidationError& e) {
      throw ValidationError(annotate(i) + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(annotate(i) + e.what());
    }
  });
}

}  // namespace

ConvergenceReport converge_time_case(const ManufacturedCase& mc,
                                     const RunSpec& spec, int threads,
                                     std::vector<SolutionHistory>* histories) {
  if (spec.N_list.empty()) throw ValidationError("converge_time: empty N list");
  if (spec.M_list.size() != 1) {
    throw ValidationError("converge_time: exactly one M value expected");
  }
  require_doubling(spec.N_list, "N");
  const int count = static_cast<int>(spec.N_list.size());
  std::vector<double> errors(count, 0.0);
  std::vector<SolutionHistory> local(count);
  run_study(
      count, threads,
      [&](int i) { return "N=" + std::to_string(spec.N_list[i]) + ": "; },
      [&](int i) {
        const SchemeConfig config =
            scheme_config(spec, spec.N_list[i], spec.M_list[0]);
        local[i] = run(mc.problem, config);
        errors[i] = history_error(mc, local[i]);
      });
  if (histories != nullptr) *histories = std::move(local);
  return build_report(mc, spec, spec.N_list,
                      std::vector<int>(count, spec.M_list[0]), errors);
}

ConvergenceReport converge_space_case(const ManufacturedCase& mc,
                                      const RunSpec& spec, int threads,
                                      std::vector<SolutionHistory>* histories) {
  if (spec.M_list.empty()) {
    throw ValidationError("converge_space: empty M list");
  }
  if (spec.N_list.size() != 1) {
    throw ValidationError("converge_space: exactly one N value expected");
  }
  require_doubling(spec.M_list, "M");
  const int count = static_cast<int>(spec.M_list.size());
  std::vector<double> errors(count, 0.0);
  std::vector<SolutionHistory> local(count);
  run_study(
      count, threads,
      [&](int i) { return "M=" + std::to_string(spec.M_list[i]) + ": "; },
      [&](int i) {
        const SchemeConfig config =
            scheme_config(spec, spec.N_list[0], spec.M_list[i]);
        local[i] = run(mc.problem, config);
        errors[i] = history_error(mc, local[i]);
      });
  if (histories != nullptr) *histories = std::move(local);
  return build_report(mc, spec, std::vector<int>(count, spec.N_list[0]),
                      spec.M_list, errors);
}

ConvergenceReport converge_time(const RunSpec& spec, int threads) {
  return converge_time_case(case_from_spec(spec), spec, threads);
}

ConvergenceReport converge_space(const RunSpec& spec, int threads) {
  return converge_space_case(case_from_spec(spec), spec, threads);
}

std::string render_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "case,policy,p,r,delta,M,N,error,order\n";
  char buf[64];
  for (const ReportRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%g", row.r);
    const std::string r_text = buf;
    std::snprintf(buf, sizeof(buf), "%g", row.delta);
    const std::string delta_text = buf;
    std::snprintf(buf, sizeof(buf), "%.4e", row.error);
    const std::string error_text = buf;
    std::string order_text;
    if (row.has_order) {
      std::snprintf(buf, sizeof(buf), "%.4e", row.order);
      order_text = buf;
    }
    out << row.case_name << ',' << row.policy << ',' << row.p << ','
        << r_text << ',' << delta_text << ',' << row.M << ',' << row.N << ','
        << error_text << ',' << order_text << "\n";
  }
  return out.str();
}

void emit_csv(const ConvergenceReport& report, const std::string& path) {
  if (report.rows.empty()) {
    throw ValidationError("emit_csv: refusing to write an empty report");
  }
  std::ofstream out(path);
  if (!out) throw IoError("emit_csv: cannot open '" + path + "'");
  out << render_csv(report);
  out.flush();
  if (!out) throw IoError("emit_csv: write failed for '" + path + "'");
}

AuditSweep default_audit_sweep() {
  AuditSweep sweep;
  for (const double delta : {0.2, 0.4, 0.6, 0.8}) {
    std::ostringstream label;
    label << "ex1 delta=" << delta;
    sweep.families.push_back(
        {label.str(), builtin_case("ex1", delta).problem.exponent});
  }
  sweep.families.push_back({"ex2", builtin_case("ex2", 0.8).problem.exponent});
  for (const double value : {0.0, 0.3, 0.7}) {
    std::ostringstream label;
    label << "constant " << value;
    sweep.families.push_back(
        {label.str(), VariableExponent::constant(value, 1.0)});
  }
  sweep.r_values = {1.0, 2.0, 3.0, 4.0};
  sweep.N_values = {8, 16, 32, 64};
  return sweep;
}

namespace {

std::vector<SuperconvPolicy> audit_policies(const VariableExponent& family) {
  switch (family.hint()) {
    case Monotonicity::increasing:
      return {SuperconvPolicy::interval_min(), SuperconvPolicy::at_left(),
              SuperconvPolicy::offset(0.5),    SuperconvPolicy::offset(0.6),
              SuperconvPolicy::offset(0.8),
              SuperconvPolicy::offset_frac(0.5), SuperconvPolicy::newton()};
    case Monotonicity::decreasing:
      return {SuperconvPolicy::interval_min(), SuperconvPolicy::at_right(),
              SuperconvPolicy::offset_frac(0.5), SuperconvPolicy::newton()};
    case Monotonicity::none:
      return {SuperconvPolicy::interval_min(),
              SuperconvPolicy::at_left(),
              SuperconvPolicy::at_right(),
              SuperconvPolicy::offset(0.5),
              SuperconvPolicy::offset(0.6),
              SuperconvPolicy::offset(0.8),
              SuperconvPolicy::offset_frac(0.5),
              SuperconvPolicy::newton()};
  }
  return {};
}

struct AuditContext {
  const AuditFamily& family;
  const SuperconvPolicy& policy;
  double r;
  int N;
  AuditReport& report;
  double slack = 1e-12;

  void check(const std::string& invariant, int n, int k, double lhs,
             double rhs, double scale = 0.0) {
    ++report.checks;
    const double defect = inequality_defect(lhs, rhs, scale);
    if (defect > slack) {
      report.violations.push_back({family.label, to_string(policy), invariant,
                                   r, N, n, k, defect});
    }
  }

  void fail(const std::string& invariant, int n, const std::string&) {
    ++report.checks;
    report.violations.push_back(
        {family.label, to_string(policy), invariant, r, N, n, 0,
         std::numeric_limits<double>::quiet_NaN()});
  }
};

void audit_one_run(AuditContext ctx) {
  const VariableExponent& alpha = ctx.family.exponent;
  const double sup = alpha.sup_bound();
  const GradedMesh mesh = build_graded_mesh(1.0, ctx.N, ctx.r);
  const double lN = 1.0 / std::log(static_cast<double>(ctx.N));
  const double corollary_front_base =
      (1.0 + std::pow(2.0, ctx.r)) * std::exp(ctx.r) /
      std::tgamma(1.0 + lN);

  std::vector<CoeffRow> rows;
  std::vector<StepParams> params_list;
  double gamma_max = 0.0;
  double alpha_star_min = 1.0;

  for (int n = 1; n <= ctx.N; ++n) {
    StepParams params;
    try {
      params = select_step_params(alpha, mesh, n, ctx.policy);
    } catch (const NumericalError& e) {
      ctx.fail("policy selection", n, e.what());
      return;
    } catch (const ValidationError& e) {
      ctx.fail("policy selection", n, e.what());
      return;
    }
    const CoeffRow row = l21_coefficients(mesh, params);
    rows.push_back(row);
    params_list.push_back(params);
    const double as = params.alpha_star;
    const double theta = params.theta_n;
    gamma_max = std::max(gamma_max, std::tgamma(1.0 + lN - as));
    alpha_star_min = std::min(alpha_star_min, as);

    const double g1 = std::tgamma(1.0 - as);
    const double g2 = std::tgamma(2.0 - as);
    ctx.check("gamma lower bound", n, 0, g1, 0.6);
    ctx.check("gamma upper bound", n, 0, 2.0 / (1.0 - sup), g1);

    ctx.check("c0 upper bound", n, 0,
              9.0 / 8.0 * std::pow(mesh.step(n), -as) / g2, row.c[0]);
    for (int k = 1; k <= n; ++k) {
      const double lower =
          pow_diff(mesh.node(n) - mesh.node(k), mesh.node(n) - mesh.node(k - 1),
                   1.0 - as) /
          ((1.0 + std::pow(3.0, ctx.r)) * mesh.step(k) * g2);
      ctx.check("c lower bound", n, k, row.c[n - k], lower);
    }
    for (int j = 0; j + 1 < n; ++j) {
      ctx.check("c monotone", n, j, row.c[j], row.c[j + 1],
                row.c[0]);
    }
    ctx.check("c positivity", n, n - 1, row.c[n - 1], 0.0, row.c[0]);
    if (n >= 2) {
      ctx.check("c theta combination", n, 0,
                (1.0 - 2.0 * theta) / (1.0 - theta) * row.c[0], row.c[1],
                row.c[0]);
    }

    if (n >= 2 && as > 0.0) {
      for (int k = 1; k <= n - 1; ++k) {
        ctx.check("b positive", n, k, row.b[n - k], 0.0, row.a[n - k]);
        ctx.check("b quarter bound", n, k, row.a[n - k] / 4.0, row.b[n - k]);
        ctx.check("a history lower bound", n, k, row.a[n - k],
                  std::pow(mesh.node(n) - mesh.node(k - 1), -as) / g1);
      }
      std::vector<IJPair> ij(n);
      for (int k = 1; k <= n - 1; ++k) {
        ij[k] = ij_quantities(mesh, params, k);
        ctx.check("I vs b", n, k, mesh.ratio(k) * ij[k].I,
                  (mesh.ratio(k) + 1.0) * row.b[n - k]);
        ctx.check("J vs I", n, k, ij[k].J, ij[k].I);
      }
      for (int k = 1; k <= n - 2; ++k) {
        ctx.check("I ratio chain", n, k, mesh.ratio(k) * ij[k + 1].I,
                  ij[k].I);
      }
      for (int k = 1; k <= n - 2; ++k) {
        const double diff = row.a[n - k - 1] - row.a[n - k];
        if (k == 1) {
          ctx.check("a difference (first)", n, k, diff,
                    row.b[n - 2] + 1.5 * ij[1].I, row.a[n - 2]);
        } else {
          ctx.check("a difference (middle)", n, k, diff,
                    row.b[n - k - 1] + mesh.ratio(k - 1) * row.b[n - k + 1] +
                        ij[k].I,
                    row.a[n - k - 1]);
        }
      }
      {
        const int k = n - 1;
        const double diff = row.a[0] - row.a[1];
        if (n == 2) {
          ctx.check("a difference (last)", n, k, diff, ij[k].I, row.a[0]);
        } else {
          ctx.check("a difference (last)", n, k, diff,
                    mesh.ratio(n - 2) * row.b[2] + 0.5 * ij[k].I, row.a[0]);
        }
      }
    }

    KernelRow kernels;
    try {
      kernels = complementary_kernels(rows);
    } catch (const NumericalError& e) {
      ctx.fail("kernel construction", n, e.what());
      return;
    }
    ctx.check("kernel identity residual", n, 0, 1e-10, kernels.max_residual);
    double sum_weighted = 0.0;
    double sum_plain = 0.0;
    for (int j = 1; j <= n; ++j) {
      ctx.check("kernel nonnegative", n, j, kernels.P[n - j], 0.0,
                kernels.P[0] + 1.0);
      sum_weighted +=
          kernels.P[n - j] *
          std::pow(mesh.node(j), -params_list[j - 1].alpha_star);
      sum_plain += kernels.P[n - j];
    }
    const double front = corollary_front_base * gamma_max;
    ctx.check("corollary weighted sum", n, 0, front, sum_weighted);
    ctx.check("corollary plain sum", n, 0,
              front * std::pow(mesh.node(n), alpha_star_min), sum_plain);
  }

  // Quadratic-form inequality on random histories at the final step.
  std::seed_seq seed{static_cast<unsigned>(ctx.N),
                     static_cast<unsigned>(ctx.r * 977),
                     static_cast<unsigned>(ctx.family.label.size()),
                     static_cast<unsigned>(ctx.policy.kind)};
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const CoeffRow& last = rows.back();
  const int n = ctx.N;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> v(n + 1);
    for (double& value : v) value = unit(gen);
    double dtau = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double c = last.c[n - k];
      dtau += c * (v[k] - v[k - 1]);
      rhs += c * (v[k] * v[k] - v[k - 1] * v[k - 1]);
      scale += c * (v[k] * v[k] + v[k - 1] * v[k - 1]);
    }
    const double point =
        last.theta_n * v[n - 1] + (1.0 - last.theta_n) * v[n];
    AuditContext trial_ctx = ctx;
    trial_ctx.slack = 1e-11;
    trial_ctx.check("quadratic form", n, trial, 2.0 * dtau * point, rhs,
                    scale);
  }
}

}  // namespace

AuditReport property_audit(const AuditSweep& sweep) {
  struct RunItem {
    const AuditFamily* family;
    SuperconvPolicy policy;
    double r;
    int N;
  };
  std::vector<RunItem> items;
  for (const AuditFamily& family : sweep.families) {
    for (const SuperconvPolicy& policy : audit_policies(family.exponent)) {
      for (const double r : sweep.r_values) {
        for (const int N : sweep.N_values) {
          items.push_back({&family, policy, r, N});
        }
      }
    }
  }
  if (sweep.seed != 0) {
    std::mt19937_64 gen(sweep.seed);
    std::shuffle(items.begin(), items.end(), gen);
  }

  AuditReport report;
  for (const RunItem& item : items) {
    ++report.runs;
    audit_one_run(AuditContext{*item.family, item.policy, item.r, item.N,
                               report});
  }
  return report;
}

}  // namespace subdiff
