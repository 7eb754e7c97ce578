// SPDX-License-Identifier: Apache-2.0
//
// amm: means and functions of accretive matrices on JSON files, ensemble
// generation and inequality suites.
//
// Exit codes: 0 ok, 2 bad flags/input/config, 3 precondition (non-accretive
// operand), 4 numeric failure, 5 at least one suite check failed.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "amm/amm.hpp"

namespace {

using namespace amm;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_precondition = 3;
constexpr int exit_numeric = 4;
constexpr int exit_check_failed = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// AMM_QUAD_ORDER, if set, replaces the default quadrature order.
std::optional<int> env_quad_order() {
  const char* v = std::getenv("AMM_QUAD_ORDER");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long k = std::strtol(v, &end, 10);
  if (*end != '\0' || k < 2 || k > 512) throw UsageError(std::string("AMM_QUAD_ORDER must be an integer in [2, 512], got '") + v + "'");
  return static_cast<int>(k);
}

int report_error(const std::exception& e) {
  if (const auto* p = dynamic_cast<const PreconditionError*>(&e)) {
    std::cerr << "amm: precondition failed: " << p->what() << "\n";
    std::cerr << "amm: margin " << std::setprecision(17) << p->margin() << "\n";
    return exit_precondition;
  }
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::invalid_input:
      case ErrorKind::invalid_parameter:
        std::cerr << "amm: " << e.what() << "\n";
        return exit_usage;
      case ErrorKind::precondition: break;
      case ErrorKind::singular_matrix:
      case ErrorKind::numeric_failure:
      case ErrorKind::domain:
        std::cerr << "amm: numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
  }
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const std::filesystem::filesystem_error*>(&e)) {
    std::cerr << "amm: " << e.what() << "\n";
    return exit_usage;
  }
  std::cerr << "amm: " << e.what() << "\n";
  return exit_numeric;
}

// --- compute -----------------------------------------------------------------

struct ComputeArgs {
  std::string op, a, b, out, fn;
  std::optional<double> lambda, t, param;
};

double weight(const ComputeArgs& c) {
  if (c.t && c.lambda) throw UsageError("--t and --lambda are mutually exclusive");
  if (c.t) return *c.t;
  if (c.lambda) return *c.lambda;
  throw UsageError("--op " + c.op + " needs --t or --lambda");
}

MonotoneFunction function_arg(const ComputeArgs& c) {
  if (c.fn.empty()) throw UsageError("--op " + c.op + " needs --fn");
  if (c.fn != "uniform" && !c.param) throw UsageError("--fn " + c.fn + " needs --param");
  return catalog(c.fn, c.param.value_or(0.5));
}

int run_compute(const ComputeArgs& c) {
  QuadOptions opt;
  if (auto k = env_quad_order()) opt.order = *k;
  const Matrix a = read_matrix(c.a);
  const bool binary = c.op != "func";
  if (binary && c.b.empty()) throw UsageError("--op " + c.op + " needs --b");
  if (!binary && !c.b.empty()) throw UsageError("--op func takes no --b");
  const Matrix b = binary ? read_matrix(c.b) : Matrix();

  Matrix out;
  if (c.op == "harmonic") {
    out = harmonic_mean(a, b, weight(c), opt);
  } else if (c.op == "arithmetic") {
    out = arithmetic_mean(a, b, weight(c));
  } else if (c.op == "geometric") {
    out = geometric_mean(a, b, weight(c), opt);
  } else if (c.op == "geometric-neg") {
    out = geometric_neg(a, b, weight(c), opt);
  } else if (c.op == "sigma") {
    out = sigma_mean(a, b, function_arg(c), opt);
  } else {
    out = apply_function(function_arg(c), a, opt);
  }
  write_matrix(c.out, out);
  return exit_ok;
}

// --- angle -------------------------------------------------------------------

int run_angle(const std::string& path) {
  const Matrix a = read_matrix(path);
  const AccretiveVerdict v = is_accretive(a);
  const std::vector<double> ev = hermitian_eigenvalues(hermitian_part(a));
  Json j;
  j["accretive"] = v.accretive;
  if (v.accretive)
    j["alpha_radians"] = sectorial_angle(a);
  else
    j["alpha_radians"] = nullptr;
  j["m"] = ev.front();
  j["M"] = ev.back();
  std::cout << j.dump() << "\n";
  if (!v.accretive) {
    std::cerr << "amm: matrix is not accretive: margin " << std::setprecision(17) << v.margin << "\n";
    return exit_precondition;
  }
  return exit_ok;
}

// --- gen ---------------------------------------------------------------------

int run_gen(const EnsembleSpec& spec, const std::string& dir) {
  spec.validate();
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const std::filesystem::path file = std::filesystem::path(dir) / ("sample_" + std::to_string(i) + ".json");
    write_matrix(file.string(), random_sectorial(spec, i));
  }
  return exit_ok;
}

// --- suite -------------------------------------------------------------------

struct SuiteArgs {
  std::string config, report;
  bool use_default = false;
  bool timing = false;
  unsigned jobs = 1;
  std::size_t count = 200;
  std::uint64_t seed = 2024;
};

int run_suite_cmd(const SuiteArgs& s) {
  if (s.use_default == !s.config.empty()) throw UsageError("suite: give exactly one of --config FILE or --default");
  const std::optional<int> order = env_quad_order();
  std::vector<CheckConfig> configs;
  if (s.use_default) {
    configs = default_suite(s.count, s.seed);
    if (order)
      for (CheckConfig& c : configs) c.params.quad_order = *order;
  } else {
    configs = read_suite(s.config, order.value_or(verify_quad_order));
  }

  const auto start = std::chrono::steady_clock::now();
  const std::vector<CheckReport> reports = run_suite(configs, s.jobs);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(s.report, report_to_string(reports, {s.timing}));

  std::size_t failed = 0;
  for (const CheckReport& r : reports) {
    if (r.pass) continue;
    ++failed;
    std::cerr << "FAIL " << r.check << " dim=" << r.ensemble.dim << " alpha_max=" << r.ensemble.alpha_max;
    if (r.params.f) std::cerr << " f=" << r.params.f->label();
    if (r.params.g) std::cerr << " g=" << r.params.g->label();
    if (r.error)
      std::cerr << " error: " << *r.error << "\n";
    else
      std::cerr << " min_margin=" << r.min_margin << " worst_index=" << r.worst_index << "\n";
  }
  std::cerr << reports.size() - failed << "/" << reports.size() << " checks passed";
  if (s.timing) std::cerr << " in " << seconds << " s";
  std::cerr << "\n";
  return failed == 0 ? exit_ok : exit_check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Means and functional calculus of accretive matrices"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* cmd_compute = app.add_subcommand("compute", "Evaluate a mean or matrix function; writes a matrix file");
  cmd_compute->add_option("--op", compute.op, "Operation")
      ->required()
      ->check(CLI::IsMember({"harmonic", "arithmetic", "geometric", "geometric-neg", "sigma", "func"}));
  cmd_compute->add_option("--a", compute.a, "First operand (matrix file)")->required();
  cmd_compute->add_option("--b", compute.b, "Second operand (matrix file)");
  cmd_compute->add_option("--lambda", compute.lambda, "Geometric weight");
  cmd_compute->add_option("--t", compute.t, "Harmonic/arithmetic weight");
  cmd_compute->add_option("--fn", compute.fn, "Function family: power, arithmetic, harmonic, uniform");
  cmd_compute->add_option("--param", compute.param, "Function parameter");
  cmd_compute->add_option("--out", compute.out, "Output matrix file")->required();

  std::string angle_path;
  auto* cmd_angle = app.add_subcommand("angle", "Print accretivity, sectorial angle and Re-spectrum bounds");
  cmd_angle->add_option("--a", angle_path, "Matrix file")->required();

  EnsembleSpec gen;
  std::string gen_dir;
  auto* cmd_gen = app.add_subcommand("gen", "Write a seeded sectorial ensemble as sample_<i>.json");
  cmd_gen->add_option("--dim", gen.dim)->required();
  cmd_gen->add_option("--alpha", gen.alpha_max, "Sector half-angle bound in radians")->required();
  cmd_gen->add_option("--m", gen.m, "Lower bound of the Re-spectrum")->required();
  cmd_gen->add_option("--M", gen.M, "Upper bound of the Re-spectrum")->required();
  cmd_gen->add_option("--count", gen.count)->required();
  cmd_gen->add_option("--seed", gen.seed)->required();
  cmd_gen->add_option("--out", gen_dir, "Output directory")->required();

  SuiteArgs suite;
  auto* cmd_suite = app.add_subcommand("suite", "Run inequality checks and write a JSON report");
  cmd_suite->add_option("--config", suite.config, "Suite configuration file");
  cmd_suite->add_flag("--default", suite.use_default, "Run the built-in catalog over the standard ensembles");
  cmd_suite->add_option("--report", suite.report, "Report output file")->required();
  cmd_suite->add_option("--jobs", suite.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  cmd_suite->add_option("--count", suite.count, "Samples per configuration with --default")->check(CLI::PositiveNumber);
  cmd_suite->add_option("--seed", suite.seed, "Seed with --default");
  cmd_suite->add_flag("--timing", suite.timing, "Include elapsed_ms in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*cmd_compute) return run_compute(compute);
    if (*cmd_angle) return run_angle(angle_path);
    if (*cmd_gen) return run_gen(gen, gen_dir);
    return run_suite_cmd(suite);
  } catch (const std::exception& e) {
    return report_error(e);
  }
}
