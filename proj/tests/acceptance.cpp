// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "amm/amm.hpp"

using namespace amm;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const std::size_t kDims[] = {1, 2, 3, 5, 8};
const double kAngles[] = {0.0, std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3};
constexpr std::size_t kSamples = 200;
constexpr std::uint64_t kSeed = 2024;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

template <class Fn>
void for_each_ensemble(Fn&& fn) {
  for (std::size_t n : kDims)
    for (double alpha : kAngles) fn(EnsembleSpec{n, alpha, 1.0, 4.0, kSamples, kSeed});
}

Outcome geometric_paths() {
  double worst = 0.0, worst_drury = 0.0;
  std::size_t evaluated = 0, errors = 0;
  for_each_ensemble([&](const EnsembleSpec& spec) {
    for (std::size_t i = 0; i < spec.count; ++i) {
      const Matrix a = random_sectorial(spec, i, stream::a);
      const Matrix b = random_sectorial(spec, i, stream::b);
      for (double lambda : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        try {
          const GeometricPaths p = geometric_mean_paths(a, b, lambda);
          worst = std::max(worst, p.max_deviation);
          if (lambda == 0.5) worst_drury = std::max(worst_drury, relative_deviation(drury_half(a, b), p.measure));
          ++evaluated;
        } catch (const Error&) {
          ++errors;
        }
      }
    }
  });
  return {errors == 0 && worst <= 1e-8 && worst_drury <= 1e-7,
          std::to_string(evaluated) + " triples, max path deviation " + fmt(worst) + " (<= 1e-8), Drury deviation " +
              fmt(worst_drury) + " (<= 1e-7), errors " + std::to_string(errors)};
}

Outcome cross_representation() {
  const auto fs = suite_functions();
  double worst = 0.0;
  std::size_t evaluated = 0, errors = 0;
  for_each_ensemble([&](const EnsembleSpec& spec) {
    for (std::size_t i = 0; i < spec.count; ++i) {
      const Matrix a = random_sectorial(spec, i, stream::a);
      try {
        const std::vector<Matrix> contour = dunford_apply_many(fs, a, choose_contour(a));
        for (std::size_t q = 0; q < fs.size(); ++q) {
          worst = std::max(worst, relative_deviation(apply_function(fs[q], a), contour[q]));
          ++evaluated;
        }
      } catch (const Error&) {
        ++errors;
      }
    }
  });
  return {errors == 0 && worst <= 1e-8, std::to_string(evaluated) + " evaluations, max ||quadrature - contour|| / scale " +
                                            fmt(worst) + " (<= 1e-8), errors " + std::to_string(errors)};
}

struct SuiteRun {
  std::vector<CheckConfig> configs;
  std::vector<CheckReport> reports;
};

Outcome full_suite(const SuiteRun& run) {
  std::size_t failed = 0, samples = 0;
  std::map<std::string, std::pair<std::size_t, double>> by_id;  // failing configs, worst margin
  for (const CheckReport& r : run.reports) {
    samples += r.samples;
    if (r.pass) continue;
    ++failed;
    auto& e = by_id.try_emplace(r.check, 0, std::numeric_limits<double>::infinity()).first->second;
    ++e.first;
    e.second = std::min(e.second, r.error ? -std::numeric_limits<double>::infinity() : r.min_margin);
  }
  std::string detail = std::to_string(run.reports.size() - failed) + "/" + std::to_string(run.reports.size()) +
                       " configurations pass (" + std::to_string(samples) + " samples)";
  for (const auto& [id, e] : by_id)
    detail += "; " + id + " fails " + std::to_string(e.first) + " configs, min margin " + fmt(e.second);
  return {failed == 0, detail};
}

const CheckReport* find_report(const SuiteRun& run, std::string_view id, std::size_t dim, const CheckParams& like) {
  for (std::size_t k = 0; k < run.configs.size(); ++k) {
    const CheckConfig& c = run.configs[k];
    if (c.id != id || c.ensemble.dim != dim || c.ensemble.alpha_max != 0.0) continue;
    if (like.f && (!c.params.f || c.params.f->label() != like.f->label())) continue;
    return &run.reports[k];
  }
  return nullptr;
}

Outcome degeneration(const SuiteRun& run) {
  double worst = 0.0;
  std::size_t compared = 0, missing = 0;
  for (const DegenerationPair& pair : degeneration_pairs()) {
    const bool needs_f = check_info(pair.positive).needs_f;
    std::vector<CheckParams> variants{CheckParams{}};
    if (needs_f) {
      variants.clear();
      for (const MonotoneFunction& f : suite_functions()) {
        CheckParams p;
        p.f = f;
        variants.push_back(p);
      }
    }
    for (std::size_t n : kDims) {
      for (const CheckParams& like : variants) {
        const CheckReport* pos = find_report(run, pair.positive, n, like);
        std::vector<double> acc(kSamples, std::numeric_limits<double>::infinity());
        bool ok = pos && !pos->error;
        for (std::string_view id : pair.accretive) {
          const CheckReport* r = find_report(run, id, n, like);
          if (!r || r->error) {
            ok = false;
            break;
          }
          for (std::size_t i = 0; i < kSamples; ++i) acc[i] = std::min(acc[i], r->margins[i]);
        }
        if (!ok) {
          ++missing;
          continue;
        }
        for (std::size_t i = 0; i < kSamples; ++i) worst = std::max(worst, std::abs(acc[i] - pos->margins[i]));
        ++compared;
      }
    }
  }
  double identity = 0.0;
  bool identity_ok = true;
  for (std::size_t n : kDims) {
    const CheckReport* r = find_report(run, "pos_sharpando", n, {});
    if (!r || r->error) {
      identity_ok = false;
      continue;
    }
    identity = std::max(identity, -r->min_margin);
  }
  return {missing == 0 && identity_ok && worst <= 1e-12 && identity <= 1e-8,
          std::to_string(compared) + " pair ensembles, max |accretive - positive| margin gap " + fmt(worst) +
              " (<= 1e-12); (A nabla B) # (A ! B) = A # B deviation " + fmt(identity) + " (<= 1e-8)"};
}

std::vector<MonotoneFunction> measure_catalog() {
  std::vector<MonotoneFunction> out = suite_functions();
  for (double p : {0.05, 0.1, 0.25, 0.4, 0.6, 0.75, 0.9, 0.95}) {
    out.push_back(power_function(p));
    out.push_back(harmonic_function(p));
    out.push_back(arithmetic_function(p));
  }
  return out;
}

Outcome measure_integrity() {
  double mass = 0.0, mean = 0.0;
  const auto fs = measure_catalog();
  for (const MonotoneFunction& f : fs) {
    mass = std::max(mass, std::abs(measure_mass(f.measure) - 1.0));
    const double expected = f.name == "uniform" ? 0.5 : f.param;
    mean = std::max(mean, std::abs(measure_mean(f.measure) - expected));
    mean = std::max(mean, std::abs(measure_mean(f.measure) - f.derivative_at_one));
  }
  return {mass <= 1e-10 && mean <= 1e-10, std::to_string(fs.size()) + " functions, max |mass - 1| " + fmt(mass) +
                                              ", max |mean - f'(1)| " + fmt(mean) + " (<= 1e-10)"};
}

Outcome scalar_continuation() {
  double worst = 0.0;
  const auto fs = measure_catalog();
  for (const MonotoneFunction& f : fs)
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const cplx z(0.1 + 4.9 * i / 9.0, -5.0 + 10.0 * j / 9.0);
        worst = std::max(worst, std::abs(scalar_quadrature(f, z) - scalar_eval(f, z)));
      }
  return {worst <= 1e-9,
          std::to_string(fs.size()) + " functions x 100 grid points, max |quadrature - closed form| " + fmt(worst) + " (<= 1e-9)"};
}

Outcome kantorovich_bound() {
  const MonotoneFunction fs[] = {power_function(0.5), uniform_function(), harmonic_function(0.5), arithmetic_function(0.5)};
  const std::pair<double, double> bounds[] = {{1, 2}, {1, 4}, {0.5, 8}};
  constexpr std::size_t count = 20;
  std::size_t configs = 0, failed = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const MonotoneFunction& f : fs)
    for (const MonotoneFunction& g : fs)
      for (MapKind kind : unital_map_kinds)
        for (const auto& [m, M] : bounds)
          for (std::size_t n : kDims)
            for (double alpha : kAngles) {
              CheckParams p;
              p.f = f;
              p.g = g;
              p.map = MapSpec{kind, std::nullopt, kSeed + configs};
              const EnsembleSpec spec{n, alpha, m, M, count, kSeed};
              ++configs;
              try {
                const CheckReport r = run_check("kantorovich", spec, p);
                worst = std::min(worst, r.min_margin);
                failed += r.pass ? 0 : 1;
              } catch (const Error&) {
                ++failed;
              }
            }
  return {failed == 0, std::to_string(configs - failed) + "/" + std::to_string(configs) + " configurations (" +
                           std::to_string(configs * count) + " samples), min margin " + fmt(worst) + " (>= -1e-7)"};
}

Outcome symmetries(const SuiteRun& run) {
  double worst = 0.0;
  std::size_t ensembles = 0;
  bool ok = true;
  for (std::size_t k = 0; k < run.configs.size(); ++k) {
    const std::string& id = run.configs[k].id;
    if (id != "geo_flip" && id != "geo_inverse") continue;
    const CheckReport& r = run.reports[k];
    ++ensembles;
    if (r.error) {
      ok = false;
      continue;
    }
    worst = std::max(worst, -r.min_margin);
  }
  return {ok && ensembles == 2 * std::size(kDims) * std::size(kAngles) && worst <= 1e-8,
          std::to_string(ensembles) + " ensembles, max relative deviation " + fmt(worst) + " (<= 1e-8)"};
}

#ifdef AMM_CLI
int run_cli(const std::string& args) {
  const std::string cmd = "'" + std::string(AMM_CLI) + "' " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

Outcome determinism() {
  constexpr std::size_t count = 10;
#ifdef AMM_CLI
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("amm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string base = "suite --default --count " + std::to_string(count) + " --report ";
  const std::string r1 = (dir / "jobs1.json").string(), r4 = (dir / "jobs4.json").string(),
                    again = (dir / "again.json").string();
  const int c1 = run_cli(base + r1 + " --jobs 1");
  const int c4 = run_cli(base + r4 + " --jobs 4");
  const int c1b = run_cli(base + again + " --jobs 1");
  const std::string t1 = detail::read_text(r1), t4 = detail::read_text(r4), t1b = detail::read_text(again);
  fs::remove_all(dir);
  const bool same = t1 == t4 && t1 == t1b && c1 == c4 && c1 == c1b && !t1.empty();
  return {same, "amm suite --default (" + std::to_string(count) + " samples/config): " + std::to_string(t1.size()) +
                    "-byte reports " + (same ? "identical" : "differ") + " across --jobs 1, --jobs 4 and a repeat"};
#else
  const auto configs = default_suite(count, kSeed);
  const std::string t1 = report_to_string(run_suite(configs, 1));
  const std::string t4 = report_to_string(run_suite(configs, 4));
  const std::string t1b = report_to_string(run_suite(configs, 1));
  const bool same = t1 == t4 && t1 == t1b;
  return {same, "library reports " + std::string(same ? "identical" : "differ") + " across jobs 1, 4 and a repeat"};
#endif
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << name << ": " << o.detail << " ["
              << std::fixed << std::setprecision(1) << s << " s]" << std::defaultfloat << std::endl;
  };

  SuiteRun suite;
  report(1, "geometric-mean three-path agreement", geometric_paths);
  report(2, "functional-calculus cross-representation", cross_representation);
  report(3, "full inequality suite", [&] {
    suite.configs = default_suite(kSamples, kSeed);
    suite.reports = run_suite(suite.configs, 1);
    return full_suite(suite);
  });
  report(4, "degeneration at alpha = 0", [&] { return degeneration(suite); });
  report(5, "measure integrity", measure_integrity);
  report(6, "scalar continuation", scalar_continuation);
  report(7, "Kantorovich-type bound", kantorovich_bound);
  report(8, "weight-flip and inversion symmetries", [&] { return symmetries(suite); });
  report(9, "determinism and concurrency neutrality", determinism);

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (all ? "all criteria pass" : "some criteria FAIL") << " [" << std::fixed << std::setprecision(1) << total
            << " s]" << std::endl;
  return all ? 0 : 1;
}
