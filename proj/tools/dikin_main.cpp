// Command-line front end: sample chains, run diagnostic suites, exercise the
// determinant estimator, and benchmark per-step cost. Every command writes a
// manifest sufficient to replay it bit-exactly (timing fields excepted).
//
// Exit codes: 0 success / all checks passed; 1 a requested check failed;
// 2 invalid input or usage; 3 numerical failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dikin/barrier.hpp"
#include "dikin/diagnostics.hpp"
#include "dikin/errors.hpp"
#include "dikin/estimators.hpp"
#include "dikin/generators.hpp"
#include "dikin/io.hpp"
#include "dikin/polytope.hpp"
#include "dikin/walk.hpp"

namespace {

using dikin::MetricKind;
using dikin::Polytope;
using dikin::Vector;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerical = 3;

// ---------------------------------------------------------------------------
// shared helpers

MetricKind parse_barrier(const std::string& name) {
  if (name == "log") return MetricKind::LogBarrier;
  if (name == "ls") return MetricKind::LsMatrix;
  throw std::invalid_argument("unknown barrier '" + name +
                              "' (expected log or ls)");
}

dikin::FilterKind parse_filter(const std::string& name) {
  if (name == "metropolis") return dikin::FilterKind::ExactMetropolis;
  if (name == "smooth") return dikin::FilterKind::Smooth;
  throw std::invalid_argument("unknown filter '" + name +
                              "' (expected metropolis or smooth)");
}

dikin::DetPath parse_det_path(const std::string& name) {
  if (name == "exact") return dikin::DetPath::Exact;
  if (name == "estimator") return dikin::DetPath::Estimator;
  throw std::invalid_argument("unknown det path '" + name +
                              "' (expected exact or estimator)");
}

Vector load_vector_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dikin::Error("cannot open vector file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw dikin::Error("cannot parse vector file " + path + ": " + e.what());
  }
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("x")) {
      throw dikin::Error("vector file " + path + " has no \"x\" field");
    }
    arr = &j.at("x");
  }
  if (!arr->is_array() || arr->empty()) {
    throw dikin::Error("vector file " + path + " must hold a nonempty array");
  }
  Vector x(static_cast<dikin::Index>(arr->size()));
  for (std::size_t i = 0; i < arr->size(); ++i) {
    if (!(*arr)[i].is_number()) {
      throw dikin::Error("vector file " + path + " has a non-numeric entry");
    }
    x[static_cast<dikin::Index>(i)] = (*arr)[i].get<double>();
  }
  return x;
}

Vector resolve_start(const Polytope& poly, const std::string& start) {
  if (start == "center") return dikin::analytic_center(poly);
  const Vector x = load_vector_json(start);
  poly.require_interior(x);
  return x;
}

// trace_7.jsonl from ("trace.jsonl", 7); single-chain runs keep the name
std::string chain_output_path(const std::string& base, long chain,
                              long chains) {
  if (chains <= 1) return base;
  const auto dot = base.rfind('.');
  const std::string suffix = "_" + std::to_string(chain);
  if (dot == std::string::npos || dot == 0) return base + suffix;
  return base.substr(0, dot) + suffix + base.substr(dot);
}

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------
// sample

struct SampleOptions {
  std::string polytope;
  std::string barrier = "log";
  std::string filter = "metropolis";
  std::string det_path = "exact";
  std::string start = "center";
  std::string out = "trace.jsonl";
  std::string format = "jsonl";
  std::string manifest;  // defaults to out + ".manifest.json"
  double radius = 1.0 / 512.0;
  long steps = 1000;
  long burnin = 0;
  long thin = 1;
  long chains = 1;
  long estimator_draws = 64;
  std::uint64_t seed = 0;
  bool lazy = false;
};

json sample_options_json(const SampleOptions& o) {
  return {{"polytope", o.polytope},
          {"barrier", o.barrier},
          {"filter", o.filter},
          {"det_path", o.det_path},
          {"start", o.start},
          {"out", o.out},
          {"format", o.format},
          {"manifest", o.manifest},
          {"radius", o.radius},
          {"steps", o.steps},
          {"burnin", o.burnin},
          {"thin", o.thin},
          {"chains", o.chains},
          {"estimator_draws", o.estimator_draws},
          {"seed", o.seed},
          {"lazy", o.lazy}};
}

SampleOptions sample_options_from_json(const json& j) {
  SampleOptions o;
  o.polytope = j.at("polytope").get<std::string>();
  o.barrier = j.at("barrier").get<std::string>();
  o.filter = j.at("filter").get<std::string>();
  o.det_path = j.at("det_path").get<std::string>();
  o.start = j.at("start").get<std::string>();
  o.out = j.at("out").get<std::string>();
  o.format = j.at("format").get<std::string>();
  o.manifest = j.at("manifest").get<std::string>();
  o.radius = j.at("radius").get<double>();
  o.steps = j.at("steps").get<long>();
  o.burnin = j.at("burnin").get<long>();
  o.thin = j.at("thin").get<long>();
  o.chains = j.at("chains").get<long>();
  o.estimator_draws = j.at("estimator_draws").get<long>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.lazy = j.at("lazy").get<bool>();
  return o;
}

int run_sample(const SampleOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opts.chains < 1) {
    throw std::invalid_argument("--chains must be at least 1");
  }
  if (opts.format != "jsonl" && opts.format != "csv") {
    throw std::invalid_argument("unknown format '" + opts.format +
                                "' (expected jsonl or csv)");
  }
  const dikin::GeneratedPolytope gen =
      dikin::load_polytope_source(opts.polytope);
  const Vector x0 = resolve_start(gen.poly, opts.start);

  dikin::WalkConfig config;
  config.radius = opts.radius;
  config.metric = parse_barrier(opts.barrier);
  config.filter = parse_filter(opts.filter);
  config.det_path = parse_det_path(opts.det_path);
  config.steps = opts.steps;
  config.burn_in = opts.burnin;
  config.thin = opts.thin;
  config.seed = opts.seed;
  config.lazy = opts.lazy;
  config.estimator_draws = opts.estimator_draws;
  config.validate();

  dikin::RunManifest manifest;
  manifest.command = "sample";
  manifest.options = sample_options_json(opts);
  manifest.stats["chains"] = json::array();
  if (config.metric == MetricKind::LsMatrix) {
    manifest.stats["q"] = dikin::ls_exponent(gen.poly.num_constraints());
  }

  long total_steps = 0;
  for (long k = 0; k < opts.chains; ++k) {
    config.stream = static_cast<std::uint64_t>(k);
    const dikin::ChainTrace trace = dikin::run_chain(gen.poly, x0, config);
    total_steps += trace.steps_executed;

    const std::string path = chain_output_path(opts.out, k, opts.chains);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dikin::Error("cannot open output file: " + path);
    if (opts.format == "jsonl") {
      dikin::write_trace_jsonl(trace, out);
    } else {
      dikin::write_trace_csv(trace, out);
    }
    manifest.outputs.push_back(path);
    json stats = dikin::trace_stats_json(trace);
    stats["output"] = path;
    manifest.stats["chains"].push_back(stats);
  }

  manifest.total_seconds = seconds_since(t0);
  manifest.per_step_seconds =
      total_steps > 0 ? manifest.total_seconds / double(total_steps) : 0.0;
  const std::string manifest_path =
      opts.manifest.empty() ? opts.out + ".manifest.json" : opts.manifest;
  dikin::save_manifest(manifest, manifest_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
  std::string polytope;
  std::string suite = "all";
  std::string barrier = "log";
  std::string manifest = "check.manifest.json";
  int trials = 100;
  int directions = 64;
  long uniformity_steps = 4000;
  long uniformity_burnin = 500;
  // heavy thinning so the recorded samples are close to independent; the KS
  // and chi-square p-values assume independence and are otherwise inflated
  long uniformity_thin = 50;
  // The filter makes the uniform law stationary at any radius, so the
  // uniformity chain defaults to a large step for usable mixing times.
  double uniformity_radius = 0.8;
  int cells = 0;  // 0 = automatic grid
  std::uint64_t seed = 1;
  double corrupt_derivative = 1.0;  // test hook; 1.0 = honest metric
};

json check_options_json(const CheckOptions& o) {
  return {{"polytope", o.polytope},
          {"suite", o.suite},
          {"barrier", o.barrier},
          {"manifest", o.manifest},
          {"trials", o.trials},
          {"directions", o.directions},
          {"uniformity_steps", o.uniformity_steps},
          {"uniformity_burnin", o.uniformity_burnin},
          {"uniformity_thin", o.uniformity_thin},
          {"uniformity_radius", o.uniformity_radius},
          {"cells", o.cells},
          {"seed", o.seed},
          {"corrupt_derivative", o.corrupt_derivative}};
}

CheckOptions check_options_from_json(const json& j) {
  CheckOptions o;
  o.polytope = j.at("polytope").get<std::string>();
  o.suite = j.at("suite").get<std::string>();
  o.barrier = j.at("barrier").get<std::string>();
  o.manifest = j.at("manifest").get<std::string>();
  o.trials = j.at("trials").get<int>();
  o.directions = j.at("directions").get<int>();
  o.uniformity_steps = j.at("uniformity_steps").get<long>();
  o.uniformity_burnin = j.at("uniformity_burnin").get<long>();
  o.uniformity_thin = j.at("uniformity_thin").get<long>();
  o.uniformity_radius = j.at("uniformity_radius").get<double>();
  o.cells = j.at("cells").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.corrupt_derivative = j.at("corrupt_derivative").get<double>();
  return o;
}

int run_check(const CheckOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const dikin::GeneratedPolytope gen =
      dikin::load_polytope_source(opts.polytope);
  const MetricKind kind = parse_barrier(opts.barrier);

  std::unique_ptr<dikin::MetricOracle> oracle =
      dikin::make_metric_oracle(kind);
  if (opts.corrupt_derivative != 1.0) {
    oracle = std::make_unique<dikin::ScaledDerivativeOracle>(
        std::move(oracle), opts.corrupt_derivative);
  }

  const bool all = opts.suite == "all";
  bool ran_any = false;
  json reports = json::array();
  dikin::Rng rng(opts.seed);

  if (all || opts.suite == "ssc") {
    ran_any = true;
    reports.push_back(dikin::report_json(dikin::check_strong_self_concordance(
        gen.poly, *oracle, opts.trials, rng)));
  }
  if (all || opts.suite == "sandwich") {
    ran_any = true;
    reports.push_back(dikin::report_json(
        dikin::check_global_sandwich(gen.poly, *oracle, opts.trials, rng)));
  }
  if (all || opts.suite == "symmetry") {
    ran_any = true;
    reports.push_back(dikin::report_json(dikin::estimate_symmetry(
        gen.poly, kind, opts.trials, opts.directions, rng)));
  }
  if (all || opts.suite == "convexity") {
    ran_any = true;
    reports.push_back(dikin::report_json(
        dikin::check_logdet_convexity(gen.poly, kind, opts.trials, rng)));
  }
  if (all || opts.suite == "uniformity") {
    ran_any = true;
    dikin::WalkConfig config;
    config.metric = kind;
    config.radius = opts.uniformity_radius;
    if (kind == MetricKind::LsMatrix) {
      // The weighted metric carries the constant (1+q^2)(1+q), shrinking its
      // unit ellipsoid by the square root of that factor relative to the
      // unweighted form. Compensate so the flag drives comparable step sizes
      // under either barrier; the membership guard keeps any radius exact.
      config.radius *= std::sqrt(dikin::ls_scaling(
          dikin::ls_exponent(gen.poly.num_constraints())));
    }
    config.steps = opts.uniformity_steps;
    config.burn_in = opts.uniformity_burnin;
    config.thin = opts.uniformity_thin;
    config.seed = opts.seed;
    config.validate();
    const Vector x0 = dikin::analytic_center(gen.poly);
    const dikin::ChainTrace trace = dikin::run_chain(gen.poly, x0, config);
    // The thinned output can still carry autocorrelation, which inflates the
    // nominal KS/chi-square statistics. Subsample the recorded points to near
    // independence before testing, but keep at least 200 so a badly mixing
    // chain is still tested (and fails) rather than erroring out.
    std::vector<Vector> samples = trace.samples;
    const long recorded = static_cast<long>(samples.size());
    if (recorded >= 400) {
      double min_ess = static_cast<double>(recorded);
      std::vector<double> series(samples.size());
      for (Eigen::Index d = 0; d < samples.front().size(); ++d) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
          series[i] = samples[i][d];
        }
        min_ess = std::min(min_ess, dikin::effective_sample_size(series));
      }
      const double tau = static_cast<double>(recorded) / std::max(min_ess, 1.0);
      if (tau > 1.5) {
        const long stride = std::clamp<long>(
            static_cast<long>(std::ceil(2.0 * tau)), 1, recorded / 200);
        if (stride > 1) {
          std::vector<Vector> kept;
          kept.reserve(static_cast<std::size_t>(recorded / stride) + 1);
          for (long i = 0; i < recorded; i += stride) {
            kept.push_back(samples[static_cast<std::size_t>(i)]);
          }
          samples = std::move(kept);
        }
      }
    }
    reports.push_back(dikin::report_json(
        dikin::uniformity_tests(samples, gen.body, opts.cells)));
  }
  if (!ran_any) {
    throw std::invalid_argument(
        "unknown suite '" + opts.suite +
        "' (expected ssc, sandwich, symmetry, convexity, uniformity or all)");
  }

  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.at("pass").get<bool>();

  std::cout << reports.dump(2) << std::endl;

  dikin::RunManifest manifest;
  manifest.command = "check";
  manifest.options = check_options_json(opts);
  manifest.stats = {{"all_pass", all_pass},
                    {"suites", static_cast<long>(reports.size())}};
  manifest.total_seconds = seconds_since(t0);
  dikin::save_manifest(manifest, opts.manifest);

  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// estimate-det

struct EstimateDetOptions {
  std::string polytope;
  std::string x_file;
  std::string y_file;
  std::string manifest = "estimate-det.manifest.json";
  long draws = 100000;
  std::uint64_t seed = 0;
  bool strict = false;
};

json estimate_det_options_json(const EstimateDetOptions& o) {
  return {{"polytope", o.polytope}, {"x_file", o.x_file},
          {"y_file", o.y_file},     {"manifest", o.manifest},
          {"draws", o.draws},       {"seed", o.seed},
          {"strict", o.strict}};
}

EstimateDetOptions estimate_det_options_from_json(const json& j) {
  EstimateDetOptions o;
  o.polytope = j.at("polytope").get<std::string>();
  o.x_file = j.at("x_file").get<std::string>();
  o.y_file = j.at("y_file").get<std::string>();
  o.manifest = j.at("manifest").get<std::string>();
  o.draws = j.at("draws").get<long>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.strict = j.at("strict").get<bool>();
  return o;
}

int run_estimate_det(const EstimateDetOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const dikin::GeneratedPolytope gen =
      dikin::load_polytope_source(opts.polytope);
  const Vector x = load_vector_json(opts.x_file);
  const Vector y = load_vector_json(opts.y_file);
  gen.poly.require_interior(x);
  gen.poly.require_interior(y);

  dikin::Rng rng(opts.seed);
  const dikin::DetRatioEstimate est =
      dikin::det_ratio_estimate(gen.poly, x, y, opts.draws, rng);

  // exact value from the log-barrier Cholesky factors, always feasible at
  // this scale
  const double exact =
      std::exp(0.5 * (dikin::log_barrier_hessian(gen.poly, y).logdet -
                      dikin::log_barrier_hessian(gen.poly, x).logdet));
  const double rel_error =
      exact != 0.0 ? std::abs(est.estimate - exact) / exact : 0.0;

  const json result = {{"estimate", est.estimate},
                       {"std_error", est.std_error},
                       {"pilot_cv", est.pilot_cv},
                       {"high_variance", est.high_variance},
                       {"draws", est.draws},
                       {"exact", exact},
                       {"rel_error", rel_error}};
  std::cout << result.dump(2) << std::endl;

  dikin::RunManifest manifest;
  manifest.command = "estimate-det";
  manifest.options = estimate_det_options_json(opts);
  manifest.stats = result;
  manifest.total_seconds = seconds_since(t0);
  dikin::save_manifest(manifest, opts.manifest);

  if (est.high_variance && opts.strict) {
    std::cerr << "estimate flagged high-variance (pilot CV "
              << est.pilot_cv << " > " << dikin::kDetRatioCvLimit
              << ") under --strict" << std::endl;
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string barrier = "log";
  std::string sizes = "20x5,40x5,80x5";
  std::string out;  // empty = stdout
  std::string manifest = "bench.manifest.json";
  long steps = 200;
  std::uint64_t seed = 0;
};

json bench_options_json(const BenchOptions& o) {
  return {{"barrier", o.barrier}, {"sizes", o.sizes},
          {"out", o.out},         {"manifest", o.manifest},
          {"steps", o.steps},     {"seed", o.seed}};
}

BenchOptions bench_options_from_json(const json& j) {
  BenchOptions o;
  o.barrier = j.at("barrier").get<std::string>();
  o.sizes = j.at("sizes").get<std::string>();
  o.out = j.at("out").get<std::string>();
  o.manifest = j.at("manifest").get<std::string>();
  o.steps = j.at("steps").get<long>();
  o.seed = j.at("seed").get<std::uint64_t>();
  return o;
}

std::vector<std::pair<long, long>> parse_sizes(const std::string& text) {
  std::vector<std::pair<long, long>> sizes;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    long m = 0, n = 0;
    if (std::sscanf(item.c_str(), "%ldx%ld", &m, &n) != 2 || m <= n || n < 1) {
      throw std::invalid_argument("bad size '" + item +
                                  "' (expected MxN with M > N >= 1)");
    }
    sizes.emplace_back(m, n);
  }
  if (sizes.empty()) throw std::invalid_argument("no sizes given");
  return sizes;
}

int run_bench(const BenchOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const MetricKind kind = parse_barrier(opts.barrier);
  const auto sizes = parse_sizes(opts.sizes);
  if (opts.steps < 0) throw std::invalid_argument("--steps must be >= 0");

  std::ostringstream csv;
  csv << "m,n,barrier,steps,acceptance_rate,mean_step_seconds,"
         "mean_weight_iterations\n";
  json rows = json::array();

  for (std::size_t i = 0; i < sizes.size() && opts.steps > 0; ++i) {
    const auto [m, n] = sizes[i];
    // the box contributes 2n rows; the rest are random halfspaces
    if (m < 2 * n) {
      throw std::invalid_argument("size " + std::to_string(m) + "x" +
                                  std::to_string(n) +
                                  " needs m >= 2n for the box generator");
    }
    const Polytope poly = dikin::make_random_polytope(
        static_cast<int>(n), static_cast<int>(m - 2 * n),
        opts.seed + 1000 * i);
    const Vector x0 = dikin::analytic_center(poly);

    dikin::WalkConfig config;
    config.metric = kind;
    config.steps = opts.steps;
    config.seed = opts.seed;
    config.validate();
    const auto oracle = dikin::make_metric_oracle(kind);

    dikin::ChainState state =
        dikin::make_chain_state(poly, x0, config, *oracle);
    long weight_iterations = state.eval.weight_iterations;
    long evaluations = 1;
    const auto start = std::chrono::steady_clock::now();
    for (long step = 0; step < opts.steps; ++step) {
      const dikin::StepRecord record =
          dikin::dikin_step(state, poly, config, *oracle);
      if (record.accepted) {
        weight_iterations += state.eval.weight_iterations;
        ++evaluations;
      }
    }
    const double elapsed = seconds_since(start);
    const double mean_step = elapsed / double(opts.steps);
    const double mean_weight_iters =
        kind == MetricKind::LsMatrix ? double(weight_iterations) / double(evaluations)
                                     : 0.0;
    const double acceptance =
        state.counters.proposals > 0
            ? double(state.counters.accepted) / double(state.counters.proposals)
            : 0.0;

    csv << m << ',' << n << ',' << opts.barrier << ',' << opts.steps << ','
        << dikin::format_double(acceptance) << ','
        << dikin::format_double(mean_step) << ','
        << dikin::format_double(mean_weight_iters) << '\n';
    rows.push_back({{"m", m},
                    {"n", n},
                    {"acceptance_rate", acceptance},
                    {"mean_step_seconds", mean_step},
                    {"mean_weight_iterations", mean_weight_iters}});
  }

  dikin::RunManifest manifest;
  manifest.command = "bench";
  manifest.options = bench_options_json(opts);
  manifest.stats = {{"rows", rows}};

  if (opts.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(opts.out, std::ios::binary);
    if (!out) throw dikin::Error("cannot open output file: " + opts.out);
    out << csv.str();
    manifest.outputs.push_back(opts.out);
  }
  manifest.total_seconds = seconds_since(t0);
  dikin::save_manifest(manifest, opts.manifest);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// replay

int run_replay(const std::string& manifest_path) {
  const dikin::RunManifest manifest = dikin::load_manifest(manifest_path);
  if (manifest.command == "sample") {
    return run_sample(sample_options_from_json(manifest.options));
  }
  if (manifest.command == "check") {
    return run_check(check_options_from_json(manifest.options));
  }
  if (manifest.command == "estimate-det") {
    return run_estimate_det(estimate_det_options_from_json(manifest.options));
  }
  if (manifest.command == "bench") {
    return run_bench(bench_options_from_json(manifest.options));
  }
  throw dikin::Error("manifest has unknown command '" + manifest.command +
                     "'");
}

// ---------------------------------------------------------------------------
// exit-code taxonomy

int classify_exception(const std::exception& e) {
  if (dynamic_cast<const dikin::NoConvergence*>(&e) != nullptr ||
      dynamic_cast<const dikin::FactorizationFailure*>(&e) != nullptr ||
      dynamic_cast<const dikin::StepOutOfDomain*>(&e) != nullptr ||
      dynamic_cast<const dikin::UnboundedDirection*>(&e) != nullptr) {
    return kExitNumerical;
  }
  if (dynamic_cast<const dikin::Error*>(&e) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&e) != nullptr ||
      dynamic_cast<const nlohmann::json::exception*>(&e) != nullptr) {
    return kExitInvalidInput;
  }
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dikin-ellipsoid polytope sampler and diagnostics"};
  app.set_version_flag("--version", std::string(dikin::kToolName) + " " +
                                        dikin::kToolVersion);
  app.require_subcommand(1);

  SampleOptions sample_opts;
  CLI::App* sample = app.add_subcommand(
      "sample", "Run one or more sampling chains and write traces");
  sample->add_option("polytope", sample_opts.polytope,
                     "Generator expression (cube(3), simplex(4), "
                     "cubedup(3,8), rand(4,6[,seed])) or polytope JSON path")
      ->required();
  sample->add_option("--barrier", sample_opts.barrier, "log or ls");
  sample->add_option("--radius", sample_opts.radius, "Proposal radius");
  sample->add_option("--filter", sample_opts.filter, "metropolis or smooth");
  sample->add_option("--det-path", sample_opts.det_path,
                     "exact or estimator determinant ratio");
  sample->add_option("--steps", sample_opts.steps, "Recorded samples");
  sample->add_option("--burnin", sample_opts.burnin, "Discarded prefix steps");
  sample->add_option("--thin", sample_opts.thin, "Record every thin-th step");
  sample->add_option("--seed", sample_opts.seed, "RNG seed");
  sample->add_option("--chains", sample_opts.chains,
                     "Independent chains on split RNG streams");
  sample->add_option("--start", sample_opts.start,
                     "'center' or a vector JSON file");
  sample->add_option("--out", sample_opts.out, "Trace output path");
  sample->add_option("--format", sample_opts.format, "jsonl or csv");
  sample->add_option("--manifest", sample_opts.manifest,
                     "Manifest path (default <out>.manifest.json)");
  sample->add_option("--estimator-draws", sample_opts.estimator_draws,
                     "Draws per estimator-path acceptance test");
  sample->add_flag("--lazy", sample_opts.lazy,
                   "Stay put with probability 1/2 each step");

  CheckOptions check_opts;
  CLI::App* check = app.add_subcommand(
      "check", "Run structural diagnostic suites and print JSON reports");
  check->add_option("polytope", check_opts.polytope,
                    "Generator expression or polytope JSON path")
      ->required();
  check->add_option("--suite", check_opts.suite,
                    "ssc, sandwich, symmetry, convexity, uniformity or all");
  check->add_option("--barrier", check_opts.barrier, "log or ls");
  check->add_option("--trials", check_opts.trials,
                    "Points / pairs / segments per suite");
  check->add_option("--directions", check_opts.directions,
                    "Directions per point in the symmetry scan");
  check->add_option("--uniformity-steps", check_opts.uniformity_steps,
                    "Recorded samples for the uniformity chain");
  check->add_option("--uniformity-burnin", check_opts.uniformity_burnin,
                    "Burn-in for the uniformity chain");
  check->add_option("--uniformity-thin", check_opts.uniformity_thin,
                    "Thinning for the uniformity chain");
  check->add_option("--uniformity-radius", check_opts.uniformity_radius,
                    "Proposal radius for the uniformity chain (the filter "
                    "keeps the uniform law stationary at any radius)");
  check->add_option("--cells", check_opts.cells,
                    "Chi-square cells per axis (0 = automatic)");
  check->add_option("--seed", check_opts.seed, "RNG seed");
  check->add_option("--manifest", check_opts.manifest, "Manifest path");
  check
      ->add_option("--corrupt-derivative", check_opts.corrupt_derivative,
                   "Scale the metric derivative (negative-control hook)")
      ->group("");  // hidden: only exists so tests can prove checks can fail

  EstimateDetOptions est_opts;
  CLI::App* est = app.add_subcommand(
      "estimate-det",
      "Randomized sqrt determinant-ratio estimate vs the exact value");
  est->add_option("polytope", est_opts.polytope,
                  "Generator expression or polytope JSON path")
      ->required();
  est->add_option("--x", est_opts.x_file, "Vector JSON file")->required();
  est->add_option("--y", est_opts.y_file, "Vector JSON file")->required();
  est->add_option("--draws", est_opts.draws, "Monte Carlo draws");
  est->add_option("--seed", est_opts.seed, "RNG seed");
  est->add_option("--manifest", est_opts.manifest, "Manifest path");
  est->add_flag("--strict", est_opts.strict,
                "Exit 3 when the variance screen trips");

  BenchOptions bench_opts;
  CLI::App* bench = app.add_subcommand(
      "bench", "Per-step wall-time microbenchmark over problem sizes");
  bench->add_option("--barrier", bench_opts.barrier, "log or ls");
  bench->add_option("--sizes", bench_opts.sizes,
                    "Comma-separated MxN constraint/dimension pairs");
  bench->add_option("--steps", bench_opts.steps, "Steps per size");
  bench->add_option("--seed", bench_opts.seed, "RNG seed");
  bench->add_option("--out", bench_opts.out, "CSV path (default stdout)");
  bench->add_option("--manifest", bench_opts.manifest, "Manifest path");

  std::string replay_path;
  CLI::App* replay =
      app.add_subcommand("replay", "Re-run a recorded manifest bit-exactly");
  replay->add_option("manifest", replay_path, "Manifest JSON path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (sample->parsed()) return run_sample(sample_opts);
    if (check->parsed()) return run_check(check_opts);
    if (est->parsed()) return run_estimate_det(est_opts);
    if (bench->parsed()) return run_bench(bench_opts);
    if (replay->parsed()) return run_replay(replay_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return classify_exception(e);
  }
  return kExitInvalidInput;
}
