#include "dikin/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dikin {

namespace {

Vector random_direction(Index n, Rng& rng) {
  Vector u(n);
  double norm = 0.0;
  do {
    for (Index i = 0; i < n; ++i) u[i] = standard_normal(rng);
    norm = u.norm();
  } while (norm == 0.0);
  return u / norm;
}

double ssc_allowed(MetricKind kind) {
  // exact derivative for the log barrier, finite differences plus a weight
  // fixed point for the weighted one
  return kind == MetricKind::LogBarrier ? 2.0 + 1e-6 : 2.0 * (1.0 + 1e-3);
}

}  // namespace

std::vector<Vector> random_interior_points(const Polytope& poly, int count,
                                           Rng& rng, int steps) {
  Vector x = analytic_center(poly);
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int k = 0; k < count; ++k) {
    for (int s = 0; s < steps; ++s) {
      const Vector u = random_direction(poly.dimension(), rng);
      const Chord chord = chord_through(poly, x, u);
      for (int attempt = 0; attempt < 16; ++attempt) {
        const double t =
            chord.t_minus +
            uniform_double(rng) * (chord.t_plus - chord.t_minus);
        const Vector candidate = x + t * u;
        if (poly.contains(candidate)) {
          x = candidate;
          break;
        }
      }
    }
    points.push_back(x);
  }
  return points;
}

SscReport check_strong_self_concordance(const Polytope& poly,
                                        const MetricOracle& oracle, int trials,
                                        Rng& rng) {
  SscReport report;
  report.metric = oracle.kind();
  report.trials = trials;
  report.allowed = ssc_allowed(oracle.kind());
  const auto points = random_interior_points(poly, trials, rng);
  for (const Vector& x : points) {
    const MetricEvaluation eval = oracle.evaluate(poly, x);
    const Vector h = random_direction(poly.dimension(), rng);
    const double local = ellipsoid_norm(eval, h);
    if (local == 0.0) continue;
    const Matrix deriv = oracle.derivative(poly, eval, h);
    const double ratio = whiten(eval, deriv).norm() / local;
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  report.pass = report.max_ratio <= report.allowed;
  return report;
}

SscReport check_strong_self_concordance(const Polytope& poly, MetricKind kind,
                                        int trials, Rng& rng) {
  return check_strong_self_concordance(poly, *make_metric_oracle(kind), trials,
                                       rng);
}

SandwichReport check_global_sandwich(const Polytope& poly,
                                     const MetricOracle& oracle, int pairs,
                                     Rng& rng) {
  SandwichReport report;
  report.metric = oracle.kind();
  report.pairs = pairs;
  report.eig_slack = oracle.kind() == MetricKind::LogBarrier ? 1e-8 : 1e-6;
  report.fro_slack = 1e-6;
  report.max_eig_excess = -std::numeric_limits<double>::infinity();
  report.max_fro_excess = -std::numeric_limits<double>::infinity();
  const auto points = random_interior_points(poly, pairs, rng);
  for (const Vector& x : points) {
    const MetricEvaluation eval_x = oracle.evaluate(poly, x);
    const Vector u = random_direction(poly.dimension(), rng);
    const double local = ellipsoid_norm(eval_x, u);
    if (local == 0.0) continue;
    const double t = 0.5 * uniform_open(rng);
    const Vector y = x + (t / local) * u;
    if (!poly.contains(y)) continue;  // cannot happen for t <= 1/2
    const MetricEvaluation eval_y = oracle.evaluate(poly, y, &eval_x);

    const Matrix relative = whiten(eval_x, eval_y.H);
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        0.5 * (relative + relative.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw FactorizationFailure("eigenvalue solve failed in sandwich check");
    }
    const double shrink = (1.0 - t) * (1.0 - t);
    const double eig_excess =
        std::max(shrink - es.eigenvalues().minCoeff(),
                 es.eigenvalues().maxCoeff() - 1.0 / shrink);
    report.max_eig_excess = std::max(report.max_eig_excess, eig_excess);
    if (eig_excess > report.eig_slack) ++report.eig_violations;

    // Integrating the derivative bound |H_x^{-1/2} DH(x_s)[y-x] H_x^{-1/2}|_F
    // <= 2t/(1-st)^3 over s in [0,1] gives (1-t)^{-2} - 1 = t(2-t)/(1-t)^2.
    // An interval barrier approached head-on attains it with equality, so no
    // smaller constant can hold globally.
    const double fro = whiten(eval_x, eval_y.H - eval_x.H).norm();
    const double fro_excess = fro - (1.0 / shrink - 1.0);
    report.max_fro_excess = std::max(report.max_fro_excess, fro_excess);
    if (fro_excess > report.fro_slack) ++report.fro_violations;
  }
  report.pass = report.eig_violations == 0 && report.fro_violations == 0;
  return report;
}

SandwichReport check_global_sandwich(const Polytope& poly, MetricKind kind,
                                     int pairs, Rng& rng) {
  return check_global_sandwich(poly, *make_metric_oracle(kind), pairs, rng);
}

ConvexityReport check_logdet_convexity(const Polytope& poly, MetricKind kind,
                                       int segments, Rng& rng, double tol) {
  ConvexityReport report;
  report.metric = kind;
  report.segments = segments;
  report.tol = tol;
  report.max_violation = -std::numeric_limits<double>::infinity();
  const auto oracle = make_metric_oracle(kind);
  const auto points = random_interior_points(poly, 2 * segments, rng);
  for (int k = 0; k + 1 < static_cast<int>(points.size()); k += 2) {
    const Vector& x = points[static_cast<std::size_t>(k)];
    const Vector& y = points[static_cast<std::size_t>(k + 1)];
    const double ld_x = oracle->evaluate(poly, x).logdet;
    const double ld_y = oracle->evaluate(poly, y).logdet;
    const double ld_mid = oracle->evaluate(poly, (x + y) / 2.0).logdet;
    const double violation = ld_mid - 0.5 * (ld_x + ld_y);
    report.max_violation = std::max(report.max_violation, violation);
    if (violation > tol) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

SymmetryReport estimate_symmetry(const Polytope& poly, MetricKind kind,
                                 int x_samples, int directions, Rng& rng) {
  SymmetryReport report;
  report.metric = kind;
  report.x_samples = x_samples;
  report.directions = directions;
  const double nu_log = static_cast<double>(poly.num_constraints());
  if (kind == MetricKind::LogBarrier) {
    report.nu_bar_bound = nu_log;
  } else {
    const double q = ls_exponent(poly.num_constraints());
    report.nu_bar_bound = std::numbers::e *
                          static_cast<double>(poly.dimension()) *
                          ls_scaling(q);
  }
  // closure membership up to rounding; the containment being certified is
  // non-strict, so boundary points get a tolerance proportional to the scale
  const double boundary_slack =
      kBoundaryTol * (poly.b().lpNorm<Eigen::Infinity>() + 1.0);

  const auto oracle = make_metric_oracle(kind);
  const auto points = random_interior_points(poly, x_samples, rng);
  for (const Vector& x : points) {
    const MetricEvaluation eval = oracle->evaluate(poly, x);
    for (int d = 0; d < directions; ++d) {
      // boundary point of the unit ellipsoid: x + L^{-T} g / |g|
      const Vector g = random_direction(poly.dimension(), rng);
      const Vector z =
          eval.chol.transpose().triangularView<Eigen::Upper>().solve(g);
      ++report.inner_checks;
      const bool in_body = poly.min_slack(x + z) >= -boundary_slack;
      const bool in_reflection = poly.min_slack(x - z) >= -boundary_slack;
      if (!in_body || !in_reflection) ++report.inner_violations;
    }
    for (int d = 0; d < directions; ++d) {
      const Vector u = random_direction(poly.dimension(), rng);
      const Chord chord = chord_through(poly, x, u);
      // the symmetrized body K cap (2x - K) ends at min(|t-|, t+) along u
      const double reach = std::min(-chord.t_minus, chord.t_plus);
      const double dist = ellipsoid_norm(eval, reach * u);
      report.nu_bar_emp = std::max(report.nu_bar_emp, dist * dist);
    }
  }
  report.pass = report.inner_violations == 0 &&
                report.nu_bar_emp <= report.nu_bar_bound;
  return report;
}

double kolmogorov_p(double stat, long n) {
  if (stat <= 0.0) return 1.0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * stat;
  if (lambda < 1.18) {
    // The alternating tail series loses all precision for small lambda; the
    // theta-transformed series for the CDF needs only three terms there.
    const double pi = std::numbers::pi;
    const double theta = std::exp(-pi * pi / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(2.0 * pi) / lambda *
                       (theta + std::pow(theta, 9.0) + std::pow(theta, 25.0));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi_square_p(double stat, long df) {
  if (df < 1) throw std::invalid_argument("chi-square needs df >= 1");
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
}

double box_halfspace_volume(const Vector& lo, const Vector& hi, double s) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != lo.size()) {
    throw DimensionMismatch("box corners must have matching dimensions");
  }
  if (n < 1 || n > 20) {
    throw std::invalid_argument("box volume supports 1 <= n <= 20");
  }
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double corner = s;
    for (int i = 0; i < n; ++i) {
      corner -= (mask & (1u << i)) ? hi[i] : lo[i];
    }
    if (corner <= 0.0) continue;
    const double term = std::pow(corner, n);
    sum += (std::popcount(mask) % 2 == 0) ? term : -term;
  }
  return std::max(0.0, sum / std::tgamma(static_cast<double>(n) + 1.0));
}

double effective_sample_size(const std::vector<double>& series) {
  const long n = static_cast<long>(series.size());
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  auto autocov = [&](long lag) {
    double c = 0.0;
    for (long i = 0; i + lag < n; ++i) {
      c += (series[static_cast<std::size_t>(i)] - mean) *
           (series[static_cast<std::size_t>(i + lag)] - mean);
    }
    return c / static_cast<double>(n);
  };

  const double c0 = autocov(0);
  // zero variance: a constant series carries one effective observation
  if (c0 <= 0.0) return 1.0;

  // Geyer initial positive sequence: sum paired autocovariances while the
  // pair sums stay positive.
  double sigma2 = -c0;
  for (long k = 0; 2 * k + 1 < n; ++k) {
    const double pair = autocov(2 * k) + autocov(2 * k + 1);
    if (pair <= 0.0) break;
    sigma2 += 2.0 * pair;
  }
  if (sigma2 <= 0.0) return static_cast<double>(n);
  const double ess = static_cast<double>(n) * c0 / sigma2;
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

namespace {

double cube_cdf(double t) { return std::clamp(t, 0.0, 1.0); }

}  // namespace

UniformityReport uniformity_tests(const std::vector<Vector>& samples,
                                  BodyKind body, int cells_per_axis) {
  if (samples.size() < 10) {
    throw std::invalid_argument("uniformity tests need at least 10 samples");
  }
  if (body == BodyKind::Unknown) {
    throw UnknownReference("no exact marginals known for this body");
  }
  const Index n = samples.front().size();
  const long count = static_cast<long>(samples.size());

  UniformityReport report;
  report.body = body;
  report.sample_count = count;

  auto marginal_cdf = [&](double t) {
    if (body == BodyKind::Cube) return cube_cdf(t);
    // coordinate of a uniform simplex point is Beta(1, n)
    const double c = std::clamp(t, 0.0, 1.0);
    return 1.0 - std::pow(1.0 - c, static_cast<double>(n));
  };

  report.ks_stat.resize(static_cast<std::size_t>(n));
  report.ks_p.resize(static_cast<std::size_t>(n));
  std::vector<double> coord(static_cast<std::size_t>(count));
  for (Index j = 0; j < n; ++j) {
    for (long i = 0; i < count; ++i) {
      coord[static_cast<std::size_t>(i)] =
          samples[static_cast<std::size_t>(i)][j];
    }
    std::sort(coord.begin(), coord.end());
    double d = 0.0;
    for (long i = 0; i < count; ++i) {
      const double f = marginal_cdf(coord[static_cast<std::size_t>(i)]);
      const double lo = static_cast<double>(i) / static_cast<double>(count);
      const double hi =
          static_cast<double>(i + 1) / static_cast<double>(count);
      d = std::max({d, f - lo, hi - f});
    }
    report.ks_stat[static_cast<std::size_t>(j)] = d;
    report.ks_p[static_cast<std::size_t>(j)] = kolmogorov_p(d, count);
  }
  report.ks_p_min =
      *std::min_element(report.ks_p.begin(), report.ks_p.end());

  int cells = cells_per_axis;
  if (cells <= 0) {
    cells = static_cast<int>(std::floor(std::pow(
        static_cast<double>(count) / 20.0, 1.0 / static_cast<double>(n))));
    cells = std::clamp(cells, 2, 8);
  }
  const double total_cells = std::pow(static_cast<double>(cells),
                                      static_cast<double>(n));
  if (n > 12 || total_cells > 1e6) {
    throw std::invalid_argument("chi-square grid is too fine for this dimension");
  }
  const long num_cells = static_cast<long>(std::llround(total_cells));

  std::vector<long> observed(static_cast<std::size_t>(num_cells), 0);
  for (const Vector& x : samples) {
    long idx = 0;
    for (Index j = 0; j < n; ++j) {
      int c = static_cast<int>(std::floor(x[j] * cells));
      c = std::clamp(c, 0, cells - 1);
      idx = idx * cells + c;
    }
    ++observed[static_cast<std::size_t>(idx)];
  }

  std::vector<double> expected(static_cast<std::size_t>(num_cells), 0.0);
  if (body == BodyKind::Cube) {
    std::fill(expected.begin(), expected.end(),
              static_cast<double>(count) / static_cast<double>(num_cells));
  } else {
    const double n_factorial = std::tgamma(static_cast<double>(n) + 1.0);
    Vector lo(n), hi(n);
    for (long cell = 0; cell < num_cells; ++cell) {
      long rest = cell;
      for (Index j = n - 1; j >= 0; --j) {
        const int c = static_cast<int>(rest % cells);
        rest /= cells;
        lo[j] = static_cast<double>(c) / cells;
        hi[j] = static_cast<double>(c + 1) / cells;
      }
      expected[static_cast<std::size_t>(cell)] =
          static_cast<double>(count) * n_factorial *
          box_halfspace_volume(lo, hi, 1.0);
    }
  }

  // Cochran-style pooling: every retained cell needs expected >= 20; the
  // leftovers merge into one bucket, or into the smallest retained cell when
  // even the bucket is too thin.
  constexpr double kMinExpected = 20.0;
  std::vector<std::pair<double, double>> retained;  // (observed, expected)
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (long cell = 0; cell < num_cells; ++cell) {
    const double e = expected[static_cast<std::size_t>(cell)];
    const double o =
        static_cast<double>(observed[static_cast<std::size_t>(cell)]);
    if (e >= kMinExpected) {
      retained.emplace_back(o, e);
    } else {
      pooled_obs += o;
      pooled_exp += e;
    }
  }
  if (pooled_exp >= kMinExpected) {
    retained.emplace_back(pooled_obs, pooled_exp);
  } else if (pooled_exp > 0.0 && !retained.empty()) {
    auto smallest = std::min_element(
        retained.begin(), retained.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    smallest->first += pooled_obs;
    smallest->second += pooled_exp;
  }
  if (retained.size() < 2) {
    throw std::invalid_argument("chi-square pooling left fewer than 2 cells");
  }
  double stat = 0.0;
  for (const auto& [o, e] : retained) {
    stat += (o - e) * (o - e) / e;
  }
  report.chi2_stat = stat;
  report.chi2_cells = static_cast<long>(retained.size());
  report.chi2_df = static_cast<long>(retained.size()) - 1;
  report.chi2_p = chi_square_p(stat, report.chi2_df);

  double min_ess = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    std::vector<double> series(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      series[static_cast<std::size_t>(i)] =
          samples[static_cast<std::size_t>(i)][j];
    }
    min_ess = std::min(min_ess, effective_sample_size(series));
  }
  report.ess = min_ess;

  report.pass = report.ks_p_min > report.ks_p_threshold &&
                report.chi2_p > report.chi2_p_threshold;
  return report;
}

AcceptanceSummary acceptance_statistics(const ChainTrace& trace,
                                        double threshold) {
  const auto& values = trace.per_step_filter_values;
  if (values.empty()) {
    throw std::invalid_argument("trace has no recorded filter values");
  }
  AcceptanceSummary summary;
  summary.steps = static_cast<long>(values.size());
  summary.threshold = threshold;
  summary.acceptance_rate = trace.acceptance_rate;
  summary.min_filter_value = std::numeric_limits<double>::infinity();
  long at_threshold = 0;
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    summary.min_filter_value = std::min(summary.min_filter_value, v);
    if (v >= threshold) ++at_threshold;
  }
  summary.mean_filter_value = sum / static_cast<double>(summary.steps);
  summary.frac_at_threshold =
      static_cast<double>(at_threshold) / static_cast<double>(summary.steps);
  return summary;
}

namespace {

nlohmann::json base_report(const char* check, const std::string& metric,
                           bool pass) {
  return nlohmann::json{{"check", check}, {"metric", metric}, {"pass", pass}};
}

}  // namespace

nlohmann::json report_json(const SscReport& r) {
  nlohmann::json j = base_report("strong_self_concordance",
                                 metric_name(r.metric), r.pass);
  j["params"] = {{"trials", r.trials}};
  j["measured"] = {{"max_ratio", r.max_ratio}};
  j["bound"] = {{"frobenius_ratio", r.bound}, {"allowed", r.allowed}};
  return j;
}

nlohmann::json report_json(const SandwichReport& r) {
  nlohmann::json j =
      base_report("global_sandwich", metric_name(r.metric), r.pass);
  j["params"] = {{"pairs", r.pairs},
                 {"eig_slack", r.eig_slack},
                 {"fro_slack", r.fro_slack}};
  j["measured"] = {{"eig_violations", r.eig_violations},
                   {"fro_violations", r.fro_violations},
                   {"max_eig_excess", r.max_eig_excess},
                   {"max_fro_excess", r.max_fro_excess}};
  j["bound"] = {{"eig_excess", r.eig_slack}, {"fro_excess", r.fro_slack}};
  return j;
}

nlohmann::json report_json(const ConvexityReport& r) {
  nlohmann::json j =
      base_report("logdet_midpoint_convexity", metric_name(r.metric), r.pass);
  j["params"] = {{"segments", r.segments}};
  j["measured"] = {{"violations", r.violations},
                   {"max_violation", r.max_violation}};
  j["bound"] = {{"tol", r.tol}};
  return j;
}

nlohmann::json report_json(const SymmetryReport& r) {
  nlohmann::json j =
      base_report("ellipsoid_symmetry", metric_name(r.metric), r.pass);
  j["params"] = {{"x_samples", r.x_samples}, {"directions", r.directions}};
  j["measured"] = {{"inner_checks", r.inner_checks},
                   {"inner_violations", r.inner_violations},
                   {"nu_bar_emp", r.nu_bar_emp}};
  j["bound"] = {{"inner_violations", 0}, {"nu_bar", r.nu_bar_bound}};
  return j;
}

nlohmann::json report_json(const UniformityReport& r) {
  const char* body = r.body == BodyKind::Cube      ? "cube"
                     : r.body == BodyKind::Simplex ? "simplex"
                                                   : "unknown";
  nlohmann::json j = base_report("uniformity", "n/a", r.pass);
  j["params"] = {{"body", body}, {"samples", r.sample_count}};
  j["measured"] = {{"ks_stat", r.ks_stat},   {"ks_p", r.ks_p},
                   {"ks_p_min", r.ks_p_min}, {"chi2_stat", r.chi2_stat},
                   {"chi2_df", r.chi2_df},   {"chi2_p", r.chi2_p},
                   {"chi2_cells", r.chi2_cells}, {"ess", r.ess}};
  j["bound"] = {{"ks_p_min", r.ks_p_threshold},
                {"chi2_p", r.chi2_p_threshold}};
  return j;
}

nlohmann::json report_json(const AcceptanceSummary& r, MetricKind metric) {
  nlohmann::json j = base_report("acceptance", metric_name(metric),
                                 r.mean_filter_value >= r.threshold);
  j["params"] = {{"steps", r.steps}};
  j["measured"] = {{"mean_filter_value", r.mean_filter_value},
                   {"min_filter_value", r.min_filter_value},
                   {"frac_at_threshold", r.frac_at_threshold},
                   {"acceptance_rate", r.acceptance_rate}};
  j["bound"] = {{"threshold", r.threshold}};
  return j;
}

}  // namespace dikin
