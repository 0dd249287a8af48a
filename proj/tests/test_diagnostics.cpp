#include <cmath>
#include <set>
#include <vector>

#include "dikin/diagnostics.hpp"
#include "doctest.h"

using dikin::BodyKind;
using dikin::MetricKind;
using dikin::Polytope;
using dikin::Vector;

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("chi-square tail matches table values") {
  // classic textbook quantiles
  CHECK(dikin::chi_square_p(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(dikin::chi_square_p(5.991, 2) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(dikin::chi_square_p(6.635, 1) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(dikin::chi_square_p(16.919, 9) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(dikin::chi_square_p(0.0, 4) == 1.0);
  CHECK_THROWS_AS(dikin::chi_square_p(1.0, 0), std::invalid_argument);
}

TEST_CASE("KS p-value is monotone with sane extremes") {
  CHECK(dikin::kolmogorov_p(0.001, 100) > 0.999);
  CHECK(dikin::kolmogorov_p(0.5, 100) < 1e-10);
  double prev = 1.0;
  for (double d = 0.01; d < 0.3; d += 0.01) {
    const double p = dikin::kolmogorov_p(d, 500);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("KS p-values are roughly uniform under the null") {
  dikin::Rng rng(307);
  int below_10 = 0, below_50 = 0;
  constexpr int kReps = 200;
  for (int rep = 0; rep < kReps; ++rep) {
    std::vector<double> u(400);
    for (auto& v : u) v = dikin::uniform_double(rng);
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (int i = 0; i < 400; ++i) {
      d = std::max({d, u[i] - i / 400.0, (i + 1) / 400.0 - u[i]});
    }
    const double p = dikin::kolmogorov_p(d, 400);
    if (p < 0.1) ++below_10;
    if (p < 0.5) ++below_50;
  }
  CHECK(below_10 > 5);
  CHECK(below_10 < 45);
  CHECK(below_50 > 60);
  CHECK(below_50 < 140);
}

TEST_CASE("box-halfspace volume on hand cases") {
  Vector lo(2), hi(2);
  lo << 0, 0;
  hi << 1, 1;
  CHECK(dikin::box_halfspace_volume(lo, hi, 2.5) == doctest::Approx(1.0));
  CHECK(dikin::box_halfspace_volume(lo, hi, 1.0) == doctest::Approx(0.5));
  CHECK(dikin::box_halfspace_volume(lo, hi, -0.5) == 0.0);
  lo << 0.5, 0.0;
  hi << 1.0, 0.5;
  CHECK(dikin::box_halfspace_volume(lo, hi, 1.0) ==
        doctest::Approx(0.125).epsilon(1e-12));
  Vector lo3(3), hi3(3);
  lo3 << 0, 0, 0;
  hi3 << 1, 1, 1;
  CHECK(dikin::box_halfspace_volume(lo3, hi3, 1.0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("box-halfspace volume agrees with Monte Carlo") {
  Vector lo(3), hi(3);
  lo << 0.0, 0.1, 0.2;
  hi << 0.7, 0.9, 1.0;
  const double s = 1.3;
  const double exact = dikin::box_halfspace_volume(lo, hi, s);
  dikin::Rng rng(311);
  constexpr int kPoints = 400000;
  int hits = 0;
  for (int i = 0; i < kPoints; ++i) {
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      sum += lo[k] + (hi[k] - lo[k]) * dikin::uniform_double(rng);
    }
    if (sum <= s) ++hits;
  }
  const double box_vol = (hi - lo).prod();
  const double mc = box_vol * hits / double(kPoints);
  const double se = box_vol * 0.5 / std::sqrt(double(kPoints));
  CHECK(std::abs(mc - exact) < 4.0 * se + 1e-4);
}

TEST_CASE("effective sample size: iid versus autocorrelated") {
  dikin::Rng rng(313);
  constexpr int kLen = 5000;
  std::vector<double> iid(kLen), ar(kLen);
  double state = 0.0;
  const double phi = 0.9;
  for (int i = 0; i < kLen; ++i) {
    iid[i] = dikin::standard_normal(rng);
    state = phi * state +
            std::sqrt(1.0 - phi * phi) * dikin::standard_normal(rng);
    ar[i] = state;
  }
  const double ess_iid = dikin::effective_sample_size(iid);
  CHECK(ess_iid > 0.6 * kLen);
  // AR(1) with phi = 0.9 has asymptotic ESS factor (1-phi)/(1+phi) = 1/19
  const double ess_ar = dikin::effective_sample_size(ar);
  CHECK(ess_ar < kLen / 6.0);
  CHECK(ess_ar > kLen / 60.0);
  // a constant series carries one effective observation
  const std::vector<double> flat(50, 1.25);
  CHECK(dikin::effective_sample_size(flat) == doctest::Approx(1.0));
}

namespace {

std::vector<Vector> uniform_cube_samples(int n, int count, dikin::Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    for (int k = 0; k < n; ++k) x[k] = dikin::uniform_double(rng);
    out.push_back(x);
  }
  return out;
}

// exponential spacings give an exactly uniform simplex point
std::vector<Vector> uniform_simplex_samples(int n, int count, dikin::Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vector e(n + 1);
    for (int k = 0; k <= n; ++k) e[k] = -std::log(dikin::uniform_open(rng));
    out.push_back(e.head(n) / e.sum());
  }
  return out;
}

}  // namespace

TEST_CASE("uniformity tests pass on exact samplers and fail on biased ones") {
  dikin::Rng rng(317);
  const auto cube_ok = dikin::uniformity_tests(
      uniform_cube_samples(3, 8000, rng), BodyKind::Cube);
  CHECK(cube_ok.pass);
  CHECK(cube_ok.ks_p_min > 0.01);
  CHECK(cube_ok.chi2_p > 1e-3);
  CHECK(cube_ok.ess > 1000.0);

  auto biased = uniform_cube_samples(3, 8000, rng);
  for (auto& x : biased) x = x.array().square().matrix();
  const auto cube_bad = dikin::uniformity_tests(biased, BodyKind::Cube);
  CHECK_FALSE(cube_bad.pass);

  const auto simplex_ok = dikin::uniformity_tests(
      uniform_simplex_samples(3, 8000, rng), BodyKind::Simplex);
  CHECK(simplex_ok.pass);

  const auto mismatched = dikin::uniformity_tests(
      uniform_cube_samples(3, 8000, rng), BodyKind::Simplex);
  CHECK_FALSE(mismatched.pass);

  CHECK_THROWS_AS(dikin::uniformity_tests(uniform_cube_samples(2, 100, rng),
                                          BodyKind::Unknown),
                  dikin::UnknownReference);
}

TEST_CASE("random interior points are interior and spread out") {
  const Polytope poly = dikin::make_random_polytope(3, 8, 41);
  dikin::Rng rng(331);
  const auto points = dikin::random_interior_points(poly, 40, rng);
  REQUIRE(points.size() == 40);
  std::set<double> first_coords;
  for (const auto& x : points) {
    CHECK(poly.contains(x));
    first_coords.insert(x[0]);
  }
  CHECK(first_coords.size() > 35);
}

TEST_CASE("acceptance statistics on synthetic traces") {
  dikin::ChainTrace trace;
  trace.per_step_filter_values = {1.0, 1.0, 0.0, 1.0};
  trace.acceptance_rate = 0.75;
  const auto summary = dikin::acceptance_statistics(trace, 0.9922);
  CHECK(summary.steps == 4);
  CHECK(summary.mean_filter_value == doctest::Approx(0.75));
  CHECK(summary.frac_at_threshold == doctest::Approx(0.75));
  CHECK(summary.min_filter_value == 0.0);

  dikin::ChainTrace rejected;
  rejected.per_step_filter_values.assign(100, 0.0);
  CHECK(dikin::acceptance_statistics(rejected, 0.5).mean_filter_value == 0.0);

  dikin::ChainTrace empty;
  CHECK_THROWS_AS(dikin::acceptance_statistics(empty, 0.5),
                  std::invalid_argument);
}

TEST_CASE("symmetry scan on the square with the log barrier") {
  const Polytope cube = dikin::make_cube(2);
  dikin::Rng rng(337);
  const auto report =
      dikin::estimate_symmetry(cube, MetricKind::LogBarrier, 20, 100, rng);
  CHECK(report.inner_violations == 0);
  CHECK(report.inner_checks == 2000);
  CHECK(report.nu_bar_bound == 4.0);  // m
  CHECK(report.nu_bar_emp <= 4.0 + 1e-9);
  CHECK(report.nu_bar_emp > 1.5);
  CHECK(report.pass);
}

TEST_CASE("symmetry scan with the weighted metric respects its bound") {
  const Polytope cube = dikin::make_cube(3);
  dikin::Rng rng(347);
  const auto report =
      dikin::estimate_symmetry(cube, MetricKind::LsMatrix, 10, 100, rng);
  CHECK(report.inner_violations == 0);
  CHECK(report.nu_bar_emp <= report.nu_bar_bound);
  CHECK(report.pass);
}

TEST_CASE("log-det midpoint convexity holds for both metrics") {
  const Polytope poly = dikin::make_random_polytope(3, 6, 43);
  dikin::Rng rng(349);
  for (MetricKind kind : {MetricKind::LogBarrier, MetricKind::LsMatrix}) {
    const auto report = dikin::check_logdet_convexity(poly, kind, 40, rng);
    CHECK(report.violations == 0);
    CHECK(report.max_violation <= 1e-9);
    CHECK(report.pass);
  }
}

TEST_CASE("sandwich check passes on a small corpus") {
  dikin::Rng rng(353);
  const Polytope cube = dikin::make_cube(3);
  for (MetricKind kind : {MetricKind::LogBarrier, MetricKind::LsMatrix}) {
    const auto report = dikin::check_global_sandwich(cube, kind, 40, rng);
    CHECK(report.eig_violations == 0);
    CHECK(report.fro_violations == 0);
    CHECK(report.pass);
  }
}

TEST_CASE("self-concordance check passes and catches a scaled derivative") {
  dikin::Rng rng(359);
  const Polytope cube = dikin::make_cube(3);
  const auto honest = dikin::check_strong_self_concordance(
      cube, MetricKind::LogBarrier, 50, rng);
  CHECK(honest.pass);
  CHECK(honest.max_ratio <= 2.0 + 1e-6);
  CHECK(honest.max_ratio > 0.5);

  dikin::ScaledDerivativeOracle corrupted(
      dikin::make_metric_oracle(MetricKind::LogBarrier), 3.0);
  const auto caught =
      dikin::check_strong_self_concordance(cube, corrupted, 50, rng);
  CHECK_FALSE(caught.pass);
  CHECK(caught.max_ratio > 2.5);
}

TEST_CASE("report serialization carries the shared schema") {
  dikin::Rng rng(367);
  const Polytope cube = dikin::make_cube(2);
  const auto ssc = dikin::check_strong_self_concordance(
      cube, MetricKind::LogBarrier, 5, rng);
  for (const auto& j :
       {dikin::report_json(ssc),
        dikin::report_json(dikin::check_global_sandwich(
            cube, MetricKind::LogBarrier, 5, rng)),
        dikin::report_json(dikin::check_logdet_convexity(
            cube, MetricKind::LogBarrier, 5, rng)),
        dikin::report_json(dikin::estimate_symmetry(
            cube, MetricKind::LogBarrier, 3, 10, rng))}) {
    for (const char* key :
         {"check", "metric", "params", "measured", "bound", "pass"}) {
      CHECK(j.contains(key));
    }
  }
}

TEST_SUITE_END();
