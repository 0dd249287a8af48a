#include <cmath>

#include "dikin/barrier.hpp"
#include "dikin/estimators.hpp"
#include "dikin/generators.hpp"
#include "dikin/walk.hpp"
#include "doctest.h"

using dikin::MetricEvaluation;
using dikin::MetricKind;
using dikin::Polytope;
using dikin::Vector;
using dikin::WalkConfig;

TEST_SUITE_BEGIN("walk");

TEST_CASE("ellipsoid draws stay inside and fill the ball uniformly") {
  const Polytope cube = dikin::make_cube(3);
  const Vector x = Vector::Constant(3, 0.5);
  const MetricEvaluation eval = dikin::log_barrier_hessian(cube, x);
  dikin::Rng rng(101);
  const double r = 0.7;
  constexpr int kDraws = 20000;
  double mean_radial = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const Vector y = dikin::sample_in_ellipsoid(eval, r, rng);
    const double norm = dikin::ellipsoid_norm(eval, y - x);
    CHECK(norm <= r * (1.0 + 1e-12));
    // (|y-x|_H / r)^n is uniform on [0,1] for a uniform ellipsoid draw
    mean_radial += std::pow(norm / r, 3.0);
  }
  CHECK(std::abs(mean_radial / kDraws - 0.5) < 0.01);
}

TEST_CASE("acceptance ratio equals the determinant square root") {
  const Polytope cube = dikin::make_cube(2);
  const MetricEvaluation ex =
      dikin::log_barrier_hessian(cube, Vector::Constant(2, 0.5));
  Vector y(2);
  y << 0.3, 0.6;
  const MetricEvaluation ey = dikin::log_barrier_hessian(cube, y);
  const double direct =
      std::sqrt(ey.H.determinant() / ex.H.determinant());
  CHECK(dikin::acceptance_ratio(ex, ey) ==
        doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("filters satisfy the flow symmetry behind detailed balance") {
  // flow(x->y) ~ sqrt(det Hx) * accept(rho with rho = sqrt(det Hy/det Hx));
  // swapping x and y must give the same flow for both filter types
  for (double logdet_x : {-3.0, 0.0, 2.5}) {
    for (double logdet_y : {-1.0, 0.4, 5.0}) {
      const double rho = std::exp(0.5 * (logdet_y - logdet_x));
      const double rho_rev = std::exp(0.5 * (logdet_x - logdet_y));
      const double sx = std::exp(0.5 * logdet_x);
      const double sy = std::exp(0.5 * logdet_y);
      const double exact_fwd = sx * std::min(1.0, rho);
      const double exact_rev = sy * std::min(1.0, rho_rev);
      CHECK(exact_fwd == doctest::Approx(exact_rev).epsilon(1e-12));
      const double smooth_fwd = sx * dikin::smooth_accept_from_estimate(rho);
      const double smooth_rev =
          sy * dikin::smooth_accept_from_estimate(rho_rev);
      CHECK(smooth_fwd == doctest::Approx(smooth_rev).epsilon(1e-12));
    }
  }
}

TEST_CASE("run_chain is deterministic and stays inside") {
  const auto gen = dikin::load_polytope_source("rand(3,6,3)");
  WalkConfig config;
  config.radius = 0.3;
  config.steps = 400;
  config.burn_in = 50;
  config.thin = 2;
  config.seed = 2024;
  const Vector x0 = dikin::analytic_center(gen.poly);
  const auto a = dikin::run_chain(gen.poly, x0, config);
  const auto b = dikin::run_chain(gen.poly, x0, config);
  REQUIRE(a.samples.size() == 400);
  CHECK(a.steps_executed == 50 + 400 * 2);
  CHECK(a.per_step_filter_values.size() == 850);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK((a.samples[i] - b.samples[i]).norm() == 0.0);
    CHECK(gen.poly.contains(a.samples[i]));
  }
  CHECK(a.acceptance_rate == b.acceptance_rate);
  CHECK(a.acceptance_rate > 0.1);
  CHECK(a.counters.proposals == 850);
  CHECK(a.counters.accepted + a.counters.rejected_by_filter +
            a.counters.rejected_outside ==
        850);
}

TEST_CASE("streams decorrelate chains") {
  const Polytope cube = dikin::make_cube(2);
  WalkConfig config;
  config.radius = 0.5;
  config.steps = 50;
  config.seed = 7;
  const Vector x0 = Vector::Constant(2, 0.5);
  const auto s0 = dikin::run_chain(cube, x0, config);
  config.stream = 1;
  const auto s1 = dikin::run_chain(cube, x0, config);
  CHECK((s0.samples.back() - s1.samples.back()).norm() > 0.0);
  CHECK(s1.stream == 1);
}

TEST_CASE("zero recorded steps still yields valid stats") {
  const Polytope cube = dikin::make_cube(2);
  WalkConfig config;
  config.steps = 0;
  config.burn_in = 25;
  config.seed = 1;
  const auto trace =
      dikin::run_chain(cube, Vector::Constant(2, 0.5), config);
  CHECK(trace.samples.empty());
  CHECK(trace.steps_executed == 25);
  CHECK(trace.counters.proposals == 25);
  CHECK(trace.acceptance_rate >= 0.0);
}

TEST_CASE("filter values are probabilities and mostly high at tiny radius") {
  const Polytope cube = dikin::make_cube(3);
  WalkConfig config;
  config.radius = 1.0 / 512.0;
  config.steps = 500;
  config.seed = 5;
  const auto trace =
      dikin::run_chain(cube, Vector::Constant(3, 0.5), config);
  double mn = 1.0;
  for (double v : trace.per_step_filter_values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    mn = std::min(mn, v);
  }
  CHECK(trace.acceptance_rate > 0.95);
  CHECK(mn > 0.9);
}

TEST_CASE("smooth filter accepts roughly half at tiny radius") {
  const Polytope cube = dikin::make_cube(3);
  WalkConfig config;
  config.radius = 1.0 / 512.0;
  config.filter = dikin::FilterKind::Smooth;
  config.steps = 2000;
  config.seed = 9;
  const auto trace =
      dikin::run_chain(cube, Vector::Constant(3, 0.5), config);
  CHECK(trace.acceptance_rate > 0.45);
  CHECK(trace.acceptance_rate < 0.55);
}

TEST_CASE("estimator determinant path runs deterministically") {
  const Polytope cube = dikin::make_cube(2);
  WalkConfig config;
  config.radius = 1.0 / 128.0;
  config.filter = dikin::FilterKind::Smooth;
  config.det_path = dikin::DetPath::Estimator;
  config.estimator_draws = 16;
  config.steps = 100;
  config.seed = 12;
  const Vector x0 = Vector::Constant(2, 0.5);
  const auto a = dikin::run_chain(cube, x0, config);
  const auto b = dikin::run_chain(cube, x0, config);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK((a.samples[i] - b.samples[i]).norm() == 0.0);
    CHECK(cube.contains(a.samples[i]));
  }
  CHECK(a.acceptance_rate > 0.3);
}

TEST_CASE("lazy chains execute every step but propose on roughly half") {
  const Polytope cube = dikin::make_cube(2);
  WalkConfig config;
  config.radius = 0.25;
  config.steps = 2000;
  config.seed = 3;
  config.lazy = true;
  const auto trace =
      dikin::run_chain(cube, Vector::Constant(2, 0.5), config);
  CHECK(trace.steps_executed == 2000);
  CHECK(trace.counters.proposals > 800);
  CHECK(trace.counters.proposals < 1200);
  CHECK(trace.per_step_filter_values.size() ==
        static_cast<std::size_t>(trace.counters.proposals));
}

TEST_CASE("weighted metric chain mixes as well") {
  const Polytope cube = dikin::make_cube(2);
  WalkConfig config;
  config.metric = MetricKind::LsMatrix;
  config.radius = 1.0 / 64.0;
  config.steps = 300;
  config.seed = 21;
  const auto trace =
      dikin::run_chain(cube, Vector::Constant(2, 0.5), config);
  CHECK(trace.acceptance_rate > 0.9);
  for (const auto& s : trace.samples) CHECK(cube.contains(s));
}

TEST_CASE("config validation") {
  WalkConfig config;
  config.radius = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.radius = 0.1;
  config.thin = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.thin = 1;
  config.steps = -1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_SUITE_END();
