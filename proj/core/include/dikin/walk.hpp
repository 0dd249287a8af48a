#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dikin/barrier.hpp"
#include "dikin/polytope.hpp"
#include "dikin/rng.hpp"

namespace dikin {

/// How a proposal y ~ Uniform(E_x(r)) is accepted.
///  - ExactMetropolis: min{1, rho}, the classic filter.
///  - Smooth:          rho / (1 + rho), which keeps per-step acceptance
///                     bounded away from 0 and 1 and never needs the exact
///                     ratio, only an unbiased estimate.
/// In both cases rho = sqrt(det H(y) / det H(x)) * [x in E_y(r)]; the
/// indicator accounts for proposals whose reverse move is impossible.
enum class FilterKind { ExactMetropolis, Smooth };

/// Where the determinant ratio comes from: the Cholesky factors already in
/// hand, or the randomized estimator (opt-in, demonstrates that the smooth
/// filter works from noisy ratios).
enum class DetPath { Exact, Estimator };

struct WalkConfig {
  double radius = 1.0 / 512.0;
  MetricKind metric = MetricKind::LogBarrier;
  FilterKind filter = FilterKind::ExactMetropolis;
  DetPath det_path = DetPath::Exact;
  long steps = 1000;
  long burn_in = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  /// Stream index fed to rng_for_chain; chain k of a multi-chain run uses
  /// stream k so the chains never share randomness.
  std::uint64_t stream = 0;
  /// Reject proposals outside the polytope before evaluating the metric.
  /// Only turned off by tests that prove the ellipsoid E_x(1) never leaves
  /// the body anyway.
  bool membership_guard = true;
  /// Stay put with probability 1/2 before proposing (off by default).
  bool lazy = false;
  long estimator_draws = 64;  // DetPath::Estimator only

  void validate() const;  // throws std::invalid_argument
};

struct ChainCounters {
  long proposals = 0;
  long accepted = 0;
  long rejected_by_filter = 0;
  long rejected_outside = 0;  // membership guard hits
};

struct ChainState {
  Vector current;
  MetricEvaluation eval;
  Rng rng;
  ChainCounters counters;
};

struct StepRecord {
  bool proposed = false;  // false only for lazy stays
  bool accepted = false;
  double filter_value = 0.0;  // acceptance probability of this step
};

struct ChainTrace {
  std::vector<Vector> samples;  // post burn-in, thinned
  std::vector<double> per_step_filter_values;  // one per executed step
  ChainCounters counters;
  double acceptance_rate = 0.0;  // accepted / proposals
  long steps_executed = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Uniform draw from the ellipsoid {y : (y-x)^T H (y-x) <= r^2}:
/// x + r u^{1/n} L^{-T} g / |g|, g standard normal, u uniform.
Vector sample_in_ellipsoid(const MetricEvaluation& eval, double radius,
                           Rng& rng);

/// sqrt(det H_y / det H_x) from the stored log-determinants.
double acceptance_ratio(const MetricEvaluation& eval_x,
                        const MetricEvaluation& eval_y);

ChainState make_chain_state(const Polytope& poly, const Vector& x0,
                            const WalkConfig& config,
                            const MetricOracle& oracle);

/// One transition of the walk; mutates the state and reports what happened.
StepRecord dikin_step(ChainState& state, const Polytope& poly,
                      const WalkConfig& config, const MetricOracle& oracle);

/// Runs burn_in + steps * thin transitions from x0 and records every thin-th
/// post-burn-in point. Fully deterministic given config.seed.
ChainTrace run_chain(const Polytope& poly, const Vector& x0,
                     const WalkConfig& config);

/// Same, against a caller-supplied metric oracle.
ChainTrace run_chain(const Polytope& poly, const Vector& x0,
                     const WalkConfig& config, const MetricOracle& oracle);

}  // namespace dikin
