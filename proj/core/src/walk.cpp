#include "dikin/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "dikin/estimators.hpp"

namespace dikin {

void WalkConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("walk radius must be positive and finite");
  }
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (det_path == DetPath::Estimator && estimator_draws < 1) {
    throw std::invalid_argument("estimator_draws must be >= 1");
  }
}

Vector sample_in_ellipsoid(const MetricEvaluation& eval, double radius,
                           Rng& rng) {
  const Index n = eval.x.size();
  Vector g(n);
  double norm = 0.0;
  do {
    for (Index i = 0; i < n; ++i) g[i] = standard_normal(rng);
    norm = g.norm();
  } while (norm == 0.0);
  const double scale =
      radius * std::pow(uniform_open(rng), 1.0 / static_cast<double>(n)) / norm;
  // L^{-T} maps the unit ball of |.|_2 onto the unit ball of |.|_H
  const Vector dir =
      eval.chol.transpose().triangularView<Eigen::Upper>().solve(g);
  return eval.x + scale * dir;
}

double acceptance_ratio(const MetricEvaluation& eval_x,
                        const MetricEvaluation& eval_y) {
  return std::exp(0.5 * (eval_y.logdet - eval_x.logdet));
}

ChainState make_chain_state(const Polytope& poly, const Vector& x0,
                            const WalkConfig& config,
                            const MetricOracle& oracle) {
  poly.require_interior(x0);
  ChainState state;
  state.current = x0;
  state.eval = oracle.evaluate(poly, x0);
  state.rng = rng_for_chain(config.seed, config.stream);
  return state;
}

StepRecord dikin_step(ChainState& state, const Polytope& poly,
                      const WalkConfig& config, const MetricOracle& oracle) {
  StepRecord rec;
  if (config.lazy && uniform_double(state.rng) < 0.5) {
    return rec;  // lazy stay, no proposal drawn
  }
  rec.proposed = true;
  const Vector y = sample_in_ellipsoid(state.eval, config.radius, state.rng);
  ++state.counters.proposals;

  if (config.membership_guard && !poly.contains(y)) {
    ++state.counters.rejected_outside;
    rec.filter_value = 0.0;
    return rec;
  }

  MetricEvaluation eval_y = oracle.evaluate(poly, y, &state.eval);
  // The proposal density toward x is zero unless x lies in y's ellipsoid,
  // so the ratio carries that indicator.
  const bool reverse_reachable =
      ellipsoid_norm(eval_y, state.current - y) <= config.radius;

  double p_accept = 0.0;
  if (reverse_reachable) {
    double rho = 0.0;
    if (config.det_path == DetPath::Exact) {
      rho = acceptance_ratio(state.eval, eval_y);
    } else {
      const DetRatioEstimate est = det_ratio_estimate(
          poly, state.current, y, config.estimator_draws, state.rng);
      rho = std::max(0.0, est.estimate);
    }
    p_accept = config.filter == FilterKind::ExactMetropolis
                   ? std::min(1.0, rho)
                   : smooth_accept_from_estimate(rho);
  }

  rec.filter_value = p_accept;
  if (uniform_double(state.rng) < p_accept) {
    state.current = y;
    state.eval = std::move(eval_y);
    ++state.counters.accepted;
    rec.accepted = true;
  } else {
    ++state.counters.rejected_by_filter;
  }
  return rec;
}

ChainTrace run_chain(const Polytope& poly, const Vector& x0,
                     const WalkConfig& config, const MetricOracle& oracle) {
  config.validate();
  ChainState state = make_chain_state(poly, x0, config, oracle);

  ChainTrace trace;
  trace.seed = config.seed;
  trace.stream = config.stream;
  trace.samples.reserve(static_cast<std::size_t>(config.steps));
  trace.per_step_filter_values.reserve(
      static_cast<std::size_t>(config.burn_in + config.steps * config.thin));

  auto advance = [&] {
    const StepRecord rec = dikin_step(state, poly, config, oracle);
    ++trace.steps_executed;
    if (rec.proposed) trace.per_step_filter_values.push_back(rec.filter_value);
  };

  for (long i = 0; i < config.burn_in; ++i) advance();
  for (long k = 0; k < config.steps; ++k) {
    for (long j = 0; j < config.thin; ++j) advance();
    trace.samples.push_back(state.current);
  }

  trace.counters = state.counters;
  trace.acceptance_rate =
      state.counters.proposals > 0
          ? static_cast<double>(state.counters.accepted) /
                static_cast<double>(state.counters.proposals)
          : 0.0;
  return trace;
}

ChainTrace run_chain(const Polytope& poly, const Vector& x0,
                     const WalkConfig& config) {
  return run_chain(poly, x0, config, *make_metric_oracle(config.metric));
}

}  // namespace dikin
