#pragma once

#include <functional>
#include <vector>

#include "dikin/polytope.hpp"
#include "dikin/rng.hpp"

namespace dikin {

/// Inputs for the one-shot log-determinant estimator. With H(t) =
/// A^T (I + t(W - I)) A interpolating from A^T A to A^T W A,
///   Y = v^T H(t)^{-1} A^T (W - I) A v + log det A^T A,
/// v standard normal, t uniform on [0,1], satisfies E[Y] = log det A^T W A.
struct LogDetEstimatorSpec {
  Matrix A;            // m x n, full column rank
  Vector W;            // positive diagonal entries
  double base_logdet;  // log det A^T A

  /// Validates shapes and positivity and computes base_logdet.
  static LogDetEstimatorSpec create(Matrix A, Vector W);
};

/// One draw of Y. Throws FactorizationFailure if H(t) is not positive
/// definite (possible only if some W entries are nonpositive).
double logdet_sample(const LogDetEstimatorSpec& spec, Rng& rng);

/// One unbiased determinant draw built from a log-estimator: with
/// i ~ Poisson(1) and Y_1..Y_i independent draws,
///   X = e * prod_j Y_j  satisfies  E[X] = exp(E[Y])
/// whenever the Y_j are unbiased for log of the target.
struct DetEstimatorDraw {
  int index = 0;                 // the Poisson draw i
  std::vector<double> factors;   // the Y_j actually consumed
  double value = 0.0;            // e * product of factors
};

DetEstimatorDraw det_from_log_sample(const std::function<double(Rng&)>& log_sampler,
                                     Rng& rng);

/// Averaged estimate of sqrt(det H_log(y) / det H_log(x)) for the
/// log-barrier metric, the quantity the walk's filter needs. Each factor
/// halves the log draw, so the product targets the square root directly.
struct DetRatioEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double pilot_cv = 0.0;   // sd/|mean| over the pilot draws
  bool high_variance = false;  // pilot_cv > 10
  long draws = 0;
};

/// Pilot size used for the coefficient-of-variation screen.
inline constexpr long kDetRatioPilot = 100;
inline constexpr double kDetRatioCvLimit = 10.0;

DetRatioEstimate det_ratio_estimate(const Polytope& poly, const Vector& x,
                                    const Vector& y, long n_draws, Rng& rng);

/// Smooth filter acceptance probability rho / (1 + rho), clamped to [0,1].
/// Negative estimates clamp to 0, +inf maps to 1.
double smooth_accept_from_estimate(double rho);

}  // namespace dikin
