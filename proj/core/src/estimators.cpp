#include "dikin/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dikin {

LogDetEstimatorSpec LogDetEstimatorSpec::create(Matrix A, Vector W) {
  if (A.rows() != W.size()) {
    throw DimensionMismatch("W must have one entry per row of A");
  }
  if (A.cols() < 1 || A.rows() < A.cols()) {
    throw DimensionMismatch("A must be m x n with m >= n >= 1");
  }
  if (W.minCoeff() <= 0.0) {
    throw std::invalid_argument("W entries must be positive");
  }
  Eigen::LLT<Matrix> llt(A.transpose() * A);
  if (llt.info() != Eigen::Success) {
    throw RankDeficient("A^T A is singular; A needs full column rank");
  }
  LogDetEstimatorSpec spec{std::move(A), std::move(W), 0.0};
  spec.base_logdet =
      2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
  return spec;
}

double logdet_sample(const LogDetEstimatorSpec& spec, Rng& rng) {
  const Index n = spec.A.cols();
  const double t = uniform_double(rng);
  // H(t) = A^T (I + t(W - I)) A; diagonal entries 1 - t + t W_i stay positive
  const Vector d = (1.0 - t) + t * spec.W.array();
  const Matrix scaled = d.array().sqrt().matrix().asDiagonal() * spec.A;
  Eigen::LLT<Matrix> llt(scaled.transpose() * scaled);
  if (llt.info() != Eigen::Success) {
    throw FactorizationFailure("interpolated Gram matrix is not positive definite");
  }
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  const Vector k =
      spec.A.transpose() *
      ((spec.W.array() - 1.0) * (spec.A * v).array()).matrix();
  return v.dot(llt.solve(k)) + spec.base_logdet;
}

DetEstimatorDraw det_from_log_sample(
    const std::function<double(Rng&)>& log_sampler, Rng& rng) {
  DetEstimatorDraw draw;
  draw.index = poisson_unit(rng);
  draw.value = std::numbers::e;
  draw.factors.reserve(static_cast<std::size_t>(draw.index));
  for (int j = 0; j < draw.index; ++j) {
    const double y = log_sampler(rng);
    draw.factors.push_back(y);
    draw.value *= y;
  }
  return draw;
}

DetRatioEstimate det_ratio_estimate(const Polytope& poly, const Vector& x,
                                    const Vector& y, long n_draws, Rng& rng) {
  poly.require_interior(x);
  poly.require_interior(y);
  const Vector sx = poly.slacks(x);
  const Vector sy = poly.slacks(y);
  // Base Gram matrix H(x) = A^T Sx^{-2} A; reweighting rows by (sx/sy)^2
  // turns it into H(y), so the log draws target log det H(y) - log det H(x).
  const LogDetEstimatorSpec spec = LogDetEstimatorSpec::create(
      sx.cwiseInverse().asDiagonal() * poly.A(),
      (sx.array() / sy.array()).square().matrix());
  const auto half_log = [&spec](Rng& r) {
    return 0.5 * (logdet_sample(spec, r) - spec.base_logdet);
  };

  const long total = std::max<long>(1, n_draws);
  DetRatioEstimate result;
  result.draws = total;
  double sum = 0.0, sum_sq = 0.0;
  double pilot_sum = 0.0, pilot_sum_sq = 0.0;
  const long pilot = std::min(kDetRatioPilot, total);
  for (long j = 0; j < total; ++j) {
    const double value = det_from_log_sample(half_log, rng).value;
    sum += value;
    sum_sq += value * value;
    if (j < pilot) {
      pilot_sum += value;
      pilot_sum_sq += value * value;
    }
  }
  const double mean = sum / static_cast<double>(total);
  result.estimate = mean;
  if (total > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(total - 1));
    result.std_error = std::sqrt(var / static_cast<double>(total));
  }
  const double pilot_mean = pilot_sum / static_cast<double>(pilot);
  double pilot_sd = 0.0;
  if (pilot > 1) {
    pilot_sd = std::sqrt(std::max(
        0.0, (pilot_sum_sq - pilot_sum * pilot_mean) / static_cast<double>(pilot - 1)));
  }
  if (pilot_sd == 0.0) {
    result.pilot_cv = 0.0;
  } else if (pilot_mean == 0.0) {
    result.pilot_cv = std::numeric_limits<double>::infinity();
  } else {
    result.pilot_cv = pilot_sd / std::abs(pilot_mean);
  }
  result.high_variance = result.pilot_cv > kDetRatioCvLimit;
  return result;
}

double smooth_accept_from_estimate(double rho) {
  if (std::isnan(rho) || rho <= 0.0) return 0.0;
  if (std::isinf(rho)) return 1.0;
  return std::clamp(rho / (1.0 + rho), 0.0, 1.0);
}

}  // namespace dikin
