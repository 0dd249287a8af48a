#pragma once

#include <memory>
#include <vector>

#include "dikin/polytope.hpp"

namespace dikin {

/// Which local metric the walk uses.
///  - LogBarrier: H(x) = A^T S^{-2} A, the Hessian of -sum log slacks.
///  - LsMatrix:   H(x) = c_q A^T S^{-1} W^{1-2/q} S^{-1} A with the
///                self-consistent weights w = sigma(w), q = 2(1 + log m),
///                c_q = (1 + q^2)(1 + q). Same sampling interface, but its
///                symmetry parameter scales with n polylog(m) instead of m.
enum class MetricKind { LogBarrier, LsMatrix };

const char* metric_name(MetricKind kind);

/// Exponent parameter q = 2(1 + log m) of the weighted metric.
double ls_exponent(Index m);

/// Scaling constant c_q = (1 + q^2)(1 + q).
double ls_scaling(double q);

/// Everything the walk needs about the metric at one point. `chol` is the
/// lower Cholesky factor of H; `logdet` equals 2 * sum(log diag(chol)).
struct MetricEvaluation {
  MetricKind kind = MetricKind::LogBarrier;
  Vector x;
  Vector slacks;
  Vector weights;  // all-ones for the log barrier
  Matrix H;
  Matrix chol;
  double logdet = 0.0;
  double q = 0.0;             // LsMatrix only
  int weight_iterations = 0;  // LsMatrix only
};

/// Fixed-point iteration state for the metric weights.
struct LsWeightState {
  Vector w;
  Vector sigma;          // leverage scores at the final w
  double residual = 0.0; // max|w - sigma(w)| at exit
  int iterations = 0;
  std::vector<double> sigma_sums;  // sum(sigma) recorded at every iteration
};

/// Convergence threshold on max|w - sigma(w)|.
inline constexpr double kWeightTol = 1e-10;
inline constexpr int kWeightMaxIters = 500;
/// Weights are clamped below at this floor to keep W^{1-2/q} finite.
inline constexpr double kWeightFloor = 1e-12;
/// Fallback acceptance threshold when the iteration stalls at the
/// floating-point noise floor of the leverage scores (ill-conditioned points
/// near a vertex) without reaching kWeightTol.
inline constexpr double kWeightStallTol = 1e-8;
/// Number of non-improving iterations that counts as a stall.
inline constexpr int kWeightStallWindow = 30;

/// Relative step scale for finite-difference metric derivatives.
inline constexpr double kFdScale = 1e-5;

MetricEvaluation log_barrier_hessian(const Polytope& poly, const Vector& x);

/// Damped multiplicative fixed-point iteration w <- sqrt(w * sigma(w)),
/// started from (n/m) * ones or from `warm` when given. Returns early with
/// the best iterate if the residual stalls below kWeightStallTol; throws
/// NoConvergence if it is still above that after kWeightMaxIters rounds.
LsWeightState ls_weights(const Polytope& poly, const Vector& x,
                         const Vector* warm = nullptr);

MetricEvaluation ls_matrix(const Polytope& poly, const Vector& x,
                           const Vector* warm = nullptr);

/// Directional derivative DH(x)[h]. Analytic for the log barrier,
///   DH[h] = -2 A^T diag((A h) / s^3) A;
/// symmetrized central finite difference for the weighted metric, with step
/// kFdScale * min_slack / max|A h|. Throws StepOutOfDomain if the probe
/// points x +- delta h leave the interior.
Matrix hessian_directional_derivative(const Polytope& poly,
                                      const MetricEvaluation& eval,
                                      const Vector& h);

inline double logdet_metric(const MetricEvaluation& eval) { return eval.logdet; }

/// Local norm |v|_x = sqrt(v^T H(x) v), evaluated through the Cholesky
/// factor as |L^T v|_2.
double ellipsoid_norm(const MetricEvaluation& eval, const Vector& v);

/// Congruence transform L^{-1} M L^{-T}. For symmetric M this has the same
/// eigenvalues and Frobenius norm as H^{-1/2} M H^{-1/2}.
Matrix whiten(const MetricEvaluation& eval, const Matrix& M);

/// Metric evaluation behind a virtual interface so the walk and the
/// diagnostics can run against either barrier, and tests can substitute
/// deliberately broken metrics.
class MetricOracle {
 public:
  virtual ~MetricOracle() = default;
  virtual MetricKind kind() const = 0;
  /// `prev` optionally carries the evaluation at a nearby point; the
  /// weighted metric warm-starts its fixed point from prev->weights.
  virtual MetricEvaluation evaluate(const Polytope& poly, const Vector& x,
                                    const MetricEvaluation* prev = nullptr) const = 0;
  virtual Matrix derivative(const Polytope& poly, const MetricEvaluation& eval,
                            const Vector& h) const = 0;
};

std::unique_ptr<MetricOracle> make_metric_oracle(MetricKind kind);

/// Decorator that scales the directional derivative by a constant factor.
/// Only useful for verifying that the self-concordance checks actually look
/// at the derivative: factor 3 must make them fail.
class ScaledDerivativeOracle : public MetricOracle {
 public:
  ScaledDerivativeOracle(std::unique_ptr<MetricOracle> inner, double factor)
      : inner_(std::move(inner)), factor_(factor) {}
  MetricKind kind() const override { return inner_->kind(); }
  MetricEvaluation evaluate(const Polytope& poly, const Vector& x,
                            const MetricEvaluation* prev = nullptr) const override {
    return inner_->evaluate(poly, x, prev);
  }
  Matrix derivative(const Polytope& poly, const MetricEvaluation& eval,
                    const Vector& h) const override {
    return factor_ * inner_->derivative(poly, eval, h);
  }

 private:
  std::unique_ptr<MetricOracle> inner_;
  double factor_;
};

}  // namespace dikin
