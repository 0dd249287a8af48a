#include "dikin/barrier.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace dikin {

const char* metric_name(MetricKind kind) {
  return kind == MetricKind::LogBarrier ? "log" : "ls";
}

double ls_exponent(Index m) {
  return 2.0 * (1.0 + std::log(static_cast<double>(m)));
}

double ls_scaling(double q) { return (1.0 + q * q) * (1.0 + q); }

namespace {

// Factorizes H, fills chol/logdet, throws if H is not positive definite.
void finish_evaluation(MetricEvaluation& eval, const char* label) {
  Eigen::LLT<Matrix> llt(eval.H);
  if (llt.info() != Eigen::Success) {
    throw FactorizationFailure(std::string(label) +
                               " metric is not positive definite");
  }
  eval.chol = llt.matrixL();
  eval.logdet = 2.0 * eval.chol.diagonal().array().log().sum();
  if (!std::isfinite(eval.logdet)) {
    throw FactorizationFailure(std::string(label) +
                               " metric has a non-finite log-determinant");
  }
}

}  // namespace

MetricEvaluation log_barrier_hessian(const Polytope& poly, const Vector& x) {
  poly.require_interior(x);
  MetricEvaluation eval;
  eval.kind = MetricKind::LogBarrier;
  eval.x = x;
  eval.slacks = poly.slacks(x);
  eval.weights = Vector::Ones(poly.num_constraints());
  const Matrix scaled = eval.slacks.cwiseInverse().asDiagonal() * poly.A();
  eval.H = scaled.transpose() * scaled;
  finish_evaluation(eval, "log barrier");
  return eval;
}

LsWeightState ls_weights(const Polytope& poly, const Vector& x,
                         const Vector* warm) {
  poly.require_interior(x);
  const Index m = poly.num_constraints();
  const Index n = poly.dimension();
  const double q = ls_exponent(m);
  const double row_exp = 0.5 - 1.0 / q;

  const Vector s = poly.slacks(x);
  const Matrix base = s.cwiseInverse().asDiagonal() * poly.A();  // S^{-1} A

  LsWeightState state;
  if (warm != nullptr && warm->size() == m) {
    state.w = warm->cwiseMax(kWeightFloor);
  } else {
    state.w = Vector::Constant(m, static_cast<double>(n) / static_cast<double>(m));
  }
  state.sigma.resize(m);

  // Near-degenerate points (slack spread ~1e4) put the rounding-noise floor of
  // the leverage scores above kWeightTol; the iterate then cycles within that
  // floor.  Accept the best iterate once it stalls below kWeightStallTol.
  LsWeightState best;
  double best_residual = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  for (int iter = 0; iter < kWeightMaxIters; ++iter) {
    const Matrix scaled = state.w.array().pow(row_exp).matrix().asDiagonal() * base;
    Eigen::LLT<Matrix> llt(scaled.transpose() * scaled);
    if (llt.info() != Eigen::Success) {
      throw FactorizationFailure("weight iteration Gram matrix is not positive definite");
    }
    // leverage scores: sigma_i = |L^{-1} row_i|^2
    const Matrix half = llt.matrixL().solve(scaled.transpose());
    state.sigma = half.colwise().squaredNorm();
    state.sigma_sums.push_back(state.sigma.sum());
    state.iterations = iter + 1;
    state.residual = (state.w - state.sigma).lpNorm<Eigen::Infinity>();
    if (state.residual <= kWeightTol) return state;
    if (state.residual < 0.9 * best_residual) {
      best_residual = state.residual;
      best = state;
      since_improvement = 0;
    } else if (++since_improvement >= kWeightStallWindow &&
               best_residual <= kWeightStallTol) {
      best.sigma_sums = state.sigma_sums;
      return best;
    }
    state.w = (state.w.array() * state.sigma.array()).sqrt().max(kWeightFloor);
  }
  if (best_residual <= kWeightStallTol) {
    best.sigma_sums = state.sigma_sums;
    return best;
  }
  char residual_text[32];
  std::snprintf(residual_text, sizeof(residual_text), "%.3e", state.residual);
  throw NoConvergence(std::string("weight fixed point residual ") +
                      residual_text + " after " +
                      std::to_string(kWeightMaxIters) + " iterations");
}

MetricEvaluation ls_matrix(const Polytope& poly, const Vector& x,
                           const Vector* warm) {
  const LsWeightState state = ls_weights(poly, x, warm);
  const Index m = poly.num_constraints();
  const double q = ls_exponent(m);

  MetricEvaluation eval;
  eval.kind = MetricKind::LsMatrix;
  eval.x = x;
  eval.slacks = poly.slacks(x);
  eval.weights = state.w;
  eval.q = q;
  eval.weight_iterations = state.iterations;
  const Vector row_scale =
      state.w.array().pow(0.5 - 1.0 / q) / eval.slacks.array();
  const Matrix scaled = row_scale.asDiagonal() * poly.A();
  eval.H = ls_scaling(q) * (scaled.transpose() * scaled);
  finish_evaluation(eval, "weighted");
  return eval;
}

Matrix hessian_directional_derivative(const Polytope& poly,
                                      const MetricEvaluation& eval,
                                      const Vector& h) {
  poly.require_dimension(h);
  const Index n = poly.dimension();
  if (eval.kind == MetricKind::LogBarrier) {
    const Vector ah = poly.A() * h;
    const Vector coef =
        (-2.0 * ah.array() / eval.slacks.array().cube()).matrix();
    Matrix deriv = poly.A().transpose() * coef.asDiagonal() * poly.A();
    return 0.5 * (deriv + deriv.transpose());
  }

  const double reach = (poly.A() * h).lpNorm<Eigen::Infinity>();
  if (reach == 0.0) return Matrix::Zero(n, n);
  const double delta = kFdScale * eval.slacks.minCoeff() / reach;
  const Vector xp = eval.x + delta * h;
  const Vector xm = eval.x - delta * h;
  if (!poly.contains(xp) || !poly.contains(xm)) {
    throw StepOutOfDomain("finite-difference probe left the interior");
  }
  const Matrix hp = ls_matrix(poly, xp, &eval.weights).H;
  const Matrix hm = ls_matrix(poly, xm, &eval.weights).H;
  Matrix deriv = (hp - hm) / (2.0 * delta);
  return 0.5 * (deriv + deriv.transpose());
}

double ellipsoid_norm(const MetricEvaluation& eval, const Vector& v) {
  return (eval.chol.transpose() * v).norm();
}

Matrix whiten(const MetricEvaluation& eval, const Matrix& M) {
  const auto lower = eval.chol.triangularView<Eigen::Lower>();
  const Matrix left = lower.solve(M);
  return lower.solve(left.transpose()).transpose();
}

namespace {

class LogBarrierOracle final : public MetricOracle {
 public:
  MetricKind kind() const override { return MetricKind::LogBarrier; }
  MetricEvaluation evaluate(const Polytope& poly, const Vector& x,
                            const MetricEvaluation*) const override {
    return log_barrier_hessian(poly, x);
  }
  Matrix derivative(const Polytope& poly, const MetricEvaluation& eval,
                    const Vector& h) const override {
    return hessian_directional_derivative(poly, eval, h);
  }
};

class LsMatrixOracle final : public MetricOracle {
 public:
  MetricKind kind() const override { return MetricKind::LsMatrix; }
  MetricEvaluation evaluate(const Polytope& poly, const Vector& x,
                            const MetricEvaluation* prev) const override {
    const Vector* warm = nullptr;
    if (prev != nullptr && prev->kind == MetricKind::LsMatrix &&
        prev->weights.size() == poly.num_constraints()) {
      warm = &prev->weights;
    }
    return ls_matrix(poly, x, warm);
  }
  Matrix derivative(const Polytope& poly, const MetricEvaluation& eval,
                    const Vector& h) const override {
    return hessian_directional_derivative(poly, eval, h);
  }
};

}  // namespace

std::unique_ptr<MetricOracle> make_metric_oracle(MetricKind kind) {
  if (kind == MetricKind::LogBarrier) {
    return std::make_unique<LogBarrierOracle>();
  }
  return std::make_unique<LsMatrixOracle>();
}

}  // namespace dikin
