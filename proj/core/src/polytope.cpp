#include "dikin/polytope.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <string>

namespace dikin {

namespace {

std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace

Polytope::Polytope(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw DimensionMismatch("constraint matrix is " +
                            shape_string(A_.rows(), A_.cols()) + " but b has " +
                            std::to_string(b_.size()) + " entries");
  }
  if (A_.cols() < 1 || A_.rows() <= A_.cols()) {
    throw DimensionMismatch("need m > n >= 1 constraints, got m = " +
                            std::to_string(A_.rows()) +
                            ", n = " + std::to_string(A_.cols()));
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(A_);
  qr.setThreshold(kRankTol);
  if (qr.rank() < A_.cols()) {
    throw RankDeficient("constraint matrix has rank " +
                        std::to_string(qr.rank()) + " < " +
                        std::to_string(A_.cols()));
  }
  slack_floor_ = 1e-12 * (b_.lpNorm<Eigen::Infinity>() + 1.0);
}

Vector Polytope::slacks(const Vector& x) const {
  require_dimension(x);
  return A_ * x - b_;
}

double Polytope::min_slack(const Vector& x) const {
  return slacks(x).minCoeff();
}

bool Polytope::contains(const Vector& x) const {
  return min_slack(x) >= slack_floor_;
}

void Polytope::require_dimension(const Vector& x) const {
  if (x.size() != A_.cols()) {
    throw DimensionMismatch("point has " + std::to_string(x.size()) +
                            " coordinates, polytope lives in dimension " +
                            std::to_string(A_.cols()));
  }
}

void Polytope::require_interior(const Vector& x) const {
  require_dimension(x);
  const double slack = min_slack(x);
  if (slack < slack_floor_) {
    throw NotInterior("point is not strictly interior (min slack " +
                      std::to_string(slack) + ", floor " +
                      std::to_string(slack_floor_) + ")");
  }
}

Chord chord_through(const Polytope& poly, const Vector& x,
                    const Vector& direction) {
  poly.require_interior(x);
  poly.require_dimension(direction);
  if (direction.norm() == 0.0) {
    throw DimensionMismatch("chord direction must be nonzero");
  }
  const Vector s = poly.slacks(x);
  const Vector au = poly.A() * direction;
  double t_plus = std::numeric_limits<double>::infinity();
  double t_minus = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < au.size(); ++i) {
    if (au[i] < 0.0) {
      t_plus = std::min(t_plus, s[i] / -au[i]);
    } else if (au[i] > 0.0) {
      t_minus = std::max(t_minus, -s[i] / au[i]);
    }
  }
  if (!std::isfinite(t_plus) || !std::isfinite(t_minus)) {
    throw UnboundedDirection("line does not exit the polytope on both sides");
  }
  Chord chord;
  chord.t_minus = t_minus;
  chord.t_plus = t_plus;
  chord.p = x + t_minus * direction;
  chord.q = x + t_plus * direction;
  return chord;
}

double cross_ratio_distance(const Polytope& poly, const Vector& x,
                            const Vector& y) {
  poly.require_interior(x);
  poly.require_interior(y);
  const Vector u = y - x;
  const double len = u.norm();
  if (len == 0.0) return 0.0;
  const Chord chord = chord_through(poly, x, u);
  // In chord coordinates x sits at 0 and y at 1, so the factors of |u|
  // cancel: d = (t_plus - t_minus) / (|t_minus| (t_plus - 1)).
  const double denom = (-chord.t_minus) * (chord.t_plus - 1.0);
  if (denom <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return (chord.t_plus - chord.t_minus) / denom;
}

namespace {

// Damped Newton on f(x) = -sum_i log s_i(x); stops when the Newton
// decrement |grad|_{H^{-1}} drops below 1e-8.
Vector center_newton(const Polytope& poly, Vector x) {
  const Matrix& A = poly.A();
  constexpr int kMaxIters = 500;
  for (int it = 0; it < kMaxIters; ++it) {
    const Vector s = poly.slacks(x);
    const Vector inv_s = s.cwiseInverse();
    const Vector grad = -(A.transpose() * inv_s);
    const Matrix scaled = inv_s.asDiagonal() * A;
    const Matrix hess = scaled.transpose() * scaled;
    Eigen::LLT<Matrix> llt(hess);
    if (llt.info() != Eigen::Success) {
      throw FactorizationFailure("analytic center Hessian is not positive definite");
    }
    const Vector dx = llt.solve(-grad);
    const double lambda = std::sqrt(std::max(0.0, -grad.dot(dx)));
    if (lambda <= 1e-8) return x;
    double step = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
    Vector next = x + step * dx;
    int backtracks = 0;
    while (!poly.contains(next)) {
      step *= 0.5;
      next = x + step * dx;
      if (++backtracks > 60) {
        throw NoConvergence("analytic center line search stalled");
      }
    }
    x = std::move(next);
  }
  throw NoConvergence("analytic center Newton did not converge in 500 iterations");
}

// Finds a strictly interior point by pushing the auxiliary margin t in
// min t  s.t.  Ax - b + t 1 >= 0 below zero with a standard barrier ladder.
// Certifies an empty interior when the ladder bottoms out with t >= 0.
Vector phase1_interior(const Polytope& poly) {
  const Matrix& A = poly.A();
  const Vector& b = poly.b();
  const Index m = A.rows();
  const Index n = A.cols();

  Vector x = Eigen::ColPivHouseholderQR<Matrix>(A).solve(b + Vector::Ones(m));
  if (poly.contains(x)) return x;
  double t = -poly.min_slack(x) + 1.0;

  Matrix ext(m, n + 1);
  ext.leftCols(n) = A;
  ext.col(n).setOnes();

  for (double mu = 1.0; mu > 1e-12; mu *= 0.25) {
    for (int it = 0; it < 50; ++it) {
      const Vector margins = (poly.slacks(x).array() + t).matrix();
      const Vector inv = margins.cwiseInverse();
      Vector grad(n + 1);
      grad.head(n) = -(A.transpose() * inv);
      grad[n] = 1.0 / mu - inv.sum();
      const Matrix scaled = inv.asDiagonal() * ext;
      Matrix hess = scaled.transpose() * scaled;
      // [A | 1] may be rank deficient when the all-ones vector lies in the
      // column span of A; a tiny ridge keeps the solve well posed.
      hess.diagonal().array() += 1e-12 * (hess.trace() + 1.0);
      Eigen::LLT<Matrix> llt(hess);
      if (llt.info() != Eigen::Success) {
        throw FactorizationFailure("phase-1 Hessian is not positive definite");
      }
      const Vector dir = llt.solve(-grad);
      const double lambda = std::sqrt(std::max(0.0, -grad.dot(dir)));
      double step = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      Vector xn;
      double tn = 0.0;
      for (int backtracks = 0;; ++backtracks) {
        xn = x + step * dir.head(n);
        tn = t + step * dir[n];
        if ((poly.slacks(xn).array() + tn).minCoeff() > 0.0) break;
        if (backtracks > 60) {
          throw NoConvergence("phase-1 line search stalled");
        }
        step *= 0.5;
      }
      x = std::move(xn);
      t = tn;
      if (poly.contains(x)) return x;
      if (lambda < 1e-6) break;
    }
    if (poly.contains(x)) return x;
  }
  throw NoInteriorPoint("phase-1 finished with margin t = " + std::to_string(t) +
                        "; the polytope has no strictly interior point");
}

}  // namespace

Vector analytic_center(const Polytope& poly) {
  return center_newton(poly, phase1_interior(poly));
}

Vector analytic_center(const Polytope& poly, const Vector& x0) {
  poly.require_interior(x0);
  return center_newton(poly, x0);
}

}  // namespace dikin
