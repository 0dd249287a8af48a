#pragma once

#include <Eigen/Dense>

#include "dikin/errors.hpp"

namespace dikin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Rank test threshold used when validating the constraint matrix.
inline constexpr double kRankTol = 1e-10;

/// Absolute slack tolerance certifying that a chord endpoint lies on the
/// boundary.
inline constexpr double kBoundaryTol = 1e-9;

/// Full-dimensional polytope K = {x : Ax >= b} with m > n constraints and
/// rank(A) = n. Rows of A are facet normals; slack of row i at x is
/// a_i. x - b_i.
class Polytope {
 public:
  /// Validates shapes, requires m > n >= 1 and full column rank.
  Polytope(Matrix A, Vector b);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  Index num_constraints() const { return A_.rows(); }
  Index dimension() const { return A_.cols(); }

  /// Interior classification threshold: 1e-12 * (max|b_i| + 1).
  double slack_floor() const { return slack_floor_; }

  Vector slacks(const Vector& x) const;
  double min_slack(const Vector& x) const;

  /// Strict interior test: every slack >= slack_floor().
  bool contains(const Vector& x) const;

  void require_dimension(const Vector& x) const;
  void require_interior(const Vector& x) const;

 private:
  Matrix A_;
  Vector b_;
  double slack_floor_;
};

/// Boundary intersection of the line {x + t * direction} with the polytope.
/// p is the endpoint in the -direction sense (t_minus <= 0), q the endpoint
/// in the +direction sense (t_plus >= 0).
struct Chord {
  Vector p;
  Vector q;
  double t_minus = 0.0;
  double t_plus = 0.0;
};

/// Exact chord through an interior point. Throws UnboundedDirection when the
/// line escapes to infinity on either side.
Chord chord_through(const Polytope& poly, const Vector& x,
                    const Vector& direction);

/// Cross-ratio distance of two interior points,
///   d(x, y) = |x - y| |p - q| / (|p - x| |y - q|),
/// with p, q the chord endpoints ordered so that p is on the x side.
/// Returns 0 when x == y.
double cross_ratio_distance(const Polytope& poly, const Vector& x,
                            const Vector& y);

/// Analytic center, the minimizer of -sum_i log(a_i . x - b_i). Runs a
/// phase-1 search for a strictly interior starting point first; throws
/// NoInteriorPoint when that search certifies the interior is empty.
Vector analytic_center(const Polytope& poly);

/// Analytic center started from a known interior point.
Vector analytic_center(const Polytope& poly, const Vector& x0);

}  // namespace dikin
