#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "dikin/barrier.hpp"
#include "dikin/generators.hpp"
#include "dikin/polytope.hpp"
#include "dikin/rng.hpp"
#include "dikin/walk.hpp"

namespace dikin {

/// Number of hit-and-run steps taken from the analytic center when the
/// checks need "generic" interior points.
inline constexpr int kHitAndRunSteps = 100;

/// Draws `count` interior points, each `steps` hit-and-run moves apart,
/// starting from the analytic center.
std::vector<Vector> random_interior_points(const Polytope& poly, int count,
                                           Rng& rng,
                                           int steps = kHitAndRunSteps);

/// --- Strong self-concordance -------------------------------------------
/// At random x and unit h, measures
///   ratio = |L^{-1} DH(x)[h] L^{-T}|_F / |h|_x
/// which the theory bounds by 2 for both barriers. `allowed` is the bound
/// inflated by a per-metric numerical tolerance (exact derivative for the
/// log barrier, finite differences for the weighted one).
struct SscReport {
  MetricKind metric;
  int trials = 0;
  double max_ratio = 0.0;
  double bound = 2.0;
  double allowed = 2.0;
  bool pass = false;
};

SscReport check_strong_self_concordance(const Polytope& poly,
                                        const MetricOracle& oracle, int trials,
                                        Rng& rng);
SscReport check_strong_self_concordance(const Polytope& poly, MetricKind kind,
                                        int trials, Rng& rng);

/// --- Global metric stability ---------------------------------------------
/// For random pairs with t = |x - y|_x in (0, 1/2]:
///  * every eigenvalue of L_x^{-1} H(y) L_x^{-T} lies in
///    [(1-t)^2 - eig_slack, (1-t)^{-2} + eig_slack], and
///  * |L_x^{-1} (H(y) - H(x)) L_x^{-T}|_F <= (1-t)^{-2} - 1 + fro_slack,
///    the integral of the Frobenius derivative bound along the segment
///    (tight for an interval barrier approached head-on).
struct SandwichReport {
  MetricKind metric;
  int pairs = 0;
  double eig_slack = 0.0;
  double fro_slack = 0.0;
  long eig_violations = 0;
  long fro_violations = 0;
  double max_eig_excess = 0.0;  // worst overshoot beyond the slack-free bound
  double max_fro_excess = 0.0;
  bool pass = false;
};

SandwichReport check_global_sandwich(const Polytope& poly,
                                     const MetricOracle& oracle, int pairs,
                                     Rng& rng);
SandwichReport check_global_sandwich(const Polytope& poly, MetricKind kind,
                                     int pairs, Rng& rng);

/// --- Convexity of log det H ----------------------------------------------
/// Midpoint test on random interior segments:
///   logdet H((x+y)/2) <= (logdet H(x) + logdet H(y)) / 2 + tol.
struct ConvexityReport {
  MetricKind metric;
  int segments = 0;
  double tol = 1e-9;
  long violations = 0;
  double max_violation = 0.0;  // most positive midpoint excess
  bool pass = false;
};

ConvexityReport check_logdet_convexity(const Polytope& poly, MetricKind kind,
                                       int segments, Rng& rng,
                                       double tol = 1e-9);

/// --- Ellipsoid symmetry ----------------------------------------------------
/// Certifies E_x(1) inside K cap (2x - K) pointwise (inner_violations must
/// stay 0) and measures nu_bar_emp = max |p - x|_x^2 over symmetric chord
/// endpoints p, which the theory caps at m for the log barrier and at
/// e n (1+q^2)(1+q) for the weighted metric.
struct SymmetryReport {
  MetricKind metric;
  int x_samples = 0;
  int directions = 0;   // per sample, for both the inner and outer scans
  long inner_checks = 0;
  long inner_violations = 0;
  double nu_bar_emp = 0.0;
  double nu_bar_bound = 0.0;
  bool pass = false;
};

SymmetryReport estimate_symmetry(const Polytope& poly, MetricKind kind,
                                 int x_samples, int directions, Rng& rng);

/// --- Distribution tests ----------------------------------------------------
/// Compares recorded samples against the exact uniform law on the generated
/// body: per-coordinate KS tests, a chi-square test on an axis-aligned grid
/// (cells pooled until every expected count is at least 20), and a Geyer
/// initial-positive-sequence effective sample size. Throws UnknownReference
/// when the body has no known marginals.
struct UniformityReport {
  BodyKind body = BodyKind::Unknown;
  long sample_count = 0;
  std::vector<double> ks_stat;
  std::vector<double> ks_p;
  double ks_p_min = 0.0;
  double chi2_stat = 0.0;
  long chi2_df = 0;
  double chi2_p = 0.0;
  long chi2_cells = 0;
  double ess = 0.0;  // min over coordinates
  double ks_p_threshold = 0.01;
  double chi2_p_threshold = 1e-3;
  bool pass = false;
};

UniformityReport uniformity_tests(const std::vector<Vector>& samples,
                                  BodyKind body, int cells_per_axis = 0);

/// --- Filter behaviour -------------------------------------------------------
struct AcceptanceSummary {
  long steps = 0;
  double mean_filter_value = 0.0;
  double min_filter_value = 0.0;
  double frac_at_threshold = 0.0;  // share of steps with value >= threshold
  double threshold = 0.0;
  double acceptance_rate = 0.0;
};

AcceptanceSummary acceptance_statistics(const ChainTrace& trace,
                                        double threshold);

/// --- Shared numerics ---------------------------------------------------------
/// Two-sided Kolmogorov-Smirnov p-value (asymptotic series with the
/// finite-sample scaling of Stephens).
double kolmogorov_p(double stat, long n);

/// Upper tail of the chi-square distribution.
double chi_square_p(double stat, long df);

/// Volume of the box prod_i [lo_i, hi_i] intersected with {sum_i x_i <= s},
/// by inclusion-exclusion over the box corners.
double box_halfspace_volume(const Vector& lo, const Vector& hi, double s);

/// Geyer initial-positive-sequence effective sample size of one series.
/// A constant series counts as one effective observation.
double effective_sample_size(const std::vector<double>& series);

/// --- Report serialization -----------------------------------------------------
/// All reports share the shape {check, metric, params, measured, bound, pass}.
nlohmann::json report_json(const SscReport& r);
nlohmann::json report_json(const SandwichReport& r);
nlohmann::json report_json(const ConvexityReport& r);
nlohmann::json report_json(const SymmetryReport& r);
nlohmann::json report_json(const UniformityReport& r);
nlohmann::json report_json(const AcceptanceSummary& r, MetricKind metric);

}  // namespace dikin
