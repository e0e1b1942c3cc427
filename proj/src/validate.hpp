#pragma once

#include <cstdint>
#include <utility>

#include "direction.hpp"
#include "median.hpp"

namespace rsub {

/// Brute-force sweep parameters: `resolution` samples per axis, refined
/// `refinement_rounds` times around the running argmin, each round shrinking
/// the search window by `refinement_factor`.
struct GridSpec {
  Index resolution = 10000;
  Index refinement_rounds = 2;
  Index refinement_factor = 100;
};

struct DirectionOracleResult {
  double angle = 0.0;   // in [0, pi)
  double energy = 0.0;
};

/// Exhaustive minimization of E over directions (cos t, sin t), t in [0, pi).
/// The energy is evaluated with the 2D cross-product distance formula, an
/// algebraic route independent of the solver's projection residuals.
DirectionOracleResult oracle_direction_2d(const PointSet& points, const GridSpec& grid);

struct LinePairResult {
  Index i = 0;
  Index j = 0;
  double energy = 0.0;
};

/// Best line through a pair of data points, by trying every pair.
/// Coincident pairs are skipped.
LinePairResult oracle_line_pairs_2d(const PointSet& points);

struct LineGridResult {
  double angle = 0.0;
  double offset = 0.0;       // signed distance of the line from the centroid
  double energy = 0.0;
  double energy_slack = 0.0; // Lipschitz bound on the error of one grid cell
};

/// Dense sweep over all lines {x : <n(angle), x - centroid> = offset}
/// intersecting the data's bounding disk.
LineGridResult oracle_line_grid_2d(const PointSet& points, const GridSpec& grid);

/// Two-stage (plus refinements) lattice search for the geometric median over
/// the data's bounding box.
Vector oracle_median_grid(const PointSet& points, Index coarse_resolution = 2000,
                          Index fine_resolution = 200, Index refinement_rounds = 2);

struct SteinerReport {
  Vector fermat_point;       // from the Weiszfeld solver
  Vector grid_point;         // from the lattice oracle
  LinePairResult best_line;
  double point_line_distance = 0.0;
  bool line_misses_median = false;  // distance > 10 * tolerance
};

/// For a triangle with all angles < 120 degrees and sides s1 <= s2 < s3:
/// computes the Fermat point (geometric median), cross-checks it against the
/// lattice oracle, finds the optimal line through a pair of vertices, and
/// reports the distance between the two. A positive distance shows the
/// minimizing line does not pass through the median.
SteinerReport steiner_check(const PointSet& triangle, double tolerance = 1e-6);

/// Compares the analytic gradient -P_a C_a a against central finite
/// differences of t -> E(normalize(a + t h)) along `samples` random unit
/// tangents; returns the maximum relative error. `a` must be at least
/// 100 * anchor_eps away from the anchor set (in relative residual).
double fd_gradient_check(const UnitDirection& a, const DirectionProblem& problem,
                         double increment = 1e-6, Index samples = 10, std::uint64_t seed = 0);

struct OneSidedDerivative {
  double analytic = 0.0;
  double numeric = 0.0;
};

/// One-sided directional derivative of E at an anchor direction along a
/// tangent h: the closed form alpha * ||h|| - <P_a C_{a,K} a, h> against the
/// forward difference at alpha_step.
OneSidedDerivative one_sided_derivative_check(const UnitDirection& a, const Vector& h,
                                              const DirectionProblem& problem,
                                              double alpha_step = 1e-7);

/// Samples `samples` random unit tangents and evaluates the appropriate
/// directional derivative (one-sided closed form at anchors, gradient
/// pairing elsewhere); true iff all are strictly positive. A sampled
/// sufficient-condition check, not a proof.
bool local_min_certificate(const UnitDirection& a, const DirectionProblem& problem,
                           Index samples = 1000, std::uint64_t seed = 0);

}  // namespace rsub
