#pragma once

#include <utility>

#include "trace.hpp"

namespace rsub {

/// Geometric-median instance: pairwise distinct points x_1..x_N, a step-norm
/// stopping tolerance, and the snap radius anchor_eps below which an iterate
/// is treated as sitting on a data point. anchor_eps <= 0 selects the
/// default 1e-12 * diameter(points).
class MedianProblem {
 public:
  explicit MedianProblem(PointSet points, double tolerance = 1e-10,
                         Index max_iters = 100000, double anchor_eps = -1.0);

  const PointSet& points() const { return points_; }
  Index size() const { return points_.size(); }
  Index dim() const { return points_.dim(); }
  double tolerance() const { return tolerance_; }
  Index max_iters() const { return max_iters_; }
  double anchor_eps() const { return anchor_eps_; }

  /// Sum of distances from x to the data points.
  double objective(const Vector& x) const;

  /// Index of the data point within anchor_eps of x, if any.
  std::optional<Index> anchor_at(const Vector& x) const;

 private:
  PointSet points_;
  double tolerance_;
  Index max_iters_;
  double anchor_eps_;
};

struct MedianResult {
  Vector median;
  double energy = 0.0;
  Index iterations = 0;
  bool stopped_at_anchor = false;
  bool converged = false;
  FitTrace trace;
};

/// One Picard step of the fixed-point equation: the distance-weighted
/// average of the data points. x must not sit on a data point.
Vector weiszfeld_step(const Vector& x, const MedianProblem& problem);

/// Minimality test at data point k: g_norm is the norm of the sum of unit
/// vectors from the other points towards x_k, and x_k is a minimizer
/// if and only if g_norm <= 1.
std::pair<bool, double> anchor_minimality(Index k, const MedianProblem& problem);

/// Descent step away from a non-minimizing data point, along the
/// subgradient closest to zero.
Vector anchor_step(Index k, const MedianProblem& problem);

/// Stabilized Weiszfeld iteration from x0: iterates snap to a data point
/// when within anchor_eps, dispatching to the anchor test/step there.
MedianResult solve_median(const MedianProblem& problem, const Vector& x0);

/// solve_median started from the coordinate-wise median of the data.
MedianResult solve_median(const MedianProblem& problem);

}  // namespace rsub
