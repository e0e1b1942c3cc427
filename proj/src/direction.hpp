#pragma once

#include <utility>

#include "geometry.hpp"
#include "trace.hpp"

namespace rsub {

/// Instance of the residual-minimizing direction problem: centered data
/// y_1..y_N, a step-norm stopping tolerance, and the relative residual
/// threshold anchor_eps below which a data point counts as aligned with the
/// current direction. Zero data vectors contribute nothing to the energy and
/// would break the anchor-set definition, so they are stripped at
/// construction and reported through stripped_indices().
class DirectionProblem {
 public:
  explicit DirectionProblem(const PointSet& points, double tolerance = 1e-12,
                            Index max_iters = 10000, double anchor_eps = 1e-9);

  const PointSet& points() const { return points_; }
  Index size() const { return points_.size(); }
  Index dim() const { return points_.dim(); }
  double tolerance() const { return tolerance_; }
  Index max_iters() const { return max_iters_; }
  double anchor_eps() const { return anchor_eps_; }
  const std::vector<Index>& stripped_indices() const { return stripped_; }

 private:
  PointSet points_;
  double tolerance_;
  Index max_iters_;
  double anchor_eps_;
  std::vector<Index> stripped_;
};

/// E(a) = sum_i ||y_i - a <a, y_i>||, the summed orthogonal distance of the
/// data to the line through the origin with direction a.
double energy(const UnitDirection& a, const DirectionProblem& problem);

/// Indices k with ||P_a y_k|| <= anchor_eps * ||y_k||, or nullopt when the
/// direction is aligned with no data point. Sign-insensitive: P_a = P_{-a}.
std::optional<AnchorInfo> detect_anchor(const UnitDirection& a, const DirectionProblem& problem);

/// The reweighted-scatter quantities driving one step at `a`:
///   scatter_apply = C_{a,K} a,   gradient = P_a C_{a,K} a,
///   step_scale    = a^T C_{a,K} a = sum_{i not in K} <a,y_i>^2 / ||P_a y_i||,
/// where the sums skip the anchored indices K (empty K sums everything).
/// step_scale_defined is false when K covers all points; the caller must
/// treat such a direction as terminal.
struct StepInfo {
  Vector scatter_apply;
  Vector gradient;
  double step_scale = 0.0;
  bool step_scale_defined = true;
  std::optional<AnchorInfo> anchor;
};

/// StepInfo at an anchored direction; K must equal detect_anchor(a).
StepInfo anchor_gradient(const UnitDirection& a, const AnchorInfo& K,
                         const DirectionProblem& problem);

/// StepInfo with the full scatter C_a (no anchored indices); gradient is
/// P_a C_a a = -grad E(a). Rejects anchor directions.
StepInfo nonanchor_gradient(const UnitDirection& a, const DirectionProblem& problem);

/// The algorithm's termination inequality ||G_{a,K}|| <= alpha. The strict
/// form certifies a local minimum; equality is a boundary case that still
/// terminates the iteration.
bool anchor_local_min_test(const UnitDirection& a, const AnchorInfo& K,
                           const DirectionProblem& problem);

/// Fixed-point step away from anchors: normalize(C_a a). Strictly decreases
/// the energy unless a is a critical point.
UnitDirection step_nonanchor(const UnitDirection& a, const DirectionProblem& problem);

/// Subgradient escape step at a non-minimizing anchor:
/// normalize(a + s^{-1} (1 - alpha/||G||) G).
UnitDirection step_anchor(const UnitDirection& a, const StepInfo& info,
                          const DirectionProblem& problem);

struct DirectionFit {
  UnitDirection direction;
  FitTrace trace;
};

/// Full iteration: dispatches on detect_anchor, stops when the step norm
/// drops below tolerance, when the anchor termination inequality holds, or
/// at max_iters. The returned direction is sign-canonicalized.
DirectionFit fit_direction(const DirectionProblem& problem, const UnitDirection& a0);

/// Empirical contraction ratio ||T(a) - anchor|| / ||a - anchor|| at the
/// last element of `probes`, where T is the non-anchor fixed-point step.
/// Diagnostic for the local convergence rate at an anchor direction.
double contraction_ratio(const std::vector<UnitDirection>& probes, const UnitDirection& anchor,
                         const AnchorInfo& K, const DirectionProblem& problem);

}  // namespace rsub
