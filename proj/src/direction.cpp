#include "direction.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "numeric.hpp"

namespace rsub {

namespace {
constexpr double kUnderflow = 1e-300;

bool covers_all(const AnchorInfo& K, const DirectionProblem& problem) {
  return static_cast<Index>(K.indices.size()) == problem.size();
}

bool is_anchored(const AnchorInfo& K, Index i) {
  for (Index k : K.indices) {
    if (k == i) return true;
  }
  return false;
}

/// C_{a,K} a accumulated over the non-anchored points.
StepInfo step_info_impl(const UnitDirection& a, const AnchorInfo& K,
                        const DirectionProblem& problem) {
  StepInfo info;
  info.scatter_apply = Vector::Zero(problem.dim());
  double scale = 0.0;
  for (Index i = 0; i < problem.size(); ++i) {
    if (is_anchored(K, i)) continue;
    auto y = problem.points().point(i);
    double dot = a.vec().dot(y);
    double residual = (y - a.vec() * dot).norm();
    info.scatter_apply += y * (dot / residual);
    scale += dot * dot / residual;
  }
  info.gradient = info.scatter_apply - a.vec() * a.vec().dot(info.scatter_apply);
  info.step_scale = scale;
  info.step_scale_defined = !covers_all(K, problem);
  info.anchor = K.indices.empty() ? std::nullopt : std::make_optional(K);
  return info;
}

UnitDirection step_nonanchor_impl(const UnitDirection& a, const DirectionProblem& problem) {
  StepInfo info = step_info_impl(a, AnchorInfo{}, problem);
  double n = info.scatter_apply.norm();
  if (!(n > kUnderflow)) {
    throw usage_error("degenerate scatter: C_a a vanishes (direction orthogonal to all data)");
  }
  return sphere_project(info.scatter_apply);
}

}  // namespace

DirectionProblem::DirectionProblem(const PointSet& points, double tolerance, Index max_iters,
                                   double anchor_eps)
    : points_(points), tolerance_(tolerance), max_iters_(max_iters), anchor_eps_(anchor_eps) {
  if (tolerance_ <= 0.0) throw usage_error("tolerance must be positive");
  if (max_iters_ < 1) throw usage_error("max_iters must be positive");
  if (anchor_eps_ <= 0.0) throw usage_error("anchor_eps must be positive");

  std::vector<Vector> kept;
  for (Index i = 0; i < points.size(); ++i) {
    if (points.point(i).norm() < kUnderflow) {
      stripped_.push_back(i);
    } else {
      kept.emplace_back(points.point(i));
    }
  }
  if (kept.empty()) {
    throw data_error("all data points are zero; the direction energy is identically zero");
  }
  if (!stripped_.empty()) points_ = PointSet::from_vectors(kept);
}

double energy(const UnitDirection& a, const DirectionProblem& problem) {
  if (a.dim() != problem.dim()) throw usage_error("energy: dimension mismatch");
  KahanSum sum;
  for (Index i = 0; i < problem.size(); ++i) {
    auto y = problem.points().point(i);
    sum.add((y - a.vec() * a.vec().dot(y)).norm());
  }
  return sum.value();
}

std::optional<AnchorInfo> detect_anchor(const UnitDirection& a, const DirectionProblem& problem) {
  if (a.dim() != problem.dim()) throw usage_error("detect_anchor: dimension mismatch");
  AnchorInfo info;
  for (Index i = 0; i < problem.size(); ++i) {
    auto y = problem.points().point(i);
    double norm = y.norm();
    double residual = (y - a.vec() * a.vec().dot(y)).norm();
    if (residual <= problem.anchor_eps() * norm) {
      info.indices.push_back(i);
      info.alpha += norm;
    }
  }
  if (info.indices.empty()) return std::nullopt;
  return info;
}

StepInfo anchor_gradient(const UnitDirection& a, const AnchorInfo& K,
                         const DirectionProblem& problem) {
  if (K.indices.empty()) throw usage_error("anchor_gradient requires a nonempty anchor set");
  return step_info_impl(a, K, problem);
}

StepInfo nonanchor_gradient(const UnitDirection& a, const DirectionProblem& problem) {
  if (detect_anchor(a, problem)) {
    throw usage_error("nonanchor_gradient called at an anchor direction");
  }
  return step_info_impl(a, AnchorInfo{}, problem);
}

bool anchor_local_min_test(const UnitDirection& a, const AnchorInfo& K,
                           const DirectionProblem& problem) {
  if (K.indices.empty()) throw usage_error("anchor_local_min_test requires a nonempty anchor set");
  return step_info_impl(a, K, problem).gradient.norm() <= K.alpha;
}

UnitDirection step_nonanchor(const UnitDirection& a, const DirectionProblem& problem) {
  if (detect_anchor(a, problem)) {
    throw usage_error("step_nonanchor called at an anchor direction; use step_anchor");
  }
  return step_nonanchor_impl(a, problem);
}

UnitDirection step_anchor(const UnitDirection& a, const StepInfo& info,
                          const DirectionProblem& problem) {
  if (a.dim() != problem.dim()) throw usage_error("step_anchor: dimension mismatch");
  if (!info.anchor) throw usage_error("step_anchor requires anchor information");
  if (!info.step_scale_defined) {
    throw usage_error("step_anchor: all points are anchored; the direction is terminal");
  }
  double g_norm = info.gradient.norm();
  if (g_norm <= info.anchor->alpha) {
    throw usage_error("step_anchor called where the termination inequality holds");
  }
  Vector moved = a.vec() + (1.0 / info.step_scale) * (1.0 - info.anchor->alpha / g_norm) *
                               info.gradient;
  return sphere_project(moved);
}

DirectionFit fit_direction(const DirectionProblem& problem, const UnitDirection& a0) {
  if (a0.dim() != problem.dim()) throw usage_error("fit_direction: a0 dimension mismatch");

  UnitDirection a = a0;
  FitTrace trace;
  trace.initial_energy = energy(a, problem);
  trace.status = TerminalStatus::max_iters;

  for (Index r = 0; r < problem.max_iters(); ++r) {
    auto K = detect_anchor(a, problem);
    UnitDirection next = a;
    if (K) {
      StepInfo info = step_info_impl(a, *K, problem);
      if (!info.step_scale_defined || info.gradient.norm() <= K->alpha) {
        trace.records.push_back({energy(a, problem), 0.0, K});
        trace.status = TerminalStatus::anchor_local_min;
        break;
      }
      next = step_anchor(a, info, problem);
    } else {
      next = step_nonanchor_impl(a, problem);
    }
    double step_norm = (next.vec() - a.vec()).norm();
    a = next;
    trace.records.push_back({energy(a, problem), step_norm, K});
    if (step_norm < problem.tolerance()) {
      trace.status = TerminalStatus::converged;
      break;
    }
  }

  return DirectionFit{a.canonical(), std::move(trace)};
}

double contraction_ratio(const std::vector<UnitDirection>& probes, const UnitDirection& anchor,
                         const AnchorInfo& K, const DirectionProblem& problem) {
  if (probes.empty()) throw usage_error("contraction_ratio requires at least one probe");
  auto detected = detect_anchor(anchor, problem);
  if (!detected || detected->indices != K.indices) {
    throw usage_error("contraction_ratio: anchor/K do not agree with detect_anchor");
  }
  const UnitDirection& a = probes.back();
  double dist = (a.vec() - anchor.vec()).norm();
  if (dist <= kUnderflow) throw usage_error("contraction_ratio: probe equals the anchor");
  UnitDirection mapped = step_nonanchor(a, problem);
  return (mapped.vec() - anchor.vec()).norm() / dist;
}

}  // namespace rsub
