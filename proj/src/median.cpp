#include "median.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "numeric.hpp"

namespace rsub {

MedianProblem::MedianProblem(PointSet points, double tolerance, Index max_iters,
                             double anchor_eps)
    : points_(std::move(points)), tolerance_(tolerance), max_iters_(max_iters) {
  if (tolerance_ <= 0.0) throw usage_error("tolerance must be positive");
  if (max_iters_ < 1) throw usage_error("max_iters must be positive");
  anchor_eps_ = anchor_eps > 0.0 ? anchor_eps : 1e-12 * points_.diameter();
  for (Index i = 0; i < points_.size(); ++i) {
    for (Index j = i + 1; j < points_.size(); ++j) {
      if ((points_.point(i) - points_.point(j)).norm() <= anchor_eps_) {
        throw data_error("points " + std::to_string(i) + " and " + std::to_string(j) +
                         " coincide; the geometric median requires pairwise distinct points");
      }
    }
  }
}

double MedianProblem::objective(const Vector& x) const {
  KahanSum sum;
  for (Index i = 0; i < points_.size(); ++i) sum.add((x - points_.point(i)).norm());
  return sum.value();
}

std::optional<Index> MedianProblem::anchor_at(const Vector& x) const {
  Index best = -1;
  double best_dist = anchor_eps_;
  for (Index i = 0; i < points_.size(); ++i) {
    double d = (x - points_.point(i)).norm();
    if (d <= best_dist) {
      best_dist = d;
      best = i;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

Vector weiszfeld_step(const Vector& x, const MedianProblem& problem) {
  if (x.size() != problem.dim()) throw usage_error("weiszfeld_step: dimension mismatch");
  if (problem.anchor_at(x)) {
    throw usage_error("weiszfeld_step called on a data point; use anchor_step");
  }
  double weight_sum = 0.0;
  Vector acc = Vector::Zero(problem.dim());
  for (Index i = 0; i < problem.size(); ++i) {
    double w = 1.0 / (x - problem.points().point(i)).norm();
    weight_sum += w;
    acc += w * problem.points().point(i);
  }
  return acc / weight_sum;
}

namespace {

/// G_k = sum_{i != k} (x_k - x_i)/||x_k - x_i||, the smooth part of the
/// subdifferential at the data point x_k.
Vector anchor_gradient_sum(Index k, const MedianProblem& problem) {
  Vector g = Vector::Zero(problem.dim());
  for (Index i = 0; i < problem.size(); ++i) {
    if (i == k) continue;
    Vector diff = problem.points().point(k) - problem.points().point(i);
    g += diff / diff.norm();
  }
  return g;
}

}  // namespace

std::pair<bool, double> anchor_minimality(Index k, const MedianProblem& problem) {
  if (k < 0 || k >= problem.size()) throw usage_error("anchor_minimality: index out of range");
  double g_norm = anchor_gradient_sum(k, problem).norm();
  return {g_norm <= 1.0, g_norm};
}

Vector anchor_step(Index k, const MedianProblem& problem) {
  if (k < 0 || k >= problem.size()) throw usage_error("anchor_step: index out of range");
  Vector g = anchor_gradient_sum(k, problem);
  double g_norm = g.norm();
  if (g_norm <= 1.0) {
    throw usage_error("anchor_step called at a minimizing data point (||G|| <= 1)");
  }
  double s = 0.0;
  for (Index i = 0; i < problem.size(); ++i) {
    if (i == k) continue;
    s += 1.0 / (problem.points().point(k) - problem.points().point(i)).norm();
  }
  return problem.points().point(k) - (1.0 / s) * (1.0 - 1.0 / g_norm) * g;
}

MedianResult solve_median(const MedianProblem& problem, const Vector& x0) {
  if (x0.size() != problem.dim()) throw usage_error("solve_median: x0 dimension mismatch");
  if (!x0.allFinite()) throw usage_error("solve_median: x0 must be finite");

  MedianResult result;
  Vector x = x0;
  result.trace.initial_energy = problem.objective(x);
  result.trace.status = TerminalStatus::max_iters;

  for (Index r = 0; r < problem.max_iters(); ++r) {
    auto k = problem.anchor_at(x);
    if (k) x = problem.points().point(*k);

    Vector next;
    std::optional<AnchorInfo> event;
    if (k) {
      auto [is_min, g_norm] = anchor_minimality(*k, problem);
      event = AnchorInfo{{*k}, problem.points().point(*k).norm()};
      if (is_min) {
        result.trace.records.push_back({problem.objective(x), 0.0, event});
        result.trace.status = TerminalStatus::anchor_local_min;
        result.stopped_at_anchor = true;
        result.converged = true;
        break;
      }
      next = anchor_step(*k, problem);
    } else {
      next = weiszfeld_step(x, problem);
    }

    double step_norm = (next - x).norm();
    x = next;
    result.trace.records.push_back({problem.objective(x), step_norm, event});
    if (step_norm < problem.tolerance()) {
      // a tiny step into the snap radius is classified at the anchor on the
      // next pass rather than declared converged here
      if (problem.anchor_at(x)) continue;
      result.trace.status = TerminalStatus::converged;
      result.converged = true;
      break;
    }
  }

  result.median = x;
  result.energy = problem.objective(x);
  result.iterations = result.trace.iterations();
  return result;
}

MedianResult solve_median(const MedianProblem& problem) {
  return solve_median(problem, problem.points().coordinate_median());
}

}  // namespace rsub
