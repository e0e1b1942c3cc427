#include "subspace.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "numeric.hpp"
#include "rng.hpp"

namespace rsub {

const char* to_string(OffsetKind k) {
  switch (k) {
    case OffsetKind::geometric_median: return "geometric_median";
    case OffsetKind::mean: return "mean";
    case OffsetKind::given: return "given";
    case OffsetKind::none: return "none";
  }
  return "unknown";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::robust_residual: return "robust_residual";
    case Method::classical_pca: return "classical_pca";
    case Method::pca_l1: return "pca_l1";
  }
  return "unknown";
}

Vector compute_offset(const PointSet& points, const OffsetPolicy& policy) {
  switch (policy.kind) {
    case OffsetKind::geometric_median:
      return solve_median(MedianProblem(points)).median;
    case OffsetKind::mean:
      return points.mean();
    case OffsetKind::given:
      if (!policy.value) throw usage_error("offset policy 'given' requires a value");
      if (policy.value->size() != points.dim()) {
        throw usage_error("given offset dimension does not match the data");
      }
      return *policy.value;
    case OffsetKind::none:
      return Vector::Zero(points.dim());
  }
  throw usage_error("unknown offset policy");
}

TerminalStatus SubspaceModel::terminal_status() const {
  for (const auto& s : stages) {
    if (s.status == TerminalStatus::max_iters) return TerminalStatus::max_iters;
  }
  return stages.empty() ? TerminalStatus::converged : stages.back().status;
}

namespace {

PointSet deflate(const PointSet& points, const DirectionBasis& basis) {
  if (basis.empty()) return points;
  Matrix cols = points.columns();
  for (Index i = 0; i < cols.cols(); ++i) {
    cols.col(i) = basis.project_off(cols.col(i));
  }
  return PointSet::from_columns(std::move(cols));
}

void check_rank(const PointSet& centered, Index k) {
  if (k < 1) throw usage_error("k must be >= 1");
  if (k > centered.dim()) {
    throw usage_error("k = " + std::to_string(k) + " exceeds the data dimension " +
                      std::to_string(centered.dim()));
  }
  Index rank = span_rank(centered);
  if (k > rank) {
    throw data_error("k = " + std::to_string(k) + " exceeds the rank of the centered data; " +
                     "at most " + std::to_string(rank) + " directions are extractable");
  }
}

/// Re-orthogonalize a fitted direction against the basis collected so far;
/// the deflation guarantees near-orthogonality, this removes the drift that
/// compounds over stages.
UnitDirection reorthogonalized(const UnitDirection& a, const DirectionBasis& basis) {
  if (basis.empty()) return a;
  Vector v = basis.project_off(a.vec());
  v = basis.project_off(v);
  return sphere_project(v);
}

UnitDirection random_span_direction(const std::vector<Vector>& span, Rng& rng) {
  Vector v = Vector::Zero(span.front().size());
  for (const auto& b : span) v += rng.gaussian() * b;
  return sphere_project(v);
}

}  // namespace

double l1_objective(const UnitDirection& a, const PointSet& points) {
  KahanSum sum;
  for (Index i = 0; i < points.size(); ++i) sum.add(std::abs(a.vec().dot(points.point(i))));
  return sum.value();
}

UnitDirection pca_l1_step(const UnitDirection& a, const PointSet& points) {
  Vector acc = Vector::Zero(points.dim());
  for (Index i = 0; i < points.size(); ++i) {
    double dot = a.vec().dot(points.point(i));
    acc += (dot < 0.0 ? -1.0 : 1.0) * points.point(i);
  }
  return sphere_project(acc);
}

namespace {

struct PowerResult {
  Vector v;
  double lambda = 0.0;
  Index iterations = 0;
};

PowerResult power_iterate(const Matrix& scatter, Vector v, double rel_residual) {
  constexpr Index kMaxIters = 200000;
  for (Index r = 0; r < kMaxIters; ++r) {
    Vector sv = scatter * v;
    double lambda = v.dot(sv);
    if ((sv - lambda * v).norm() <= rel_residual * lambda) return {v, lambda, r};
    double n = sv.norm();
    if (n <= 0.0) throw data_error("power iteration collapsed to zero");
    v = sv / n;
  }
  throw internal_error("power iteration failed to reach the residual tolerance");
}

}  // namespace

UnitDirection top_scatter_eigenvector(const PointSet& points, double rel_residual,
                                      Index* iterations_out) {
  const Index d = points.dim();
  Matrix scatter = Matrix::Zero(d, d);
  for (Index i = 0; i < points.size(); ++i) {
    scatter.noalias() += points.point(i) * points.point(i).transpose();
  }

  auto span = orthonormal_span_basis(points);
  if (span.empty()) throw data_error("power iteration on rank-zero data");

  // two deterministic starts. The heaviest coordinate axis converges exactly
  // on axis-aligned scatters but can sit in an eigenspace below the top one;
  // the fixed pseudo-random span vector is generic. Keep the larger Rayleigh
  // quotient, preferring the axis start on ties.
  Index heaviest = 0;
  scatter.diagonal().maxCoeff(&heaviest);
  Vector axis = scatter.col(heaviest);  // one application of S to e_j, stays in span
  double axis_norm = axis.norm();

  Rng rng(0, "power_iteration_init");
  Vector generic = Vector::Zero(d);
  for (const auto& b : span) generic += rng.gaussian() * b;
  generic.normalize();
  PowerResult best = power_iterate(scatter, generic, rel_residual);

  if (axis_norm > 0.0) {
    PowerResult from_axis = power_iterate(scatter, axis / axis_norm, rel_residual);
    if (from_axis.lambda >= best.lambda * (1.0 - 1e-12)) best = from_axis;
  }
  if (iterations_out) *iterations_out = best.iterations;
  return sphere_project(best.v);
}

SubspaceModel fit_subspace(const PointSet& points, Index k, const OffsetPolicy& policy,
                           const FitConfig& config) {
  SubspaceModel model;
  model.method = Method::robust_residual;
  model.offset = compute_offset(points, policy);
  PointSet centered = points.centered(model.offset);
  check_rank(centered, k);

  for (Index stage = 0; stage < k; ++stage) {
    PointSet deflated = deflate(centered, model.basis);
    DirectionProblem problem(deflated, config.tolerance, config.max_iters, config.anchor_eps);

    auto span = orthonormal_span_basis(problem.points());
    UnitDirection init = top_scatter_eigenvector(problem.points());
    DirectionFit best = fit_direction(problem, init);
    for (Index restart = 1; restart < config.restarts; ++restart) {
      Rng rng(config.seed, "fit_restart_" + std::to_string(stage) + "_" +
                               std::to_string(restart));
      DirectionFit candidate = fit_direction(problem, random_span_direction(span, rng));
      if (candidate.trace.final_energy() < best.trace.final_energy()) {
        best = std::move(candidate);
      }
    }

    UnitDirection dir = reorthogonalized(best.direction, model.basis).canonical();
    model.basis.append(dir);
    model.energies.push_back(best.trace.final_energy());
    model.stages.push_back({best.trace.iterations(), best.trace.status,
                            best.trace.final_step_norm(), best.trace.final_energy()});
  }
  return model;
}

SubspaceModel classical_pca(const PointSet& points, Index k, const OffsetPolicy& policy) {
  SubspaceModel model;
  model.method = Method::classical_pca;
  model.offset = compute_offset(points, policy);
  PointSet centered = points.centered(model.offset);
  check_rank(centered, k);

  for (Index stage = 0; stage < k; ++stage) {
    PointSet deflated = deflate(centered, model.basis);
    Index iters = 0;
    UnitDirection dir =
        reorthogonalized(top_scatter_eigenvector(deflated, 1e-9, &iters), model.basis)
            .canonical();
    model.basis.append(dir);
    double e = energy(dir, DirectionProblem(deflated));
    model.energies.push_back(e);
    model.stages.push_back({iters, TerminalStatus::converged, 0.0, e});
  }
  return model;
}

SubspaceModel pca_l1(const PointSet& points, Index k, const OffsetPolicy& policy) {
  SubspaceModel model;
  model.method = Method::pca_l1;
  model.offset = compute_offset(points, policy);
  PointSet centered = points.centered(model.offset);
  check_rank(centered, k);

  constexpr Index kMaxRounds = 1000;
  for (Index stage = 0; stage < k; ++stage) {
    PointSet deflated = deflate(centered, model.basis);
    UnitDirection a = top_scatter_eigenvector(deflated);

    auto compute_signs = [&](const UnitDirection& dir) {
      std::vector<int> s(static_cast<std::size_t>(deflated.size()));
      for (Index i = 0; i < deflated.size(); ++i) {
        s[static_cast<std::size_t>(i)] = dir.vec().dot(deflated.point(i)) < 0.0 ? -1 : 1;
      }
      return s;
    };

    std::vector<int> signs = compute_signs(a);
    Index rounds = 0;
    TerminalStatus status = TerminalStatus::max_iters;
    for (; rounds < kMaxRounds; ++rounds) {
      UnitDirection next = pca_l1_step(a, deflated);
      auto next_signs = compute_signs(next);
      a = next;
      if (next_signs == signs) {
        status = TerminalStatus::converged;
        ++rounds;
        break;
      }
      signs = std::move(next_signs);
    }

    UnitDirection dir = reorthogonalized(a, model.basis).canonical();
    model.basis.append(dir);
    double e = energy(dir, DirectionProblem(deflated));
    model.energies.push_back(e);
    model.stages.push_back({rounds, status, 0.0, e});
  }
  return model;
}

PointSet reconstruct(const PointSet& points, const SubspaceModel& model) {
  if (points.dim() != model.dim()) throw usage_error("reconstruct: dimension mismatch");
  Matrix cols(points.dim(), points.size());
  for (Index i = 0; i < points.size(); ++i) {
    Vector y = points.point(i) - model.offset;
    Vector proj = Vector::Zero(points.dim());
    for (Index j = 0; j < model.basis.count(); ++j) {
      const Vector& b = model.basis.column(j).vec();
      proj += b * b.dot(y);
    }
    cols.col(i) = model.offset + proj;
  }
  return PointSet::from_columns(std::move(cols));
}

std::vector<double> residual_distances(const PointSet& points, const SubspaceModel& model) {
  PointSet rec = reconstruct(points, model);
  std::vector<double> out(static_cast<std::size_t>(points.size()));
  for (Index i = 0; i < points.size(); ++i) {
    out[static_cast<std::size_t>(i)] = (points.point(i) - rec.point(i)).norm();
  }
  return out;
}

Histogram distance_histogram(const PointSet& points, const SubspaceModel& model, Index bins) {
  if (bins < 1) throw usage_error("bins must be >= 1");
  Histogram h;
  h.distances = residual_distances(points, model);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double d : h.distances) h.max_distance = std::max(h.max_distance, d);
  h.bin_width = h.max_distance > 0.0 ? h.max_distance / static_cast<double>(bins) : 0.0;
  for (double d : h.distances) {
    Index bin = 0;
    if (h.max_distance > 0.0) {
      bin = static_cast<Index>(d / h.max_distance * static_cast<double>(bins));
      if (bin >= bins) bin = bins - 1;
    }
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace rsub
