#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "direction.hpp"
#include "median.hpp"

namespace rsub {

enum class OffsetKind { geometric_median, mean, given, none };
enum class Method { robust_residual, classical_pca, pca_l1 };

const char* to_string(OffsetKind k);
const char* to_string(Method m);

/// How the affine offset b is chosen before extracting directions. The
/// correct offset for the robust model is an open problem, so the policy is
/// an explicit user-facing parameter; the geometric median matches the
/// paper-style default for the robust methods.
struct OffsetPolicy {
  OffsetKind kind = OffsetKind::geometric_median;
  std::optional<Vector> value;  // required iff kind == given

  static OffsetPolicy median() { return {OffsetKind::geometric_median, std::nullopt}; }
  static OffsetPolicy mean() { return {OffsetKind::mean, std::nullopt}; }
  static OffsetPolicy none() { return {OffsetKind::none, std::nullopt}; }
  static OffsetPolicy given(Vector v) { return {OffsetKind::given, std::move(v)}; }
};

Vector compute_offset(const PointSet& points, const OffsetPolicy& policy);

struct StageSummary {
  Index iterations = 0;
  TerminalStatus status = TerminalStatus::converged;
  double final_step_norm = 0.0;
  double energy = 0.0;
};

/// Fitted affine subspace: offset b plus an ordered orthonormal basis of
/// directions a_1..a_K with the residual energy E recorded at each
/// extraction stage (for every method, so stage energies are comparable
/// across methods).
struct SubspaceModel {
  Method method = Method::robust_residual;
  Vector offset;
  DirectionBasis basis;
  std::vector<double> energies;
  std::vector<StageSummary> stages;

  Index k() const { return basis.count(); }
  Index dim() const { return offset.size(); }

  /// max_iters if any stage hit the cap, else the last stage's status.
  TerminalStatus terminal_status() const;
};

struct FitConfig {
  double tolerance = 1e-12;
  Index max_iters = 10000;
  double anchor_eps = 1e-9;
  Index restarts = 1;       // first run uses the PCA init, the rest are random
  std::uint64_t seed = 0;
};

/// Successive residual-minimizing directions by deflation: at each stage the
/// data are projected off the basis found so far and one direction is fitted
/// with the Weiszfeld-like iteration. Requested K must not exceed the rank
/// of the centered data.
SubspaceModel fit_subspace(const PointSet& points, Index k, const OffsetPolicy& policy,
                           const FitConfig& config);

/// Classical successive PCA: top eigenvectors of the deflated scatter
/// matrix by power iteration. Default offset policy is the mean.
SubspaceModel classical_pca(const PointSet& points, Index k,
                            const OffsetPolicy& policy = OffsetPolicy::mean());

/// Greedy L1 variance maximization: per stage, iterate
/// a <- normalize(sum_i sign(<a, y_i>) y_i) until the sign pattern is
/// stable; ties <a,y_i> = 0 count as +1. Capped at 1000 sign-flip rounds.
SubspaceModel pca_l1(const PointSet& points, Index k,
                     const OffsetPolicy& policy = OffsetPolicy::median());

/// b + B B^T (x - b) per point.
PointSet reconstruct(const PointSet& points, const SubspaceModel& model);

/// ||x_i - x_{i,rec}|| per point.
std::vector<double> residual_distances(const PointSet& points, const SubspaceModel& model);

struct Histogram {
  std::vector<std::int64_t> counts;
  double bin_width = 0.0;
  double max_distance = 0.0;
  std::vector<double> distances;
};

/// Counts of the residual distances over `bins` equal-width bins spanning
/// [0, max distance]; the raw distances ride along for thresholding.
Histogram distance_histogram(const PointSet& points, const SubspaceModel& model, Index bins);

/// Top eigenvector of sum_i z_i z_i^T by power iteration, with the
/// eigen-residual ||S v - lambda v|| driven below rel_residual * lambda.
UnitDirection top_scatter_eigenvector(const PointSet& points, double rel_residual = 1e-9,
                                      Index* iterations_out = nullptr);

/// sum_i |<a, y_i>|, the greedy L1 objective.
double l1_objective(const UnitDirection& a, const PointSet& points);

/// One fixed-point round of the greedy L1 iteration (sign ties count as +1).
UnitDirection pca_l1_step(const UnitDirection& a, const PointSet& points);

}  // namespace rsub
