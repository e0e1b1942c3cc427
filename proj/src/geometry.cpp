#include "geometry.hpp"

#include <cmath>
#include <cstdlib>

#include "errors.hpp"

namespace rsub {

namespace {
constexpr double kUnitSlack = 1e-6;
constexpr double kUnderflow = 1e-300;
constexpr double kOrthoTol = 1e-10;
}  // namespace

UnitDirection::UnitDirection(Vector v) : v_(std::move(v)) {
  if (v_.size() < 1) throw usage_error("direction must have dimension >= 1");
  if (!v_.allFinite()) throw usage_error("direction has non-finite entries");
  double n = v_.norm();
  if (std::abs(n - 1.0) > kUnitSlack) {
    throw usage_error("direction norm " + std::to_string(n) + " is not within 1e-6 of 1");
  }
  // skip the division when already unit to working precision, so values
  // that round-trip through decimal text keep their exact bits
  if (std::abs(n - 1.0) > 1e-12) v_ /= n;
}

UnitDirection UnitDirection::negated() const { return UnitDirection(-v_, unchecked_tag{}); }

UnitDirection UnitDirection::canonical() const {
  Index best = 0;
  for (Index i = 1; i < v_.size(); ++i) {
    if (std::abs(v_[i]) > std::abs(v_[best])) best = i;
  }
  return v_[best] < 0.0 ? negated() : *this;
}

UnitDirection sphere_project(const Vector& v) {
  double n = v.norm();
  if (!std::isfinite(n) || n <= kUnderflow) {
    throw usage_error("cannot normalize a degenerate direction (norm <= 1e-300)");
  }
  return UnitDirection(v / n, UnitDirection::unchecked_tag{});
}

Vector project_off_direction(const Vector& y, const UnitDirection& a) {
  if (y.size() != a.dim()) {
    throw usage_error("project_off_direction: dimension mismatch (" + std::to_string(y.size()) +
                      " vs " + std::to_string(a.dim()) + ")");
  }
  return y - a.vec() * a.vec().dot(y);
}

DirectionBasis::DirectionBasis(const std::vector<UnitDirection>& columns) {
  for (const auto& c : columns) append(c);
}

void DirectionBasis::append(const UnitDirection& a) {
  for (const auto& c : columns_) {
    if (c.dim() != a.dim()) throw usage_error("basis columns have mismatched dimensions");
    if (std::abs(c.vec().dot(a.vec())) > kOrthoTol) {
      throw usage_error("basis column is not orthogonal to the existing columns");
    }
  }
  columns_.push_back(a);
}

Vector DirectionBasis::project_off(const Vector& v) const {
  Vector r = v;
  for (const auto& c : columns_) r -= c.vec() * c.vec().dot(r);
  return r;
}

Vector project_off_basis(const Vector& y, const DirectionBasis& basis) {
  if (!basis.empty() && basis.column(0).dim() != y.size()) {
    throw usage_error("project_off_basis: dimension mismatch");
  }
  return basis.project_off(y);
}

std::vector<Vector> orthonormal_span_basis(const PointSet& points, double rel_tol) {
  const Index n = points.size();
  Matrix work = points.columns();
  double max_norm = 0.0;
  for (Index i = 0; i < n; ++i) max_norm = std::max(max_norm, work.col(i).norm());
  const double threshold = rel_tol * max_norm;

  std::vector<Vector> basis;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (static_cast<Index>(basis.size()) < points.dim()) {
    Index pivot = -1;
    double pivot_norm = threshold;
    for (Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      double nn = work.col(i).norm();
      if (nn > pivot_norm) {
        pivot_norm = nn;
        pivot = i;
      }
    }
    if (pivot < 0) break;
    used[static_cast<std::size_t>(pivot)] = true;
    Vector q = work.col(pivot) / pivot_norm;
    // one re-orthogonalization pass stabilizes the basis at small scales
    for (const auto& b : basis) q -= b * b.dot(q);
    double qn = q.norm();
    if (qn <= threshold) continue;
    q /= qn;
    basis.push_back(q);
    for (Index i = 0; i < n; ++i) {
      if (!used[static_cast<std::size_t>(i)]) work.col(i) -= q * q.dot(work.col(i));
    }
  }
  return basis;
}

Index span_rank(const PointSet& points, double rel_tol) {
  return static_cast<Index>(orthonormal_span_basis(points, rel_tol).size());
}

double span_residual(const Vector& v, const PointSet& points, double rel_tol) {
  if (v.size() != points.dim()) throw usage_error("span_residual: dimension mismatch");
  Vector r = v;
  for (const auto& b : orthonormal_span_basis(points, rel_tol)) r -= b * b.dot(r);
  return r.norm();
}

}  // namespace rsub
