#pragma once

#include <vector>

#include "point_set.hpp"

namespace rsub {

/// A direction on the unit sphere S^{d-1}. Construction renormalizes inputs
/// whose norm is within 1e-6 of 1 and rejects anything farther off, so
/// accumulated round-off is tolerated but logic errors are not masked.
class UnitDirection {
 public:
  explicit UnitDirection(Vector v);

  const Vector& vec() const { return v_; }
  Index dim() const { return v_.size(); }
  double operator[](Index i) const { return v_[i]; }

  UnitDirection negated() const;

  /// Flips the sign, if needed, so the first coordinate of largest magnitude
  /// is positive. E is even in the direction, so fitted directions are
  /// reported in this canonical form.
  UnitDirection canonical() const;

 private:
  struct unchecked_tag {};
  UnitDirection(Vector v, unchecked_tag) : v_(std::move(v)) {}

  friend UnitDirection sphere_project(const Vector&);

  Vector v_;
};

/// v / ||v||. Rejects vectors with norm at or below the underflow threshold
/// (1e-300) as degenerate.
UnitDirection sphere_project(const Vector& v);

/// P_a y = y - a <a, y>, the component of y orthogonal to a.
Vector project_off_direction(const Vector& y, const UnitDirection& a);

/// An ordered orthonormal list of directions (a point on the Stiefel
/// manifold S_{d,K}); may be empty. Orthonormality is enforced at
/// construction and on every append: pairwise inner products must have
/// magnitude <= 1e-10.
class DirectionBasis {
 public:
  DirectionBasis() = default;
  explicit DirectionBasis(const std::vector<UnitDirection>& columns);

  void append(const UnitDirection& a);

  Index count() const { return static_cast<Index>(columns_.size()); }
  bool empty() const { return columns_.empty(); }
  const UnitDirection& column(Index k) const { return columns_[static_cast<std::size_t>(k)]; }

  /// Gram-Schmidt of `v` against the stored columns; returns the residual
  /// (not normalized). With an empty basis this is the identity.
  Vector project_off(const Vector& v) const;

 private:
  std::vector<UnitDirection> columns_;
};

/// y minus its orthogonal projection onto span(B).
Vector project_off_basis(const Vector& y, const DirectionBasis& basis);

/// Orthonormal basis of span{points} by column-pivoted modified Gram-Schmidt
/// with re-orthogonalization. Columns whose residual norm falls below
/// rel_tol times the largest input norm are treated as dependent.
std::vector<Vector> orthonormal_span_basis(const PointSet& points, double rel_tol = 1e-12);

Index span_rank(const PointSet& points, double rel_tol = 1e-12);

/// Norm of the component of v orthogonal to span{points}.
double span_residual(const Vector& v, const PointSet& points, double rel_tol = 1e-12);

}  // namespace rsub
