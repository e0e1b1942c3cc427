#pragma once

#include <Eigen/Core>

#include <vector>

namespace rsub {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A finite collection of points in R^d, stored as the columns of a d x N
/// matrix. All entries are validated to be finite at construction.
class PointSet {
 public:
  /// From an N x d matrix with one point per row (the CSV layout).
  static PointSet from_rows(const Matrix& rows);

  /// From a d x N matrix with one point per column.
  static PointSet from_columns(Matrix cols);

  static PointSet from_vectors(const std::vector<Vector>& pts);

  Index dim() const { return cols_.rows(); }
  Index size() const { return cols_.cols(); }

  auto point(Index i) const { return cols_.col(i); }
  const Matrix& columns() const { return cols_; }

  /// Largest pairwise distance; 0 for a single point.
  double diameter() const;

  /// The set with `offset` subtracted from every point.
  PointSet centered(const Vector& offset) const;

  Vector mean() const { return cols_.rowwise().mean(); }

  /// Per-coordinate median (average of the middle pair for even N).
  Vector coordinate_median() const;

 private:
  explicit PointSet(Matrix cols) : cols_(std::move(cols)) {}

  Matrix cols_;
};

}  // namespace rsub
