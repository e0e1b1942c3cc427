#include "point_set.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace rsub {

namespace {

void check_finite(const Matrix& m) {
  if (m.rows() < 1) throw data_error("point set must have dimension >= 1");
  if (m.cols() < 1) throw data_error("point set must contain at least one point");
  if (!m.allFinite()) throw data_error("point set contains non-finite entries");
}

}  // namespace

PointSet PointSet::from_rows(const Matrix& rows) {
  Matrix cols = rows.transpose();
  check_finite(cols);
  return PointSet(std::move(cols));
}

PointSet PointSet::from_columns(Matrix cols) {
  check_finite(cols);
  return PointSet(std::move(cols));
}

PointSet PointSet::from_vectors(const std::vector<Vector>& pts) {
  if (pts.empty()) throw data_error("point set must contain at least one point");
  Matrix cols(pts.front().size(), static_cast<Index>(pts.size()));
  for (Index i = 0; i < cols.cols(); ++i) {
    if (pts[static_cast<std::size_t>(i)].size() != cols.rows()) {
      throw data_error("points have inconsistent dimensions");
    }
    cols.col(i) = pts[static_cast<std::size_t>(i)];
  }
  check_finite(cols);
  return PointSet(std::move(cols));
}

double PointSet::diameter() const {
  double best = 0.0;
  for (Index i = 0; i < size(); ++i) {
    for (Index j = i + 1; j < size(); ++j) {
      best = std::max(best, (cols_.col(i) - cols_.col(j)).norm());
    }
  }
  return best;
}

PointSet PointSet::centered(const Vector& offset) const {
  if (offset.size() != dim()) throw usage_error("offset dimension does not match data");
  return PointSet(cols_.colwise() - offset);
}

Vector PointSet::coordinate_median() const {
  Vector out(dim());
  std::vector<double> buf(static_cast<std::size_t>(size()));
  for (Index r = 0; r < dim(); ++r) {
    for (Index c = 0; c < size(); ++c) buf[static_cast<std::size_t>(c)] = cols_(r, c);
    std::sort(buf.begin(), buf.end());
    std::size_t n = buf.size();
    out[r] = (n % 2 == 1) ? buf[n / 2] : 0.5 * (buf[n / 2 - 1] + buf[n / 2]);
  }
  return out;
}

}  // namespace rsub
