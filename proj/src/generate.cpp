#include "generate.hpp"

#include "errors.hpp"
#include "rng.hpp"

namespace rsub {

PointSet gen_line_outliers(Index n_inliers, Index n_outliers, double noise_sigma,
                           std::uint64_t seed) {
  if (n_inliers < 0 || n_outliers < 0) throw usage_error("point counts must be >= 0");
  if (n_inliers + n_outliers < 1) throw usage_error("at least one point must be generated");
  if (noise_sigma < 0.0) throw usage_error("noise_sigma must be >= 0");

  Matrix cols(2, n_inliers + n_outliers);
  Rng rng(seed, "gen_line_outliers");
  for (Index j = 0; j < n_inliers; ++j) {
    double t = n_inliers == 1 ? 0.5
                              : static_cast<double>(j) / static_cast<double>(n_inliers - 1);
    cols(0, j) = t + noise_sigma * rng.gaussian();
    cols(1, j) = t + noise_sigma * rng.gaussian();
  }
  static constexpr double kOutlierX[3] = {1.0, 0.9, 0.8};
  static constexpr double kOutlierY[3] = {-0.5, -0.4, -0.3};
  for (Index m = 0; m < n_outliers; ++m) {
    cols(0, n_inliers + m) = kOutlierX[m % 3];
    cols(1, n_inliers + m) = kOutlierY[m % 3];
  }
  return PointSet::from_columns(std::move(cols));
}

PointSet gen_gaussian(Index count, Index dim, std::uint64_t seed) {
  if (count < 1 || dim < 1) throw usage_error("gen_gaussian requires count >= 1 and dim >= 1");
  Rng rng(seed, "gen_gaussian");
  Matrix cols(dim, count);
  for (Index j = 0; j < count; ++j) {
    for (Index r = 0; r < dim; ++r) cols(r, j) = rng.gaussian();
  }
  return PointSet::from_columns(std::move(cols));
}

PointSet apply_drift(const PointSet& points) {
  const double n = static_cast<double>(points.size());
  const Vector ones = Vector::Ones(points.dim());
  Matrix cols(points.dim(), points.size());
  for (Index i = 0; i < points.size(); ++i) {
    double c = static_cast<double>(i + 1) / (8.0 * n);
    cols.col(i) = 0.75 * points.point(i) + c * (ones + points.point(i));
  }
  return PointSet::from_columns(std::move(cols));
}

}  // namespace rsub
