#pragma once

#include <cstdint>

#include "point_set.hpp"

namespace rsub {

/// Synthetic 2D instance: n_inliers points t_j (1,1) with t_j equispaced in
/// [0,1] plus centered Gaussian noise of standard deviation noise_sigma per
/// coordinate, followed by n_outliers points below the line at the fixed
/// positions (1,-0.5), (0.9,-0.4), (0.8,-0.3), cycling. Deterministic in
/// (arguments, seed).
PointSet gen_line_outliers(Index n_inliers, Index n_outliers, double noise_sigma,
                           std::uint64_t seed);

/// Gaussian cloud, unit variance per coordinate. Deterministic in
/// (arguments, seed).
PointSet gen_gaussian(Index count, Index dim, std::uint64_t seed);

/// Lighting-drift transform: point i (1-based) becomes
/// (3/4) x_i + i/(8N) (1 + x_i), with 1 the all-ones vector.
PointSet apply_drift(const PointSet& points);

}  // namespace rsub
