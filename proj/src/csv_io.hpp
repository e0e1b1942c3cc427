#pragma once

#include <string>
#include <vector>

#include "point_set.hpp"

namespace rsub {

/// Reads a point set from CSV, one point per row. A single non-numeric
/// first row is treated as a header and skipped; blank lines are ignored.
/// Ragged rows and non-finite values are rejected with 1-based row/column
/// diagnostics.
PointSet read_points_csv(const std::string& path);

/// Same parser on an in-memory buffer; `source` names the input in errors.
PointSet parse_points_csv(const std::string& text, const std::string& source);

/// One point per row, shortest round-trip decimal fields.
void write_points_csv(const PointSet& points, const std::string& path);
std::string points_to_csv(const PointSet& points);

/// Two-column TSV (1-based index, distance), for external plotting.
void write_distances_tsv(const std::vector<double>& distances, const std::string& path);
std::string distances_to_tsv(const std::vector<double>& distances);

}  // namespace rsub
