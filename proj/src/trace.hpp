#pragma once

#include <optional>
#include <vector>

#include "point_set.hpp"

namespace rsub {

enum class TerminalStatus { converged, anchor_local_min, max_iters };

const char* to_string(TerminalStatus s);

/// Data indices aligned with the current iterate (the set K), together with
/// alpha = sum of the norms of the anchored points.
struct AnchorInfo {
  std::vector<Index> indices;
  double alpha = 0.0;
};

/// One record per iteration: the energy at the new iterate, the step norm
/// that produced it, and the anchor set that dispatched the step (if any).
/// A terminating anchor test appends a final record with step_norm 0.
struct TraceRecord {
  double energy = 0.0;
  double step_norm = 0.0;
  std::optional<AnchorInfo> anchor;
};

struct FitTrace {
  double initial_energy = 0.0;
  std::vector<TraceRecord> records;
  TerminalStatus status = TerminalStatus::max_iters;

  double final_energy() const {
    return records.empty() ? initial_energy : records.back().energy;
  }
  double final_step_norm() const {
    return records.empty() ? 0.0 : records.back().step_norm;
  }
  Index iterations() const { return static_cast<Index>(records.size()); }
};

inline const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::converged: return "converged";
    case TerminalStatus::anchor_local_min: return "anchor_local_min";
    case TerminalStatus::max_iters: return "max_iters";
  }
  return "unknown";
}

}  // namespace rsub
