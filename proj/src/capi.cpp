#include "rsub/rsub.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "csv_io.hpp"
#include "direction.hpp"
#include "errors.hpp"
#include "generate.hpp"
#include "median.hpp"
#include "model_io.hpp"
#include "subspace.hpp"
#include "validate.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

rsub_status map_kind(rsub::ErrorKind kind) {
  switch (kind) {
    case rsub::ErrorKind::usage: return RSUB_ERROR_USAGE;
    case rsub::ErrorKind::data: return RSUB_ERROR_DATA;
    case rsub::ErrorKind::io: return RSUB_ERROR_DATA;
    case rsub::ErrorKind::internal: return RSUB_ERROR_INTERNAL;
  }
  return RSUB_ERROR_INTERNAL;
}

/// Runs `fn`, translating exceptions into statuses + the thread-local
/// message. All API entry points funnel through here.
template <typename Fn>
rsub_status guarded(Fn&& fn) {
  try {
    fn();
    return RSUB_OK;
  } catch (const rsub::Error& e) {
    set_error(e.what());
    return map_kind(e.kind());
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return RSUB_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RSUB_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return RSUB_ERROR_INTERNAL;
  }
}

rsub::UnitDirection direction_from(const double* data, rsub::Index dim) {
  if (!data) throw rsub::usage_error("direction pointer is null");
  Eigen::Map<const rsub::Vector> v(data, dim);
  return rsub::UnitDirection(rsub::Vector(v));
}

rsub_terminal_status map_status(rsub::TerminalStatus s) {
  switch (s) {
    case rsub::TerminalStatus::converged: return RSUB_TERMINAL_CONVERGED;
    case rsub::TerminalStatus::anchor_local_min: return RSUB_TERMINAL_ANCHOR_LOCAL_MIN;
    case rsub::TerminalStatus::max_iters: return RSUB_TERMINAL_MAX_ITERS;
  }
  return RSUB_TERMINAL_MAX_ITERS;
}

}  // namespace

struct rsub_points {
  rsub::PointSet set;
};

struct rsub_median_result {
  rsub::MedianResult result;
};

struct rsub_model {
  rsub::SubspaceModel model;
  std::string config_json;
};

extern "C" {

const char* rsub_version(void) { return "0.1.0"; }

const char* rsub_last_error(void) { return g_last_error.c_str(); }

rsub_status rsub_points_create(const double* data, int64_t count, int64_t dim,
                               rsub_points** out) {
  return guarded([&] {
    if (!data || !out) throw rsub::usage_error("null pointer argument");
    if (count < 1 || dim < 1) throw rsub::usage_error("count and dim must be >= 1");
    Eigen::Map<const rsub::Matrix> rows(data, dim, count);  // column-major view of row-major
    *out = new rsub_points{rsub::PointSet::from_columns(rows)};
  });
}

rsub_status rsub_points_read_csv(const char* path, rsub_points** out) {
  return guarded([&] {
    if (!path || !out) throw rsub::usage_error("null pointer argument");
    *out = new rsub_points{rsub::read_points_csv(path)};
  });
}

rsub_status rsub_points_write_csv(const rsub_points* pts, const char* path) {
  return guarded([&] {
    if (!pts || !path) throw rsub::usage_error("null pointer argument");
    rsub::write_points_csv(pts->set, path);
  });
}

rsub_status rsub_points_gen_line_outliers(int64_t n_inliers, int64_t n_outliers,
                                          double noise_sigma, uint64_t seed,
                                          rsub_points** out) {
  return guarded([&] {
    if (!out) throw rsub::usage_error("null pointer argument");
    *out = new rsub_points{rsub::gen_line_outliers(n_inliers, n_outliers, noise_sigma, seed)};
  });
}

rsub_status rsub_points_gen_gaussian(int64_t count, int64_t dim, uint64_t seed,
                                     rsub_points** out) {
  return guarded([&] {
    if (!out) throw rsub::usage_error("null pointer argument");
    *out = new rsub_points{rsub::gen_gaussian(count, dim, seed)};
  });
}

rsub_status rsub_points_apply_drift(const rsub_points* pts, rsub_points** out) {
  return guarded([&] {
    if (!pts || !out) throw rsub::usage_error("null pointer argument");
    *out = new rsub_points{rsub::apply_drift(pts->set)};
  });
}

int64_t rsub_points_count(const rsub_points* pts) { return pts ? pts->set.size() : 0; }

int64_t rsub_points_dim(const rsub_points* pts) { return pts ? pts->set.dim() : 0; }

rsub_status rsub_points_get(const rsub_points* pts, int64_t index, double* out_coords) {
  return guarded([&] {
    if (!pts || !out_coords) throw rsub::usage_error("null pointer argument");
    if (index < 0 || index >= pts->set.size()) {
      throw rsub::usage_error("point index out of range");
    }
    Eigen::Map<rsub::Vector>(out_coords, pts->set.dim()) = pts->set.point(index);
  });
}

void rsub_points_free(rsub_points* pts) { delete pts; }

void rsub_median_opts_init(rsub_median_opts* opts) {
  if (!opts) return;
  opts->tolerance = 1e-10;
  opts->max_iters = 100000;
  opts->anchor_eps = -1.0;
}

rsub_status rsub_median_solve(const rsub_points* pts, const rsub_median_opts* opts,
                              rsub_median_result** out) {
  return guarded([&] {
    if (!pts || !out) throw rsub::usage_error("null pointer argument");
    rsub_median_opts defaults;
    rsub_median_opts_init(&defaults);
    const rsub_median_opts& o = opts ? *opts : defaults;
    rsub::MedianProblem problem(pts->set, o.tolerance, o.max_iters, o.anchor_eps);
    *out = new rsub_median_result{rsub::solve_median(problem)};
  });
}

rsub_status rsub_median_point(const rsub_median_result* r, double* out_coords) {
  return guarded([&] {
    if (!r || !out_coords) throw rsub::usage_error("null pointer argument");
    Eigen::Map<rsub::Vector>(out_coords, r->result.median.size()) = r->result.median;
  });
}

double rsub_median_energy(const rsub_median_result* r) { return r ? r->result.energy : 0.0; }

int64_t rsub_median_iterations(const rsub_median_result* r) {
  return r ? r->result.iterations : 0;
}

int rsub_median_stopped_at_anchor(const rsub_median_result* r) {
  return r && r->result.stopped_at_anchor ? 1 : 0;
}

int rsub_median_converged(const rsub_median_result* r) {
  return r && r->result.converged ? 1 : 0;
}

void rsub_median_free(rsub_median_result* r) { delete r; }

void rsub_fit_opts_init(rsub_fit_opts* opts) {
  if (!opts) return;
  opts->k = 1;
  opts->method = RSUB_METHOD_ROBUST_RESIDUAL;
  opts->offset = RSUB_OFFSET_GEOMETRIC_MEDIAN;
  opts->offset_value = nullptr;
  opts->tolerance = 1e-12;
  opts->max_iters = 10000;
  opts->restarts = 1;
  opts->seed = 0;
  opts->anchor_eps = 1e-9;
}

rsub_status rsub_fit(const rsub_points* pts, const rsub_fit_opts* opts, rsub_model** out) {
  return guarded([&] {
    if (!pts || !out) throw rsub::usage_error("null pointer argument");
    rsub_fit_opts defaults;
    rsub_fit_opts_init(&defaults);
    const rsub_fit_opts& o = opts ? *opts : defaults;

    rsub::OffsetPolicy policy;
    switch (o.offset) {
      case RSUB_OFFSET_GEOMETRIC_MEDIAN: policy = rsub::OffsetPolicy::median(); break;
      case RSUB_OFFSET_MEAN: policy = rsub::OffsetPolicy::mean(); break;
      case RSUB_OFFSET_NONE: policy = rsub::OffsetPolicy::none(); break;
      case RSUB_OFFSET_GIVEN: {
        if (!o.offset_value) {
          throw rsub::usage_error("offset RSUB_OFFSET_GIVEN requires offset_value");
        }
        Eigen::Map<const rsub::Vector> v(o.offset_value, pts->set.dim());
        policy = rsub::OffsetPolicy::given(rsub::Vector(v));
        break;
      }
      default: throw rsub::usage_error("unknown offset kind");
    }

    rsub::SubspaceModel model;
    switch (o.method) {
      case RSUB_METHOD_ROBUST_RESIDUAL: {
        rsub::FitConfig config{o.tolerance, o.max_iters, o.anchor_eps, o.restarts, o.seed};
        model = rsub::fit_subspace(pts->set, o.k, policy, config);
        break;
      }
      case RSUB_METHOD_CLASSICAL_PCA:
        model = rsub::classical_pca(pts->set, o.k, policy);
        break;
      case RSUB_METHOD_PCA_L1:
        model = rsub::pca_l1(pts->set, o.k, policy);
        break;
      default: throw rsub::usage_error("unknown method");
    }
    *out = new rsub_model{std::move(model), std::string()};
  });
}

int64_t rsub_model_dim(const rsub_model* m) { return m ? m->model.dim() : 0; }

int64_t rsub_model_k(const rsub_model* m) { return m ? m->model.k() : 0; }

rsub_method rsub_model_method(const rsub_model* m) {
  if (!m) return RSUB_METHOD_ROBUST_RESIDUAL;
  switch (m->model.method) {
    case rsub::Method::robust_residual: return RSUB_METHOD_ROBUST_RESIDUAL;
    case rsub::Method::classical_pca: return RSUB_METHOD_CLASSICAL_PCA;
    case rsub::Method::pca_l1: return RSUB_METHOD_PCA_L1;
  }
  return RSUB_METHOD_ROBUST_RESIDUAL;
}

rsub_status rsub_model_offset(const rsub_model* m, double* out_coords) {
  return guarded([&] {
    if (!m || !out_coords) throw rsub::usage_error("null pointer argument");
    Eigen::Map<rsub::Vector>(out_coords, m->model.offset.size()) = m->model.offset;
  });
}

rsub_status rsub_model_direction(const rsub_model* m, int64_t stage, double* out_coords) {
  return guarded([&] {
    if (!m || !out_coords) throw rsub::usage_error("null pointer argument");
    if (stage < 0 || stage >= m->model.k()) throw rsub::usage_error("stage out of range");
    const rsub::Vector& v = m->model.basis.column(stage).vec();
    Eigen::Map<rsub::Vector>(out_coords, v.size()) = v;
  });
}

double rsub_model_energy(const rsub_model* m, int64_t stage) {
  if (!m || stage < 0 || stage >= static_cast<int64_t>(m->model.energies.size())) return -1.0;
  return m->model.energies[static_cast<std::size_t>(stage)];
}

int64_t rsub_model_stage_iterations(const rsub_model* m, int64_t stage) {
  if (!m || stage < 0 || stage >= static_cast<int64_t>(m->model.stages.size())) return -1;
  return m->model.stages[static_cast<std::size_t>(stage)].iterations;
}

rsub_terminal_status rsub_model_stage_status(const rsub_model* m, int64_t stage) {
  if (!m || stage < 0 || stage >= static_cast<int64_t>(m->model.stages.size())) {
    return RSUB_TERMINAL_MAX_ITERS;
  }
  return map_status(m->model.stages[static_cast<std::size_t>(stage)].status);
}

rsub_terminal_status rsub_model_terminal_status(const rsub_model* m) {
  return m ? map_status(m->model.terminal_status()) : RSUB_TERMINAL_MAX_ITERS;
}

void rsub_model_free(rsub_model* m) { delete m; }

rsub_status rsub_model_set_config_json(rsub_model* m, const char* json_text) {
  return guarded([&] {
    if (!m) throw rsub::usage_error("null pointer argument");
    m->config_json = json_text ? json_text : "";
  });
}

const char* rsub_model_config_json(const rsub_model* m) {
  return m ? m->config_json.c_str() : "";
}

rsub_status rsub_model_write_json(const rsub_model* m, const char* path) {
  return guarded([&] {
    if (!m || !path) throw rsub::usage_error("null pointer argument");
    rsub::write_model_document({m->model, m->config_json}, path);
  });
}

rsub_status rsub_model_read_json(const char* path, rsub_model** out) {
  return guarded([&] {
    if (!path || !out) throw rsub::usage_error("null pointer argument");
    rsub::ModelDocument doc = rsub::read_model_document(path);
    *out = new rsub_model{std::move(doc.model), std::move(doc.config_json)};
  });
}

rsub_status rsub_model_reconstruct(const rsub_model* m, const rsub_points* pts,
                                   rsub_points** out) {
  return guarded([&] {
    if (!m || !pts || !out) throw rsub::usage_error("null pointer argument");
    *out = new rsub_points{rsub::reconstruct(pts->set, m->model)};
  });
}

rsub_status rsub_model_distances(const rsub_model* m, const rsub_points* pts,
                                 double* out_distances) {
  return guarded([&] {
    if (!m || !pts || !out_distances) throw rsub::usage_error("null pointer argument");
    auto d = rsub::residual_distances(pts->set, m->model);
    std::memcpy(out_distances, d.data(), d.size() * sizeof(double));
  });
}

rsub_status rsub_distance_histogram(const double* distances, int64_t count, int64_t bins,
                                    int64_t* out_counts, double* out_bin_width) {
  return guarded([&] {
    if (!distances || !out_counts) throw rsub::usage_error("null pointer argument");
    if (count < 1 || bins < 1) throw rsub::usage_error("count and bins must be >= 1");
    double max_distance = 0.0;
    for (int64_t i = 0; i < count; ++i) {
      if (!(distances[i] >= 0.0)) throw rsub::usage_error("distances must be non-negative");
      max_distance = distances[i] > max_distance ? distances[i] : max_distance;
    }
    for (int64_t b = 0; b < bins; ++b) out_counts[b] = 0;
    for (int64_t i = 0; i < count; ++i) {
      int64_t bin = 0;
      if (max_distance > 0.0) {
        bin = static_cast<int64_t>(distances[i] / max_distance * static_cast<double>(bins));
        if (bin >= bins) bin = bins - 1;
      }
      ++out_counts[bin];
    }
    if (out_bin_width) {
      *out_bin_width = max_distance > 0.0 ? max_distance / static_cast<double>(bins) : 0.0;
    }
  });
}

rsub_status rsub_write_distances_tsv(const double* distances, int64_t count,
                                     const char* path) {
  return guarded([&] {
    if (!distances || !path) throw rsub::usage_error("null pointer argument");
    if (count < 0) throw rsub::usage_error("count must be >= 0");
    std::vector<double> d(distances, distances + count);
    rsub::write_distances_tsv(d, path);
  });
}

rsub_status rsub_direction_energy(const rsub_points* pts, const double* direction,
                                  double* out_energy) {
  return guarded([&] {
    if (!pts || !out_energy) throw rsub::usage_error("null pointer argument");
    rsub::DirectionProblem problem(pts->set);
    *out_energy = rsub::energy(direction_from(direction, pts->set.dim()), problem);
  });
}

rsub_status rsub_oracle_direction_2d(const rsub_points* pts, int64_t resolution,
                                     int64_t refinement_rounds, int64_t refinement_factor,
                                     double* out_angle, double* out_energy) {
  return guarded([&] {
    if (!pts || !out_angle || !out_energy) throw rsub::usage_error("null pointer argument");
    rsub::GridSpec grid{resolution, refinement_rounds, refinement_factor};
    auto res = rsub::oracle_direction_2d(pts->set, grid);
    *out_angle = res.angle;
    *out_energy = res.energy;
  });
}

rsub_status rsub_oracle_line_pairs_2d(const rsub_points* pts, int64_t* out_i, int64_t* out_j,
                                      double* out_energy) {
  return guarded([&] {
    if (!pts || !out_i || !out_j || !out_energy) {
      throw rsub::usage_error("null pointer argument");
    }
    auto res = rsub::oracle_line_pairs_2d(pts->set);
    *out_i = res.i;
    *out_j = res.j;
    *out_energy = res.energy;
  });
}

rsub_status rsub_steiner_check(const rsub_points* triangle, double tolerance,
                               double* out_distance, int* out_passed) {
  return guarded([&] {
    if (!triangle || !out_distance || !out_passed) {
      throw rsub::usage_error("null pointer argument");
    }
    auto report = rsub::steiner_check(triangle->set, tolerance);
    *out_distance = report.point_line_distance;
    *out_passed = report.line_misses_median ? 1 : 0;
  });
}

rsub_status rsub_fd_gradient_check(const rsub_points* pts, const double* direction,
                                   double increment, uint64_t seed,
                                   double* out_max_rel_error) {
  return guarded([&] {
    if (!pts || !out_max_rel_error) throw rsub::usage_error("null pointer argument");
    rsub::DirectionProblem problem(pts->set);
    *out_max_rel_error = rsub::fd_gradient_check(direction_from(direction, pts->set.dim()),
                                                 problem, increment, 10, seed);
  });
}

rsub_status rsub_one_sided_check(const rsub_points* pts, int64_t anchor_index, int sign,
                                 const double* h, double* out_analytic, double* out_numeric) {
  return guarded([&] {
    if (!pts || !h || !out_analytic || !out_numeric) {
      throw rsub::usage_error("null pointer argument");
    }
    if (anchor_index < 0 || anchor_index >= pts->set.size()) {
      throw rsub::usage_error("anchor index out of range");
    }
    if (sign != 1 && sign != -1) throw rsub::usage_error("sign must be +1 or -1");
    rsub::DirectionProblem problem(pts->set);
    rsub::Vector y = pts->set.point(anchor_index);
    rsub::UnitDirection a = rsub::sphere_project(static_cast<double>(sign) * y);
    Eigen::Map<const rsub::Vector> hv(h, pts->set.dim());
    auto res = rsub::one_sided_derivative_check(a, rsub::Vector(hv), problem);
    *out_analytic = res.analytic;
    *out_numeric = res.numeric;
  });
}

rsub_status rsub_local_min_certificate(const rsub_points* pts, const double* direction,
                                       int64_t samples, uint64_t seed,
                                       int* out_is_strict_min) {
  return guarded([&] {
    if (!pts || !out_is_strict_min) throw rsub::usage_error("null pointer argument");
    rsub::DirectionProblem problem(pts->set);
    bool ok = rsub::local_min_certificate(direction_from(direction, pts->set.dim()), problem,
                                          samples, seed);
    *out_is_strict_min = ok ? 1 : 0;
  });
}

}  // extern "C"
