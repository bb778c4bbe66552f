#include "polywalk.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "polywalk/diagnostics.hpp"
#include "polywalk/validate.hpp"

// Handle types are thin wrappers; they must live at namespace scope to match
// the forward declarations in the C header.
struct pw_polytope {
  pw::Polytope p;
};
struct pw_trajectory {
  pw::Trajectory t;
};

namespace {

thread_local std::string t_last_error;

pw_status status_of(pw::Errc c) {
  switch (c) {
    case pw::Errc::DimensionMismatch: return PW_ERR_DIMENSION_MISMATCH;
    case pw::Errc::RankDeficient: return PW_ERR_RANK_DEFICIENT;
    case pw::Errc::EmptyInterior: return PW_ERR_EMPTY_INTERIOR;
    case pw::Errc::NotInterior: return PW_ERR_NOT_INTERIOR;
    case pw::Errc::UnboundedDirection: return PW_ERR_UNBOUNDED_DIRECTION;
    case pw::Errc::DegeneratePair: return PW_ERR_DEGENERATE_PAIR;
    case pw::Errc::NoConvergence: return PW_ERR_NO_CONVERGENCE;
    case pw::Errc::FactorizationFailure: return PW_ERR_FACTORIZATION_FAILURE;
    case pw::Errc::SingularSystem: return PW_ERR_SINGULAR_SYSTEM;
    case pw::Errc::BadParams: return PW_ERR_BAD_PARAMS;
    case pw::Errc::RejectionStall: return PW_ERR_REJECTION_STALL;
    case pw::Errc::TooFewSamples: return PW_ERR_TOO_FEW_SAMPLES;
    case pw::Errc::DegenerateInput: return PW_ERR_DEGENERATE_INPUT;
    case pw::Errc::NoMove: return PW_ERR_NO_MOVE;
    case pw::Errc::Io: return PW_ERR_IO;
  }
  return PW_ERR_INTERNAL;
}

template <typename F>
pw_status guarded(F&& body) {
  try {
    return body();
  } catch (const pw::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PW_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return PW_ERR_INTERNAL;
  }
}

pw_status bad_params(const char* msg) {
  t_last_error = msg;
  return PW_ERR_BAD_PARAMS;
}

pw::WalkConfig to_config(const pw_walk_config& c) {
  if (c.kind < PW_WALK_DIKIN || c.kind > PW_WALK_JOHN)
    pw::fail(pw::Errc::BadParams, "walk config: unknown kind");
  pw::WalkConfig cfg;
  cfg.kind = static_cast<pw::MetricKind>(c.kind);
  cfg.r = c.r;
  if (c.john_tol > 0) cfg.john_tol = c.john_tol;
  if (c.lazy_prob >= 0) cfg.lazy_prob = c.lazy_prob;
  if (c.scale_override > 0) cfg.scale_override = c.scale_override;
  if (!(cfg.r > 0)) pw::fail(pw::Errc::BadParams, "walk config: r must be > 0");
  if (!(cfg.lazy_prob >= 0 && cfg.lazy_prob <= 1))
    pw::fail(pw::Errc::BadParams, "walk config: lazy_prob outside [0,1]");
  return cfg;
}

Eigen::VectorXd start_point(const pw::Polytope& P, const double* x0) {
  if (!x0) return pw::analytic_center(P);
  return Eigen::Map<const Eigen::VectorXd>(x0, P.dim());
}

std::ofstream open_out(const char* path) {
  std::ofstream out(path);
  if (!out) pw::fail(pw::Errc::Io, std::string("cannot open for writing: ") + path);
  return out;
}

}  // namespace

extern "C" {

const char* pw_status_name(pw_status s) {
  switch (s) {
    case PW_OK: return "ok";
    case PW_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case PW_ERR_RANK_DEFICIENT: return "rank-deficient";
    case PW_ERR_EMPTY_INTERIOR: return "empty-interior";
    case PW_ERR_NOT_INTERIOR: return "not-interior";
    case PW_ERR_UNBOUNDED_DIRECTION: return "unbounded-direction";
    case PW_ERR_DEGENERATE_PAIR: return "degenerate-pair";
    case PW_ERR_NO_CONVERGENCE: return "no-convergence";
    case PW_ERR_FACTORIZATION_FAILURE: return "factorization-failure";
    case PW_ERR_SINGULAR_SYSTEM: return "singular-system";
    case PW_ERR_BAD_PARAMS: return "bad-params";
    case PW_ERR_REJECTION_STALL: return "rejection-stall";
    case PW_ERR_TOO_FEW_SAMPLES: return "too-few-samples";
    case PW_ERR_DEGENERATE_INPUT: return "degenerate-input";
    case PW_ERR_NO_MOVE: return "no-move";
    case PW_ERR_IO: return "io";
    case PW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pw_last_error(void) { return t_last_error.c_str(); }

pw_status pw_polytope_create(const double* A, const double* b, int64_t m,
                             int64_t d, pw_polytope** out) {
  if (!A || !b || !out) return bad_params("pw_polytope_create: null argument");
  if (m < 1 || d < 1) return bad_params("pw_polytope_create: m, d must be >= 1");
  return guarded([&] {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        Am(A, m, d);
    Eigen::Map<const Eigen::VectorXd> bm(b, m);
    *out = new pw_polytope{pw::make_polytope(Am, bm)};
    return PW_OK;
  });
}

pw_status pw_polytope_generate(const char* family, int64_t m, int64_t d,
                               uint64_t seed, pw_polytope** out) {
  if (!family || !out) return bad_params("pw_polytope_generate: null argument");
  return guarded([&] {
    *out = new pw_polytope{
        pw::generate(pw::family_from_string(family), m, d, seed)};
    return PW_OK;
  });
}

pw_status pw_polytope_save(const pw_polytope* P, const char* path) {
  if (!P || !path) return bad_params("pw_polytope_save: null argument");
  return guarded([&] {
    pw::save_polytope_file(P->p, path);
    return PW_OK;
  });
}

pw_status pw_polytope_load(const char* path, pw_polytope** out) {
  if (!path || !out) return bad_params("pw_polytope_load: null argument");
  return guarded([&] {
    *out = new pw_polytope{pw::load_polytope_file(path)};
    return PW_OK;
  });
}

void pw_polytope_free(pw_polytope* P) { delete P; }

int64_t pw_polytope_rows(const pw_polytope* P) { return P ? P->p.rows() : 0; }
int64_t pw_polytope_dim(const pw_polytope* P) { return P ? P->p.dim() : 0; }

pw_status pw_polytope_contains(const pw_polytope* P, const double* x,
                               int* out) {
  if (!P || !x || !out) return bad_params("pw_polytope_contains: null argument");
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> xm(x, P->p.dim());
    *out = pw::contains_interior(P->p, xm) ? 1 : 0;
    return PW_OK;
  });
}

pw_status pw_analytic_center(const pw_polytope* P, double* out) {
  if (!P || !out) return bad_params("pw_analytic_center: null argument");
  return guarded([&] {
    Eigen::VectorXd c = pw::analytic_center(P->p);
    Eigen::Map<Eigen::VectorXd>(out, c.size()) = c;
    return PW_OK;
  });
}

pw_status pw_run_chain(const pw_polytope* P, const pw_walk_config* cfg,
                       const double* x0, uint64_t steps, uint64_t seed,
                       uint64_t thin, pw_trajectory** out) {
  if (!P || !cfg || !out) return bad_params("pw_run_chain: null argument");
  return guarded([&] {
    *out = new pw_trajectory{pw::run_chain(P->p, to_config(*cfg),
                                           start_point(P->p, x0), steps, seed,
                                           thin == 0 ? 1 : thin)};
    return PW_OK;
  });
}

void pw_trajectory_free(pw_trajectory* t) { delete t; }

int64_t pw_trajectory_len(const pw_trajectory* t) {
  return t ? t->t.points.rows() : 0;
}
int64_t pw_trajectory_dim(const pw_trajectory* t) {
  return t ? t->t.points.cols() : 0;
}

pw_status pw_trajectory_points(const pw_trajectory* t, double* out) {
  if (!t || !out) return bad_params("pw_trajectory_points: null argument");
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(out, t->t.points.rows(),
                                             t->t.points.cols()) = t->t.points;
  return PW_OK;
}

pw_status pw_trajectory_steps(const pw_trajectory* t, uint64_t* out) {
  if (!t || !out) return bad_params("pw_trajectory_steps: null argument");
  std::memcpy(out, t->t.steps.data(), t->t.steps.size() * sizeof(uint64_t));
  return PW_OK;
}

pw_status pw_trajectory_stats(const pw_trajectory* t, uint64_t counts[4]) {
  if (!t || !counts) return bad_params("pw_trajectory_stats: null argument");
  counts[0] = t->t.stats.lazy;
  counts[1] = t->t.stats.infeasible;
  counts[2] = t->t.stats.mh_reject;
  counts[3] = t->t.stats.accept;
  return PW_OK;
}

pw_status pw_trajectory_write_csv(const pw_trajectory* t, const char* path) {
  if (!t || !path) return bad_params("pw_trajectory_write_csv: null argument");
  return guarded([&] {
    auto out = open_out(path);
    pw::write_trajectory_csv(t->t, out);
    return PW_OK;
  });
}

pw_status pw_trajectory_stats_json(const pw_trajectory* t, const char* path) {
  if (!t || !path) return bad_params("pw_trajectory_stats_json: null argument");
  return guarded([&] {
    auto out = open_out(path);
    pw::write_stats_json(t->t.stats, out);
    return PW_OK;
  });
}

pw_status pw_tune_radius(const pw_polytope* P, const pw_walk_config* cfg,
                         const double* x0, double target_accept, uint64_t seed,
                         double* r_out, double* acceptance_out,
                         int* converged) {
  if (!P || !cfg) return bad_params("pw_tune_radius: null argument");
  return guarded([&] {
    pw::TuneResult r = pw::tune_radius(P->p, to_config(*cfg),
                                       start_point(P->p, x0), target_accept,
                                       seed);
    if (r_out) *r_out = r.r;
    if (acceptance_out) *acceptance_out = r.acceptance;
    if (converged) *converged = r.converged ? 1 : 0;
    return PW_OK;
  });
}

pw_status pw_hybrid_dikin_start(const pw_polytope* P,
                                const pw_walk_config* target_cfg,
                                const double* x0, uint64_t seed, double* x_out,
                                uint64_t* k1_out) {
  if (!P || !target_cfg || !x_out)
    return bad_params("pw_hybrid_dikin_start: null argument");
  return guarded([&] {
    pw::Rng rng(seed);
    pw::HybridStart h = pw::hybrid_dikin_start(P->p, to_config(*target_cfg),
                                               start_point(P->p, x0), rng);
    Eigen::Map<Eigen::VectorXd>(x_out, h.state.x.size()) = h.state.x;
    if (k1_out) *k1_out = h.k1;
    return PW_OK;
  });
}

uint64_t pw_chain_seed(uint64_t master, uint64_t index) {
  return pw::chain_seed(master, index);
}

pw_status pw_warm_start(const pw_polytope* P, double sigma, uint64_t seed,
                        double* x_out, double* m_bound, double* m_stderr) {
  if (!P) return bad_params("pw_warm_start: null argument");
  return guarded([&] {
    pw::Rng rng(seed);
    auto [x, ws] = pw::warm_start(P->p, sigma, rng);
    if (x_out) Eigen::Map<Eigen::VectorXd>(x_out, x.size()) = x;
    if (m_bound) *m_bound = ws.m_bound;
    if (m_stderr) *m_stderr = ws.m_bound_stderr;
    return PW_OK;
  });
}

pw_status pw_target_set_level(int64_t d, double* out) {
  if (!out) return bad_params("pw_target_set_level: null argument");
  return guarded([&] {
    *out = pw::target_set_level(d);
    return PW_OK;
  });
}

pw_status pw_box_sigma_for_warmness(int64_t d, double m_target, double* out) {
  if (!out) return bad_params("pw_box_sigma_for_warmness: null argument");
  return guarded([&] {
    *out = pw::box_sigma_for_warmness(d, m_target);
    return PW_OK;
  });
}

pw_status pw_khat_mix(const pw_polytope* P, const pw_walk_config* cfg,
                      uint64_t ensemble_size, double sigma, double threshold,
                      uint64_t max_k, uint64_t seed, int threads,
                      pw_mix_result* out) {
  if (!P || !cfg || !out) return bad_params("pw_khat_mix: null argument");
  return guarded([&] {
    pw::MixResult r = pw::khat_mix(P->p, to_config(*cfg), ensemble_size, sigma,
                                   threshold, max_k, seed, threads);
    out->n = r.n;
    out->d = r.d;
    out->khat = r.khat;
    out->threshold = r.threshold;
    out->replications = r.replications;
    out->target_set_level = r.target_set_level;
    out->not_mixed = r.not_mixed ? 1 : 0;
    out->deficit_at_khat = r.deficit_at_khat;
    return PW_OK;
  });
}

pw_status pw_grid_tv_to_uniform(const pw_polytope* P, const double* samples,
                                int64_t n, int grid_n, double* out) {
  if (!P || !samples || !out)
    return bad_params("pw_grid_tv_to_uniform: null argument");
  return guarded([&] {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        s(samples, n, 2);
    *out = pw::grid_tv_to_uniform(P->p, s, grid_n);
    return PW_OK;
  });
}

pw_status pw_fit_loglog_slope(const double* xs, const double* ys, int64_t n,
                              double* slope, double* intercept, double* r2) {
  if (!xs || !ys) return bad_params("pw_fit_loglog_slope: null argument");
  return guarded([&] {
    pw::SlopeFit f =
        pw::fit_loglog_slope(Eigen::Map<const Eigen::VectorXd>(xs, n),
                             Eigen::Map<const Eigen::VectorXd>(ys, n));
    if (slope) *slope = f.slope;
    if (intercept) *intercept = f.intercept;
    if (r2) *r2 = f.r2;
    return PW_OK;
  });
}

pw_status pw_random_projection_trace(const double* points, int64_t n,
                                     int64_t d, uint64_t direction_seed,
                                     double* out) {
  if (!points || !out)
    return bad_params("pw_random_projection_trace: null argument");
  return guarded([&] {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        p(points, n, d);
    Eigen::VectorXd trace = pw::random_projection_trace(p, direction_seed);
    Eigen::Map<Eigen::VectorXd>(out, trace.size()) = trace;
    return PW_OK;
  });
}

pw_status pw_validate(int n_instances, uint64_t seed, const char* report_path,
                      int* violations_out) {
  if (!violations_out) return bad_params("pw_validate: null argument");
  return guarded([&] {
    if (report_path) {
      auto out = open_out(report_path);
      *violations_out = pw::run_invariant_suite(n_instances, seed, out);
    } else {
      std::ostringstream sink;
      *violations_out = pw::run_invariant_suite(n_instances, seed, sink);
    }
    return PW_OK;
  });
}

}  // extern "C"
