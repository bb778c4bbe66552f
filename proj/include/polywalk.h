/* polywalk: uniform sampling from convex polytopes {x : Ax <= b} via
 * interior-point random walks (Dikin / Vaidya / John), with mixing
 * diagnostics. C surface over the C++ core: opaque handles, status codes,
 * no exceptions across the boundary.
 *
 * Conventions
 *   - matrices are row-major doubles; callers own every buffer they pass
 *   - every fallible call returns pw_status; PW_OK is 0
 *   - on failure, pw_last_error() returns a thread-local message that stays
 *     valid until the next failing call on the same thread
 *   - handles returned by the _create, _generate, _load and pw_run_chain
 *     calls are freed with the matching _free; freeing NULL is a no-op
 */
#ifndef POLYWALK_H
#define POLYWALK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pw_status {
  PW_OK = 0,
  PW_ERR_DIMENSION_MISMATCH,
  PW_ERR_RANK_DEFICIENT,
  PW_ERR_EMPTY_INTERIOR,
  PW_ERR_NOT_INTERIOR,
  PW_ERR_UNBOUNDED_DIRECTION,
  PW_ERR_DEGENERATE_PAIR,
  PW_ERR_NO_CONVERGENCE,
  PW_ERR_FACTORIZATION_FAILURE,
  PW_ERR_SINGULAR_SYSTEM,
  PW_ERR_BAD_PARAMS,
  PW_ERR_REJECTION_STALL,
  PW_ERR_TOO_FEW_SAMPLES,
  PW_ERR_DEGENERATE_INPUT,
  PW_ERR_NO_MOVE,
  PW_ERR_IO,
  PW_ERR_INTERNAL
} pw_status;

const char* pw_status_name(pw_status s);
const char* pw_last_error(void);

/* ---- polytopes ---------------------------------------------------------- */

typedef struct pw_polytope pw_polytope;

/* A is m x d row-major. Validates full column rank and a nonempty interior. */
pw_status pw_polytope_create(const double* A, const double* b, int64_t m,
                             int64_t d, pw_polytope** out);

/* family: "hypercube_repeated" | "random_symmetric_2d" | "regular_polygon" */
pw_status pw_polytope_generate(const char* family, int64_t m, int64_t d,
                               uint64_t seed, pw_polytope** out);

pw_status pw_polytope_save(const pw_polytope* P, const char* path);
pw_status pw_polytope_load(const char* path, pw_polytope** out);
void pw_polytope_free(pw_polytope* P);

int64_t pw_polytope_rows(const pw_polytope* P);
int64_t pw_polytope_dim(const pw_polytope* P);

/* *out = 1 iff x (length d) is strictly interior */
pw_status pw_polytope_contains(const pw_polytope* P, const double* x, int* out);

/* out has length d */
pw_status pw_analytic_center(const pw_polytope* P, double* out);

/* ---- walks --------------------------------------------------------------- */

#define PW_WALK_DIKIN 0
#define PW_WALK_VAIDYA 1
#define PW_WALK_JOHN 2

/* Zero-initialize, then set what you need: nonpositive john_tol means the
 * 1e-10 default, negative lazy_prob means the lazy-1/2 default, nonpositive
 * scale_override means the derived covariance scale for the walk kind. */
typedef struct pw_walk_config {
  int kind;       /* PW_WALK_* */
  double r;       /* radius parameter, > 0 */
  double john_tol;
  double lazy_prob;
  double scale_override;
} pw_walk_config;

typedef struct pw_trajectory pw_trajectory;

/* Runs `steps` lazy Metropolis-Hastings steps from x0 (length d; NULL starts
 * at the analytic center), recording step 0 and every thin-th step after it.
 * Deterministic in (P, cfg, x0, steps, seed, thin). */
pw_status pw_run_chain(const pw_polytope* P, const pw_walk_config* cfg,
                       const double* x0, uint64_t steps, uint64_t seed,
                       uint64_t thin, pw_trajectory** out);
void pw_trajectory_free(pw_trajectory* t);

int64_t pw_trajectory_len(const pw_trajectory* t);
int64_t pw_trajectory_dim(const pw_trajectory* t);
/* points: row-major len x dim; steps: length len */
pw_status pw_trajectory_points(const pw_trajectory* t, double* out);
pw_status pw_trajectory_steps(const pw_trajectory* t, uint64_t* out);
/* counts[4] = {lazy, infeasible, mh_reject, accept}; sums to total steps */
pw_status pw_trajectory_stats(const pw_trajectory* t, uint64_t counts[4]);

/* CSV "step,accepted,x_1,...,x_d"; JSON object with the four counters. */
pw_status pw_trajectory_write_csv(const pw_trajectory* t, const char* path);
pw_status pw_trajectory_stats_json(const pw_trajectory* t, const char* path);

/* Log-scale search for the radius hitting the target proposal-acceptance
 * rate. *converged is 0 when the best candidate misses by more than 0.05
 * (never an error). */
pw_status pw_tune_radius(const pw_polytope* P, const pw_walk_config* cfg,
                         const double* x0, double target_accept, uint64_t seed,
                         double* r_out, double* acceptance_out, int* converged);

/* Dikin warm-up until the first accepted move, then the target walk owns the
 * point. x_out has length d; *k1_out is the number of Dikin steps taken. */
pw_status pw_hybrid_dikin_start(const pw_polytope* P,
                                const pw_walk_config* target_cfg,
                                const double* x0, uint64_t seed, double* x_out,
                                uint64_t* k1_out);

/* Stream splitting used for chain ensembles (chain i of master seed s runs on
 * pw_chain_seed(s, i)); exposed so external drivers reproduce our runs. */
uint64_t pw_chain_seed(uint64_t master, uint64_t index);

/* ---- diagnostics ---------------------------------------------------------- */

/* One draw of N(0, sigma^2 I) conditioned on K by rejection, plus the warmness
 * certificate M = vol(K) f_max / Z of that start (stderr is 0 when K is an
 * axis-aligned box and the bound is analytic). Outputs may be NULL. */
pw_status pw_warm_start(const pw_polytope* P, double sigma, uint64_t seed,
                        double* x_out, double* m_bound, double* m_stderr);

/* c_d with pi*({x : |x_i| >= c_d for all i}) = 1/2 on [-1,1]^d */
pw_status pw_target_set_level(int64_t d, double* out);

/* sigma with analytic warmness M(sigma) = m_target on [-1,1]^d */
pw_status pw_box_sigma_for_warmness(int64_t d, double m_target, double* out);

typedef struct pw_mix_result {
  int64_t n, d;
  uint64_t khat;
  double threshold;
  uint64_t replications;
  double target_set_level;
  int not_mixed; /* 1 when the deficit never met the threshold within max_k */
  double deficit_at_khat;
} pw_mix_result;

/* Ensemble mixing-time estimate on K = [-1,1]^d; deterministic in seed and
 * independent of the thread count. */
pw_status pw_khat_mix(const pw_polytope* P, const pw_walk_config* cfg,
                      uint64_t ensemble_size, double sigma, double threshold,
                      uint64_t max_k, uint64_t seed, int threads,
                      pw_mix_result* out);

/* samples: row-major n x 2 on a 2-D polytope */
pw_status pw_grid_tv_to_uniform(const pw_polytope* P, const double* samples,
                                int64_t n, int grid_n, double* out);

pw_status pw_fit_loglog_slope(const double* xs, const double* ys, int64_t n,
                              double* slope, double* intercept, double* r2);

/* points: row-major n x d; out has length n */
pw_status pw_random_projection_trace(const double* points, int64_t n, int64_t d,
                                     uint64_t direction_seed, double* out);

/* Randomized invariant suite (barrier identities, metric sandwiches, walk
 * properties). Violation details go to report_path (NULL discards them);
 * *violations_out gets the count. */
pw_status pw_validate(int n_instances, uint64_t seed, const char* report_path,
                      int* violations_out);

#ifdef __cplusplus
}
#endif

#endif /* POLYWALK_H */
