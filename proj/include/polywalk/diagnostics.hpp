#pragma once

#include <cstdint>
#include <utility>

#include "polywalk/walks.hpp"

namespace pw {

struct WarmStart {
  double sigma;
  double m_bound;         // certified warmness of N(0, sigma^2 I) truncated to K
  double m_bound_stderr;  // 0 for the analytic (axis-box) route
  std::uint64_t samples_requested = 0;
  std::uint64_t samples_accepted = 0;
};

// Rejection-samples N(0, sigma^2 I) until interior (RejectionStall after 1e6
// misses). M_bound = vol(K) f_max / Z: analytic when K is an axis-aligned box,
// Monte Carlo (fixed internal seed, reported stderr) otherwise.
std::pair<Eigen::VectorXd, WarmStart> warm_start(const Polytope& P, double sigma,
                                                 Rng& rng);

// The warmness bound alone (same analytic/MC split as warm_start).
WarmStart warmness_bound(const Polytope& P, double sigma);

// c_d with pi*(S_d) = 1/2 on [-1,1]^d, S_d = {x : |x_i| >= c_d for all i}.
double target_set_level(Eigen::Index d);

// sigma with analytic hypercube warmness M_bound(sigma) = m_target on [-1,1]^d.
double box_sigma_for_warmness(Eigen::Index d, double m_target = 100.0);

struct MixResult {
  Eigen::Index n = 0;             // constraint count
  Eigen::Index d = 0;
  std::uint64_t khat = 0;
  double threshold = 0.05;
  std::uint64_t replications = 0;
  double target_set_level = 0.0;  // c_d
  bool not_mixed = false;         // threshold never met within max_k
  double deficit_at_khat = 0.0;   // pi*(S_d) - That^khat(S_d)
};

// Ensemble estimate of the approximate mixing time
//   khat = min{ k : pi*(S_d) - That^k(S_d) <= threshold },
// evaluated every step for k <= 1000 and every 10 steps beyond (so khat can
// overshoot by at most 10 there). Chains start i.i.d. from the sigma-warm
// start; chain i uses stream chain_seed(seed, i), so the result is independent
// of the thread count. Requires K = [-1,1]^d (S_d is defined there).
MixResult khat_mix(const Polytope& P, const WalkConfig& cfg,
                   std::uint64_t ensemble_size, double sigma, double threshold,
                   std::uint64_t max_k, std::uint64_t seed, int threads = 1);

// 2-D empirical-vs-uniform total variation over a grid_n x grid_n partition of
// the bounding box (from chords along +-e_i through the analytic center).
// pi*_cell is the cell's share of area(K), measured on a 32x32 subgrid per
// cell. Throws TooFewSamples below 10 * grid_n^2 samples.
double grid_tv_to_uniform(const Polytope& P, const Eigen::MatrixXd& samples,
                          int grid_n);

// The two cell distributions behind grid_tv_to_uniform, for TV arithmetic on a
// shared grid (triangle-inequality checks and the grid-TV mixing proxy).
struct GridHistogram {
  Eigen::VectorXd phat;   // empirical cell masses, sums to 1
  Eigen::VectorXd pstar;  // uniform-on-K cell masses, sums to 1
};
GridHistogram grid_histogram(const Polytope& P, const Eigen::MatrixXd& samples,
                             int grid_n);

struct SlopeFit {
  double slope;
  double intercept;
  double r2;
};

// OLS of log(y) on log(x). Throws DegenerateInput when all xs coincide,
// BadParams for n < 3 or nonpositive inputs.
SlopeFit fit_loglog_slope(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

// <u, x_k> per trajectory row, u uniform on the unit sphere from direction_seed.
Eigen::VectorXd random_projection_trace(const Eigen::MatrixXd& points,
                                        std::uint64_t direction_seed);

}  // namespace pw
