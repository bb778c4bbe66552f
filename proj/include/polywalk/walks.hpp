#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "polywalk/barriers.hpp"
#include "polywalk/rng.hpp"

namespace pw {

// Proposal covariance is c * M_x^{-1} with the derived scale
//   Dikin:  c = r^2 / d
//   Vaidya: c = r^2 / sqrt(m d)
//   John:   c = r^2 / (d^{3/2} kappa^4),  kappa = log2(2m/d)
// scale_override replaces c verbatim (no correctness claim; exists to try the
// conjectured improved-John scale and the kappa-free reading).
struct WalkConfig {
  MetricKind kind = MetricKind::Vaidya;
  double r = 0.5;
  double john_tol = 1e-10;
  double lazy_prob = 0.5;
  std::optional<double> scale_override;

  double scale(Eigen::Index m, Eigen::Index d) const;
};

struct StepStats {
  std::uint64_t lazy = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t mh_reject = 0;
  std::uint64_t accept = 0;

  std::uint64_t total() const { return lazy + infeasible + mh_reject + accept; }
};

struct ChainState {
  Eigen::VectorXd x;
  LocalMetric metric;  // cached metric at x
  StepStats stats;
};

ChainState make_chain_state(const Polytope& P, const WalkConfig& cfg,
                            const Eigen::VectorXd& x0);

// z = x + sqrt(c) L^{-T} xi, xi ~ N(0, I): a draw from N(x, c M_x^{-1}).
Eigen::VectorXd propose(const ChainState& state, const WalkConfig& cfg,
                        const Polytope& P, Rng& rng);

// log (p_z(x) / p_x(z)) =
//   1/2 (log det M_z - log det M_x) - (|z-x|_{M_z}^2 - |z-x|_{M_x}^2) / (2c).
// Acceptance is min{1, exp(value)}.
double log_accept_ratio(const Polytope& P, const WalkConfig& cfg,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& z);
double log_accept_ratio(const LocalMetric& at_x, const LocalMetric& at_z,
                        double scale);

// One lazy Metropolis-Hastings transition, in place. Draw order per step:
// lazy coin; if active, d proposal gaussians, then the acceptance uniform.
void step(ChainState& state, const Polytope& P, const WalkConfig& cfg, Rng& rng);

struct Trajectory {
  Eigen::MatrixXd points;             // one recorded state per row
  std::vector<std::uint64_t> steps;   // step index of each row (row 0 is 0)
  std::vector<std::uint8_t> accepted; // 1 iff that step's proposal was accepted
  StepStats stats;
};

// Deterministic function of (P, cfg, x0, k, seed, thin). Records step 0 and
// every thin-th step after it.
Trajectory run_chain(const Polytope& P, const WalkConfig& cfg,
                     const Eigen::VectorXd& x0, std::uint64_t k,
                     std::uint64_t seed, std::uint64_t thin = 1);

struct HybridStart {
  ChainState state;   // metric already of target_cfg.kind at the reached point
  std::uint64_t k1;   // Dikin steps until the first move (geometric)
};

// Dikin walk from x0 (same r / lazy_prob as target_cfg) until the first
// accepted move, then hand over to the target walk. NoMove after 1e6 steps.
HybridStart hybrid_dikin_start(const Polytope& P, const WalkConfig& target_cfg,
                               const Eigen::VectorXd& x0, Rng& rng);

struct TuneResult {
  double r;
  double acceptance;  // measured at r over the probe run
  bool converged;     // acceptance within +-0.05 of the target
};

// Log-scale binary search for r in [1e-4, 1] (20 iterations, 2000-step probes)
// targeting the given proposal acceptance rate. Never throws on a missed
// target: returns the best candidate with converged = false.
TuneResult tune_radius(const Polytope& P, const WalkConfig& cfg,
                       const Eigen::VectorXd& x0, double target_accept,
                       std::uint64_t seed);

// CSV "step,accepted,x_1,...,x_d" (:.17g floats); JSON
// {"steps":..,"lazy":..,"infeasible":..,"mh_reject":..,"accept":..}.
void write_trajectory_csv(const Trajectory& t, std::ostream& out);
void write_stats_json(const StepStats& s, std::ostream& out);

}  // namespace pw
