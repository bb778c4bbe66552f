#include "polywalk/walks.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace pw {

double WalkConfig::scale(Eigen::Index m, Eigen::Index d) const {
  if (scale_override) return *scale_override;
  if (!(r > 0.0)) fail(Errc::BadParams, "walk radius must be positive");
  switch (kind) {
    case MetricKind::Dikin:
      return r * r / static_cast<double>(d);
    case MetricKind::Vaidya:
      return r * r / std::sqrt(static_cast<double>(m) * static_cast<double>(d));
    case MetricKind::John: {
      double kappa = kappa_john(m, d);
      return r * r /
             (std::pow(static_cast<double>(d), 1.5) * std::pow(kappa, 4.0));
    }
  }
  fail(Errc::BadParams, "unknown walk kind");
}

ChainState make_chain_state(const Polytope& P, const WalkConfig& cfg,
                            const Eigen::VectorXd& x0) {
  ChainState st;
  st.x = x0;
  st.metric = local_metric(P, cfg.kind, x0, cfg.john_tol);
  return st;
}

Eigen::VectorXd propose(const ChainState& state, const WalkConfig& cfg,
                        const Polytope& P, Rng& rng) {
  double c = cfg.scale(P.rows(), P.dim());
  Eigen::VectorXd xi = rng.gauss_vector(P.dim());
  // L^{-T} xi has covariance (L L^T)^{-1} = M^{-1}
  Eigen::VectorXd y =
      state.metric.L.transpose().triangularView<Eigen::Upper>().solve(xi);
  return state.x + std::sqrt(c) * y;
}

double log_accept_ratio(const LocalMetric& at_x, const LocalMetric& at_z,
                        double scale) {
  Eigen::VectorXd delta = at_z.x - at_x.x;
  double nz = at_z.local_norm(delta);
  double nx = at_x.local_norm(delta);
  return (at_z.half_log_det - at_x.half_log_det) -
         (nz * nz - nx * nx) / (2.0 * scale);
}

double log_accept_ratio(const Polytope& P, const WalkConfig& cfg,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  LocalMetric mx = local_metric(P, cfg.kind, x, cfg.john_tol);
  LocalMetric mz = local_metric(P, cfg.kind, z, cfg.john_tol);
  return log_accept_ratio(mx, mz, cfg.scale(P.rows(), P.dim()));
}

void step(ChainState& state, const Polytope& P, const WalkConfig& cfg,
          Rng& rng) {
  if (rng.uniform() < cfg.lazy_prob) {
    ++state.stats.lazy;
    return;
  }
  Eigen::VectorXd z = propose(state, cfg, P, rng);
  if (!contains_interior(P, z)) {
    ++state.stats.infeasible;
    return;
  }
  LocalMetric mz;
  try {
    mz = local_metric(P, cfg.kind, z, cfg.john_tol);
  } catch (const Error& e) {
    // interior by sign but within the metric's numerical boundary margin
    if (e.code() == Errc::NotInterior) {
      ++state.stats.infeasible;
      return;
    }
    throw;
  }
  double la = log_accept_ratio(state.metric, mz, cfg.scale(P.rows(), P.dim()));
  double u = rng.uniform();
  if (std::log(u) < la) {
    state.x = z;
    state.metric = std::move(mz);
    ++state.stats.accept;
  } else {
    ++state.stats.mh_reject;
  }
}

Trajectory run_chain(const Polytope& P, const WalkConfig& cfg,
                     const Eigen::VectorXd& x0, std::uint64_t k,
                     std::uint64_t seed, std::uint64_t thin) {
  if (thin == 0) fail(Errc::BadParams, "thin must be >= 1");
  ChainState st = make_chain_state(P, cfg, x0);
  Rng rng(seed);

  Trajectory out;
  out.points.resize(static_cast<Eigen::Index>(k / thin) + 1, P.dim());
  out.steps.reserve(static_cast<std::size_t>(k / thin) + 1);
  out.accepted.reserve(static_cast<std::size_t>(k / thin) + 1);
  out.points.row(0) = x0.transpose();
  out.steps.push_back(0);
  out.accepted.push_back(0);

  Eigen::Index row = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    std::uint64_t acc_before = st.stats.accept;
    step(st, P, cfg, rng);
    if (t % thin == 0) {
      out.points.row(row) = st.x.transpose();
      out.steps.push_back(t);
      out.accepted.push_back(st.stats.accept > acc_before ? 1 : 0);
      ++row;
    }
  }
  out.stats = st.stats;
  return out;
}

HybridStart hybrid_dikin_start(const Polytope& P, const WalkConfig& target_cfg,
                               const Eigen::VectorXd& x0, Rng& rng) {
  WalkConfig dikin_cfg = target_cfg;
  dikin_cfg.kind = MetricKind::Dikin;
  ChainState st = make_chain_state(P, dikin_cfg, x0);
  constexpr std::uint64_t kMaxSteps = 1000000;
  for (std::uint64_t k = 1; k <= kMaxSteps; ++k) {
    step(st, P, dikin_cfg, rng);
    if (st.stats.accept > 0)
      return {make_chain_state(P, target_cfg, st.x), k};
  }
  fail(Errc::NoMove,
       "dikin warm-up never accepted a move in 1e6 steps; radius is off");
}

TuneResult tune_radius(const Polytope& P, const WalkConfig& cfg,
                       const Eigen::VectorXd& x0, double target_accept,
                       std::uint64_t seed) {
  if (!(target_accept > 0.0 && target_accept < 1.0))
    fail(Errc::BadParams, "target acceptance must lie in (0,1)");

  // acceptance = accepted / proposed; lazy stays are not proposals and
  // infeasible proposals count as rejections
  auto probe = [&](double r) {
    WalkConfig c = cfg;
    c.r = r;
    c.scale_override.reset();  // tuning r under an override is meaningless
    Trajectory t = run_chain(P, c, x0, 2000, seed);
    std::uint64_t proposed = t.stats.total() - t.stats.lazy;
    return proposed ? static_cast<double>(t.stats.accept) / proposed : 1.0;
  };

  double lo = 1e-4, hi = 1.0;
  TuneResult best;
  best.r = std::sqrt(lo * hi);
  best.acceptance = std::numeric_limits<double>::quiet_NaN();
  best.converged = false;
  double best_gap = std::numeric_limits<double>::infinity();

  for (int it = 0; it < 20; ++it) {
    double mid = std::sqrt(lo * hi);
    double acc = probe(mid);
    if (std::abs(acc - target_accept) < best_gap) {
      best_gap = std::abs(acc - target_accept);
      best.r = mid;
      best.acceptance = acc;
    }
    if (acc > target_accept)
      lo = mid;  // acceptance decays as r grows: room to enlarge
    else
      hi = mid;
  }
  best.converged = best_gap <= 0.05;
  return best;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
  const Eigen::Index d = t.points.cols();
  out << "step,accepted";
  for (Eigen::Index j = 0; j < d; ++j) out << ",x_" << (j + 1);
  out << '\n';
  char buf[40];
  for (Eigen::Index r = 0; r < t.points.rows(); ++r) {
    out << t.steps[static_cast<std::size_t>(r)] << ','
        << int(t.accepted[static_cast<std::size_t>(r)]);
    for (Eigen::Index j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", t.points(r, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) fail(Errc::Io, "failed to write trajectory CSV");
}

void write_stats_json(const StepStats& s, std::ostream& out) {
  out << "{\"steps\":" << s.total() << ",\"lazy\":" << s.lazy
      << ",\"infeasible\":" << s.infeasible << ",\"mh_reject\":" << s.mh_reject
      << ",\"accept\":" << s.accept << "}\n";
  if (!out) fail(Errc::Io, "failed to write stats JSON");
}

}  // namespace pw
