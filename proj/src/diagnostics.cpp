#include "polywalk/diagnostics.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace pw {

namespace {

constexpr std::uint64_t kRejectionCap = 1'000'000;

// N(0, sigma^2) mass of [lo, hi]
double gauss_mass(double lo, double hi, double sigma) {
  const double r = 1.0 / (sigma * std::numbers::sqrt2);
  return 0.5 * (std::erf(hi * r) - std::erf(lo * r));
}

struct BoxBounds {
  Eigen::VectorXd lo, hi;
};

// Axis-aligned boxes get a closed-form warmness. A box is any A with exactly
// one nonzero per row and both sides of every coordinate bounded; the per-row
// scale cancels in b_i / A(i,j), so rescaled and duplicated rows still count.
std::optional<BoxBounds> as_axis_box(const Polytope& P) {
  const Eigen::Index d = P.dim();
  const double inf = std::numeric_limits<double>::infinity();
  BoxBounds box{Eigen::VectorXd::Constant(d, -inf),
                Eigen::VectorXd::Constant(d, inf)};
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    Eigen::Index j = -1;
    for (Eigen::Index k = 0; k < d; ++k) {
      if (P.A(i, k) == 0.0) continue;
      if (j >= 0) return std::nullopt;
      j = k;
    }
    if (j < 0) return std::nullopt;
    const double t = P.b[i] / P.A(i, j);
    if (P.A(i, j) > 0)
      box.hi[j] = std::min(box.hi[j], t);
    else
      box.lo[j] = std::max(box.lo[j], t);
  }
  if (!box.lo.allFinite() || !box.hi.allFinite()) return std::nullopt;
  return box;
}

WarmStart box_warmness(const BoxBounds& box, double sigma) {
  double vol = 1.0, z = 1.0, f_peak = 1.0;
  const double norm1d = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (Eigen::Index j = 0; j < box.lo.size(); ++j) {
    vol *= box.hi[j] - box.lo[j];
    z *= gauss_mass(box.lo[j], box.hi[j], sigma);
    const double xs = std::clamp(0.0, box.lo[j], box.hi[j]);
    f_peak *= norm1d * std::exp(-0.5 * xs * xs / (sigma * sigma));
  }
  WarmStart ws;
  ws.sigma = sigma;
  ws.m_bound = vol * f_peak / z;
  ws.m_bound_stderr = 0.0;
  return ws;
}

// Bounding box of K from the chords through the analytic center; throws
// UnboundedDirection when K is unbounded, which is also the right surface for
// the volume estimate below.
BoxBounds bounding_box(const Polytope& P) {
  const Eigen::Index d = P.dim();
  const Eigen::VectorXd c = analytic_center(P);
  BoxBounds box{Eigen::VectorXd(d), Eigen::VectorXd(d)};
  for (Eigen::Index j = 0; j < d; ++j) {
    const Chord ch = chord_endpoints(P, c, Eigen::VectorXd::Unit(d, j));
    box.lo[j] = c[j] + ch.t_minus;
    box.hi[j] = c[j] + ch.t_plus;
  }
  return box;
}

// Monte-Carlo warmness for general K: vol(K) by rejection in the bounding box,
// Z = P(N(0, sigma^2 I) in K) directly, f_max = density at 0 (interior by the
// generator contract). Fixed internal seed: the bound is a reported number and
// must not depend on call order.
WarmStart mc_warmness(const Polytope& P, double sigma) {
  const Eigen::Index d = P.dim();
  if (!contains_interior(P, Eigen::VectorXd::Zero(d)))
    fail(Errc::BadParams,
         "warmness_bound: Monte-Carlo route needs 0 in the interior");
  const BoxBounds box = bounding_box(P);

  const int n = 200'000;
  Rng rng(0x9E3779B97F4A7C15ull);
  std::int64_t z_hits = 0, v_hits = 0;
  Eigen::VectorXd u(d);
  for (int i = 0; i < n; ++i) {
    if (contains_interior(P, sigma * rng.gauss_vector(d))) ++z_hits;
    for (Eigen::Index j = 0; j < d; ++j)
      u[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * rng.uniform();
    if (contains_interior(P, u)) ++v_hits;
  }
  if (z_hits == 0)
    fail(Errc::RejectionStall, "warmness_bound: N(0, sigma^2 I) never hit K");

  const double zf = double(z_hits) / n, vf = double(v_hits) / n;
  const double vol = (box.hi - box.lo).prod() * vf;
  const double f_peak =
      std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * double(d));
  WarmStart ws;
  ws.sigma = sigma;
  ws.m_bound = vol * f_peak / zf;
  const double rel_var = (1.0 - vf) / (vf * n) + (1.0 - zf) / (zf * n);
  ws.m_bound_stderr = ws.m_bound * std::sqrt(rel_var);
  return ws;
}

Eigen::VectorXd rejection_gaussian(const Polytope& P, double sigma, Rng& rng,
                                   std::uint64_t* draws_out = nullptr) {
  for (std::uint64_t k = 1; k <= kRejectionCap; ++k) {
    Eigen::VectorXd x = sigma * rng.gauss_vector(P.dim());
    if (contains_interior(P, x)) {
      if (draws_out) *draws_out = k;
      return x;
    }
  }
  std::ostringstream msg;
  msg << "warm start: no interior point in " << kRejectionCap
      << " draws of N(0, " << sigma << "^2 I)";
  fail(Errc::RejectionStall, msg.str());
}

void require_unit_hypercube(const Polytope& P) {
  const Eigen::Index d = P.dim();
  std::vector<char> pos(d, 0), neg(d, 0);
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    Eigen::Index j = -1;
    for (Eigen::Index k = 0; k < d; ++k) {
      if (P.A(i, k) == 0.0) continue;
      if (j >= 0) fail(Errc::BadParams, "khat_mix needs K = [-1,1]^d");
      j = k;
    }
    if (j < 0 || std::abs(P.b[i] / std::abs(P.A(i, j)) - 1.0) > 1e-12)
      fail(Errc::BadParams, "khat_mix needs K = [-1,1]^d");
    (P.A(i, j) > 0 ? pos : neg)[j] = 1;
  }
  for (Eigen::Index j = 0; j < d; ++j)
    if (!pos[j] || !neg[j]) fail(Errc::BadParams, "khat_mix needs K = [-1,1]^d");
}

}  // namespace

WarmStart warmness_bound(const Polytope& P, double sigma) {
  if (!(sigma > 0)) fail(Errc::BadParams, "warmness_bound: sigma must be > 0");
  if (auto box = as_axis_box(P)) return box_warmness(*box, sigma);
  return mc_warmness(P, sigma);
}

std::pair<Eigen::VectorXd, WarmStart> warm_start(const Polytope& P,
                                                 double sigma, Rng& rng) {
  WarmStart ws = warmness_bound(P, sigma);
  std::uint64_t draws = 0;
  Eigen::VectorXd x = rejection_gaussian(P, sigma, rng, &draws);
  ws.samples_requested = draws;
  ws.samples_accepted = 1;
  return {std::move(x), ws};
}

double target_set_level(Eigen::Index d) {
  if (d < 1) fail(Errc::BadParams, "target_set_level: d must be >= 1");
  return 1.0 - std::exp2(-1.0 / double(d));
}

double box_sigma_for_warmness(Eigen::Index d, double m_target) {
  if (d < 1) fail(Errc::BadParams, "box_sigma_for_warmness: d must be >= 1");
  if (!(m_target > 1.0))
    fail(Errc::BadParams, "box_sigma_for_warmness: m_target must be > 1");
  const BoxBounds cube{Eigen::VectorXd::Constant(d, -1.0),
                       Eigen::VectorXd::Constant(d, 1.0)};
  // M(sigma) is strictly decreasing from +inf to 1, so bisect on log(sigma)
  double lo = std::log(1e-6), hi = std::log(1e6);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (box_warmness(cube, std::exp(mid)).m_bound > m_target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

MixResult khat_mix(const Polytope& P, const WalkConfig& cfg,
                   std::uint64_t ensemble_size, double sigma, double threshold,
                   std::uint64_t max_k, std::uint64_t seed, int threads) {
  require_unit_hypercube(P);
  if (ensemble_size < 50)
    fail(Errc::BadParams, "khat_mix: ensemble_size must be >= 50");
  if (!(threshold > 0 && threshold < 1))
    fail(Errc::BadParams, "khat_mix: threshold must lie in (0, 1)");
  if (!(sigma > 0)) fail(Errc::BadParams, "khat_mix: sigma must be > 0");

  const double level = target_set_level(P.dim());

  std::vector<std::uint64_t> cadence;
  for (std::uint64_t k = 0; k <= max_k; ++k)
    if (k <= 1000 || k % 10 == 0 || k == max_k) cadence.push_back(k);

  // Chains persist across blocks of 64 cadence points, so the ensemble stops
  // as soon as the deficit crosses the threshold instead of burning max_k
  // steps. Tallies are integers summed in fixed order and chains own disjoint
  // rng streams, so the result is identical for every thread count.
  const int nt = int(std::min<std::uint64_t>(std::max(threads, 1), ensemble_size));
  const std::uint64_t per = (ensemble_size + nt - 1) / nt;
  std::vector<Rng> rngs;
  rngs.reserve(ensemble_size);
  for (std::uint64_t i = 0; i < ensemble_size; ++i)
    rngs.emplace_back(chain_seed(seed, i));
  std::vector<ChainState> chains(ensemble_size);
  std::vector<std::exception_ptr> errors(nt);

  auto threaded = [&](auto&& body) {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        try {
          const std::uint64_t begin = t * per;
          const std::uint64_t end =
              std::min<std::uint64_t>(begin + per, ensemble_size);
          for (std::uint64_t i = begin; i < end; ++i) body(t, i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  };

  threaded([&](int, std::uint64_t i) {
    chains[i] = make_chain_state(P, cfg, rejection_gaussian(P, sigma, rngs[i]));
  });

  MixResult res;
  res.n = P.rows();
  res.d = P.dim();
  res.threshold = threshold;
  res.replications = ensemble_size;
  res.target_set_level = level;

  constexpr std::size_t kBlock = 64;
  std::uint64_t done = 0;  // steps every chain has taken so far
  std::vector<std::vector<std::uint64_t>> tallies(
      nt, std::vector<std::uint64_t>(kBlock));
  for (std::size_t b0 = 0; b0 < cadence.size(); b0 += kBlock) {
    const std::size_t b1 = std::min(b0 + kBlock, cadence.size());
    const std::uint64_t target = cadence[b1 - 1];
    for (auto& tally : tallies) std::fill(tally.begin(), tally.end(), 0);

    threaded([&](int t, std::uint64_t i) {
      ChainState& st = chains[i];
      Rng& rng = rngs[i];
      std::size_t ci = b0;
      std::uint64_t k = done;
      // cadence[b0] == done only in the first block (k = 0, the warm start)
      for (; ci < b1 && cadence[ci] == k; ++ci)
        if (st.x.cwiseAbs().minCoeff() >= level) ++tallies[t][ci - b0];
      while (k < target) {
        step(st, P, cfg, rng);
        ++k;
        for (; ci < b1 && cadence[ci] == k; ++ci)
          if (st.x.cwiseAbs().minCoeff() >= level) ++tallies[t][ci - b0];
      }
    });
    done = target;

    for (std::size_t ci = b0; ci < b1; ++ci) {
      std::uint64_t hits = 0;
      for (const auto& tally : tallies) hits += tally[ci - b0];
      // pi*(S_d) = 1/2 exactly, by the choice of the level c_d
      const double deficit = 0.5 - double(hits) / double(ensemble_size);
      res.khat = cadence[ci];
      res.deficit_at_khat = deficit;
      if (deficit <= threshold) return res;
    }
  }
  res.not_mixed = true;  // khat/deficit left at the max_k cadence point
  return res;
}

GridHistogram grid_histogram(const Polytope& P, const Eigen::MatrixXd& samples,
                             int grid_n) {
  if (P.dim() != 2) fail(Errc::BadParams, "grid histogram: 2-D polytopes only");
  if (grid_n < 2) fail(Errc::BadParams, "grid histogram: grid_n must be >= 2");
  if (samples.cols() != 2)
    fail(Errc::DimensionMismatch, "grid histogram: samples must be n x 2");
  const Eigen::Index n_cells = Eigen::Index(grid_n) * grid_n;
  if (samples.rows() < 10 * n_cells) {
    std::ostringstream msg;
    msg << "grid histogram: " << samples.rows() << " samples for " << n_cells
        << " cells; need at least " << 10 * n_cells;
    fail(Errc::TooFewSamples, msg.str());
  }

  const BoxBounds box = bounding_box(P);
  const double w0 = (box.hi[0] - box.lo[0]) / grid_n;
  const double w1 = (box.hi[1] - box.lo[1]) / grid_n;

  GridHistogram h;
  h.pstar = Eigen::VectorXd::Zero(n_cells);
  h.phat = Eigen::VectorXd::Zero(n_cells);

  // pi* per cell: area share of K, measured on a 32x32 subgrid of cell centers.
  // Cells all have the same area, so normalizing hit counts is exact.
  constexpr int sub = 32;
  Eigen::VectorXd p(2);
  for (int gy = 0; gy < grid_n; ++gy)
    for (int gx = 0; gx < grid_n; ++gx) {
      std::int64_t hits = 0;
      for (int sy = 0; sy < sub; ++sy) {
        p[1] = box.lo[1] + w1 * (gy + (sy + 0.5) / sub);
        for (int sx = 0; sx < sub; ++sx) {
          p[0] = box.lo[0] + w0 * (gx + (sx + 0.5) / sub);
          if (contains_interior(P, p)) ++hits;
        }
      }
      h.pstar[gy * grid_n + gx] = double(hits);
    }
  h.pstar /= h.pstar.sum();

  auto cell_of = [&](double v, double lo, double w) {
    return std::clamp(int(std::floor((v - lo) / w)), 0, grid_n - 1);
  };
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const int gx = cell_of(samples(i, 0), box.lo[0], w0);
    const int gy = cell_of(samples(i, 1), box.lo[1], w1);
    h.phat[gy * grid_n + gx] += 1.0;
  }
  h.phat /= double(samples.rows());
  return h;
}

double grid_tv_to_uniform(const Polytope& P, const Eigen::MatrixXd& samples,
                          int grid_n) {
  const GridHistogram h = grid_histogram(P, samples, grid_n);
  return 0.5 * (h.phat - h.pstar).lpNorm<1>();
}

SlopeFit fit_loglog_slope(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const Eigen::Index n = xs.size();
  if (ys.size() != n)
    fail(Errc::DimensionMismatch, "fit_loglog_slope: xs and ys sizes differ");
  if (n < 3) fail(Errc::BadParams, "fit_loglog_slope: need at least 3 points");
  if ((xs.array() <= 0).any() || (ys.array() <= 0).any())
    fail(Errc::BadParams, "fit_loglog_slope: inputs must be positive");
  const Eigen::ArrayXd lx = xs.array().log(), ly = ys.array().log();
  if ((lx - lx[0]).abs().maxCoeff() == 0.0)
    fail(Errc::DegenerateInput, "fit_loglog_slope: all xs coincide");

  Eigen::MatrixXd X(n, 2);
  X.col(0).setOnes();
  X.col(1) = lx.matrix();
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(ly.matrix());

  const double ss_res = (ly.matrix() - X * beta).squaredNorm();
  const double ss_tot = (ly - ly.mean()).matrix().squaredNorm();
  SlopeFit f;
  f.intercept = beta[0];
  f.slope = beta[1];
  f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return f;
}

Eigen::VectorXd random_projection_trace(const Eigen::MatrixXd& points,
                                        std::uint64_t direction_seed) {
  if (points.cols() < 1)
    fail(Errc::BadParams, "random_projection_trace: empty points");
  Rng rng(direction_seed);
  Eigen::VectorXd u = rng.gauss_vector(points.cols());
  u /= u.norm();
  return points * u;
}

}  // namespace pw
