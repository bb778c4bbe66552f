#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "polywalk/diagnostics.hpp"

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

pw::Polytope unit_square() {
  MatrixXd A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  return pw::make_polytope(A, VectorXd::Ones(4));
}

// warmness of N(0, sigma^2 I_2) against uniform on [-1,1]^2, by hand
double square_warmness(double sigma) {
  double fmax = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  double z1 = std::erf(1.0 / (sigma * std::numbers::sqrt2));
  return 4.0 * fmax / (z1 * z1);
}

pw::WalkConfig vaidya_cfg(double r) {
  pw::WalkConfig c;
  c.kind = pw::MetricKind::Vaidya;
  c.r = r;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("warm start: analytic box warmness and interior samples") {
  pw::Polytope sq = unit_square();
  pw::Rng rng(404);

  auto [x, ws] = pw::warm_start(sq, 0.2, rng);
  CHECK(pw::contains_interior(sq, x));
  CHECK(ws.sigma == 0.2);
  CHECK(ws.m_bound == doctest::Approx(square_warmness(0.2)).epsilon(1e-10));
  CHECK(ws.m_bound == doctest::Approx(15.915).epsilon(1e-3));
  CHECK(ws.m_bound_stderr == 0.0);  // analytic route
  CHECK(ws.m_bound <= 100.0);
  CHECK(ws.samples_accepted == 1);
  CHECK(ws.samples_requested >= 1);

  for (int k = 0; k < 100; ++k)
    CHECK(pw::contains_interior(sq, pw::warm_start(sq, 0.5, rng).first));
}

TEST_CASE("warmness decreases toward 1 as sigma grows") {
  pw::Polytope sq = unit_square();
  double prev = std::numeric_limits<double>::infinity();
  for (double sigma : {0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    double m = pw::warmness_bound(sq, sigma).m_bound;
    CHECK(m >= 1.0);
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 1.01);  // sigma = 20 is essentially uniform already
}

TEST_CASE("warmness bound: Monte-Carlo route for non-box polytopes") {
  pw::Polytope P = pw::generate(pw::Family::RegularPolygon, 8, 2, 0);
  pw::WarmStart ws = pw::warmness_bound(P, 0.5);
  CHECK(ws.m_bound >= 1.0);
  CHECK(ws.m_bound_stderr > 0.0);
  // deterministic (fixed internal seed)
  CHECK(pw::warmness_bound(P, 0.5).m_bound == ws.m_bound);

  // MC on the square must bracket the analytic value
  pw::Polytope sq = unit_square();
  // nudge the square off the pure-box shape so the MC path is taken: rotate 45
  // degrees (the polygon m=4 *is* that square rotated)
  pw::Polytope rot = pw::generate(pw::Family::RegularPolygon, 4, 2, 0);
  pw::WarmStart mc = pw::warmness_bound(rot, 0.3);
  // the rotated square has side sqrt(2) and the same warmness formula shape;
  // compare against its own analytic value: vol = 2, Z = P(N in rot square)
  // has no elementary closed form, so just demand a sane bracket via stderr
  CHECK(mc.m_bound > 1.0);
  CHECK(mc.m_bound_stderr > 0.0);
  CHECK(mc.m_bound_stderr < 0.2 * mc.m_bound);
  (void)sq;
}

TEST_CASE("warm start: rejection stall when K is far from the origin") {
  MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  VectorXd b(4);
  b << 3, -2, 3, -2;  // box [2,3]^2, origin excluded
  pw::Polytope far = pw::make_polytope(A, b);
  pw::Rng rng(1);
  try {
    pw::warm_start(far, 0.05, rng);
    CHECK(false);
  } catch (const pw::Error& e) {
    CHECK(e.code() == pw::Errc::RejectionStall);
  }
}

TEST_CASE("target set level") {
  CHECK(pw::target_set_level(1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pw::target_set_level(2) ==
        doctest::Approx(1.0 - 1.0 / std::numbers::sqrt2).epsilon(1e-14));

  // membership at the documented points
  double c2 = pw::target_set_level(2);
  CHECK(std::min(0.5, 0.5) >= c2);   // (0.5, 0.5) in S_2
  CHECK(std::min(0.1, 0.5) < c2);    // (0.1, 0.5) not in S_2

  // Monte-Carlo cross check: pi*(S_2) = 1/2 +- 0.01
  pw::Polytope sq = unit_square();
  pw::Rng rng(7);
  VectorXd lo = VectorXd::Constant(2, -1), hi = VectorXd::Constant(2, 1);
  MatrixXd u = oracle::rejection_uniform(sq, lo, hi, 100000, rng);
  double frac = 0;
  for (Index i = 0; i < u.rows(); ++i)
    if (u.row(i).cwiseAbs().minCoeff() >= c2) frac += 1;
  frac /= double(u.rows());
  CHECK(frac == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("box_sigma_for_warmness inverts the analytic bound") {
  for (Index d : {2, 3, 5}) {
    double sigma = pw::box_sigma_for_warmness(d, 100.0);
    pw::Polytope box = pw::generate(pw::Family::HypercubeRepeated, 2 * d, d, 0);
    CHECK(pw::warmness_bound(box, sigma).m_bound ==
          doctest::Approx(100.0).epsilon(1e-6));
  }
  // the paper's d=2 value sigma=0.2 sits well inside the M <= 100 budget
  CHECK(square_warmness(0.2) < 100.0);
}

TEST_CASE("khat_mix: uniform start is already mixed") {
  pw::Polytope sq = unit_square();
  pw::MixResult r =
      pw::khat_mix(sq, vaidya_cfg(0.9), 2000, 20.0, 0.05, 50, 31337, 2);
  CHECK(r.khat == 0);
  CHECK_FALSE(r.not_mixed);
  CHECK(r.replications == 2000);
  CHECK(r.d == 2);
  CHECK(r.n == 4);
  CHECK(r.target_set_level ==
        doctest::Approx(pw::target_set_level(2)).epsilon(1e-14));
}

TEST_CASE("khat_mix: square mixes quickly, deterministically across threads") {
  pw::Polytope sq = unit_square();
  pw::WalkConfig cfg = vaidya_cfg(0.9);

  pw::MixResult a = pw::khat_mix(sq, cfg, 400, 0.2, 0.05, 2000, 99, 1);
  CHECK_FALSE(a.not_mixed);
  CHECK(a.khat > 0);
  CHECK(a.khat < 1000);
  CHECK(a.deficit_at_khat <= 0.05);

  pw::MixResult b = pw::khat_mix(sq, cfg, 400, 0.2, 0.05, 2000, 99, 4);
  CHECK(a.khat == b.khat);
  CHECK(a.deficit_at_khat == b.deficit_at_khat);

  // looser threshold can only stop earlier
  pw::MixResult loose = pw::khat_mix(sq, cfg, 400, 0.2, 0.10, 2000, 99, 2);
  CHECK(loose.khat <= a.khat);

  // an impossible step budget raises the flag instead of failing
  pw::MixResult cold = pw::khat_mix(sq, cfg, 200, 0.2, 0.05, 5, 99, 2);
  CHECK(cold.not_mixed);
  CHECK(cold.khat == 5);
  CHECK(cold.deficit_at_khat > 0.05);
}

TEST_CASE("khat_mix: rejects non-hypercube polytopes and tiny ensembles") {
  pw::Polytope gon = pw::generate(pw::Family::RegularPolygon, 8, 2, 0);
  CHECK_THROWS_AS(pw::khat_mix(gon, vaidya_cfg(0.9), 200, 0.2, 0.05, 10, 1, 1),
                  pw::Error);
  pw::Polytope sq = unit_square();
  CHECK_THROWS_AS(pw::khat_mix(sq, vaidya_cfg(0.9), 10, 0.2, 0.05, 10, 1, 1),
                  pw::Error);
}

TEST_CASE("grid histogram: exact cell masses on the square") {
  pw::Polytope sq = unit_square();
  pw::Rng rng(11);
  VectorXd lo = VectorXd::Constant(2, -1), hi = VectorXd::Constant(2, 1);
  MatrixXd s = oracle::rejection_uniform(sq, lo, hi, 2000, rng);
  pw::GridHistogram h = pw::grid_histogram(sq, s, 10);
  CHECK(h.pstar.size() == 100);
  CHECK(h.pstar.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.phat.sum() == doctest::Approx(1.0).epsilon(1e-12));
  // every cell of the square's own bounding box lies fully inside K
  for (Index c = 0; c < 100; ++c)
    CHECK(h.pstar[c] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("grid TV: iid oracle, degenerate pile, triangle inequality") {
  pw::Polytope sq = unit_square();
  pw::Rng rng(23);
  VectorXd lo = VectorXd::Constant(2, -1), hi = VectorXd::Constant(2, 1);

  const Index N = 20000;
  MatrixXd s = oracle::rejection_uniform(sq, lo, hi, N, rng);
  double tv = pw::grid_tv_to_uniform(sq, s, 10);
  // expected L1 noise of a multinomial over 100 cells of mass 0.01 each
  double noise = 100.0 * std::sqrt(0.01 * 0.99 / double(N)) / 2.0;
  CHECK(tv <= 2.0 * noise);

  // all mass on one point: TV = 1 - pstar(cell of that point)
  MatrixXd pile = MatrixXd::Zero(1500, 2);
  pile.col(0).setConstant(0.15);
  pile.col(1).setConstant(-0.35);
  double tvp = pw::grid_tv_to_uniform(sq, pile, 10);
  CHECK(tvp == doctest::Approx(1.0 - 0.01).epsilon(1e-10));

  // too few samples
  CHECK_THROWS_AS(pw::grid_tv_to_uniform(sq, s.topRows(500), 10), pw::Error);

  // triangle inequality on a shared grid
  MatrixXd s2 = oracle::rejection_uniform(sq, lo, hi, 3000, rng);
  MatrixXd s3 = s2;
  s3.col(0) *= 0.5;  // squashed cloud, clearly non-uniform
  auto tv_between = [&](const MatrixXd& a, const MatrixXd& b) {
    VectorXd pa = pw::grid_histogram(sq, a, 10).phat;
    VectorXd pb = pw::grid_histogram(sq, b, 10).phat;
    return 0.5 * (pa - pb).lpNorm<1>();
  };
  double ab = tv_between(s, s2), bc = tv_between(s2, s3),
         ac = tv_between(s, s3);
  CHECK(ac <= ab + bc + 1e-12);
}

TEST_CASE("fit_loglog_slope: exact power law and hand-checked OLS") {
  VectorXd xs(4), ys(4);
  xs << 1, 2, 4, 8;
  ys = xs.array().square();
  pw::SlopeFit f = pw::fit_loglog_slope(xs, ys);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));

  // one outlier, OLS done longhand
  ys << 1, 2, 4, 80;
  VectorXd lx = xs.array().log(), ly = ys.array().log();
  double mx = lx.mean(), my = ly.mean();
  double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  double sxx = (lx.array() - mx).square().sum();
  double want_slope = sxy / sxx;
  double want_icpt = my - want_slope * mx;
  pw::SlopeFit g = pw::fit_loglog_slope(xs, ys);
  CHECK(g.slope == doctest::Approx(want_slope).epsilon(1e-12));
  CHECK(g.intercept == doctest::Approx(want_icpt).epsilon(1e-12));
  CHECK(g.r2 < 1.0);
  CHECK(g.r2 > 0.5);

  VectorXd bad = VectorXd::Constant(4, 3.0);
  CHECK_THROWS_AS(pw::fit_loglog_slope(bad, ys), pw::Error);
  VectorXd neg(4);
  neg << 1, -2, 4, 8;
  CHECK_THROWS_AS(pw::fit_loglog_slope(neg, ys), pw::Error);
  CHECK_THROWS_AS(pw::fit_loglog_slope(xs.head(2), ys.head(2)), pw::Error);
}

TEST_CASE("random projection trace") {
  // feeding the identity basis recovers u itself, so |u| = 1 is observable
  MatrixXd basis = MatrixXd::Identity(5, 5);
  VectorXd u = pw::random_projection_trace(basis, 2718);
  CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pw::random_projection_trace(basis, 2718) == u);
  CHECK(pw::random_projection_trace(basis, 2719) != u);

  MatrixXd constant = MatrixXd::Ones(7, 3) * 0.4;
  VectorXd trace = pw::random_projection_trace(constant, 1);
  for (Index i = 1; i < trace.size(); ++i)
    CHECK(trace[i] == doctest::Approx(trace[0]).epsilon(1e-14));
}

TEST_SUITE_END();
