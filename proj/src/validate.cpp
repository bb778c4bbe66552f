#include "polywalk/validate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "polywalk/walks.hpp"

namespace pw {

namespace {

// One line per failed check, a counter for the caller.
struct Reporter {
  std::ostream& out;
  std::string where;
  int violations = 0;

  void expect(bool ok, const char* what, double value) {
    if (ok) return;
    ++violations;
    out << "violation [" << where << "] " << what << " (got " << value << ")\n";
  }
  // |got - want| <= rel * max(1, |want|)
  void expect_eq(double got, double want, double rel, const char* what) {
    expect(std::abs(got - want) <= rel * std::max(1.0, std::abs(want)), what,
           got);
  }
  // got <= bound + slack * (1 + |bound|)
  void expect_le(double got, double bound, double slack, const char* what) {
    expect(got <= bound + slack * (1.0 + std::abs(bound)), what, got);
  }
};

Eigen::VectorXd random_interior(const Polytope& P, const Eigen::VectorXd& from,
                                Rng& rng, double frac) {
  Eigen::VectorXd u = rng.gauss_vector(P.dim());
  u.normalize();
  const Chord ch = chord_endpoints(P, from, u);
  const double t = ch.t_minus + rng.uniform() * (ch.t_plus - ch.t_minus);
  return from + frac * t * u;
}

// As M^{-1} As^T via the metric's Cholesky factor: Y^T Y with Y = L^{-1} As^T.
// With M = H this is the projection P_x; with V or J it is the theta matrix.
Eigen::MatrixXd quad_matrix(const Eigen::MatrixXd& As, const Eigen::MatrixXd& L) {
  const Eigen::MatrixXd Y =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd(As.transpose()));
  return Y.transpose() * Y;
}

void check_instance(const Polytope& P, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y, Rng& rng, Reporter& rep) {
  const Eigen::Index m = P.rows(), d = P.dim();
  const double dd = double(d), dm = double(m);
  constexpr double kRel = 1e-8;    // equality tolerance
  constexpr double kSlack = 1e-10; // inequality slack

  const Eigen::MatrixXd As = detail::slack_scaled_rows(P, x);

  // log-barrier leverage: Lemma 3(a,b) bounds/sum, Lemma 5(a,b) via the dense
  // projection
  const LocalMetric H = log_barrier_hessian(P, x);
  const Eigen::VectorXd sigma = leverage_scores(P, x);
  rep.expect(sigma.minCoeff() >= -kSlack, "sigma >= 0", sigma.minCoeff());
  rep.expect(sigma.maxCoeff() <= 1 + kSlack, "sigma <= 1", sigma.maxCoeff());
  rep.expect_eq(sigma.sum(), dd, kRel, "sum sigma = d");
  const Eigen::MatrixXd Px = quad_matrix(As, H.L);
  for (Eigen::Index i = 0; i < m; ++i)
    rep.expect_eq(Px.row(i).squaredNorm(), sigma[i], kRel,
                  "sigma_i = sum_j sigma_ij^2");
  const Eigen::MatrixXd lam =
      Eigen::MatrixXd(sigma.asDiagonal()) - Px.cwiseProduct(Px);
  const double lam_min =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lam).eigenvalues().minCoeff();
  rep.expect(lam_min >= -kSlack, "Sigma - P∘P is PSD", lam_min);

  // Vaidya: Lemma 3(c) / Lemma 5(c,d,e) and the beta sandwich
  const double bv = beta_vaidya(m, d);
  const LocalMetric V = vaidya_metric(P, x);
  const Eigen::VectorXd th = vaidya_theta(P, x);
  rep.expect(th.minCoeff() >= -kSlack, "theta_V >= 0", th.minCoeff());
  rep.expect_le(th.maxCoeff(), std::sqrt(dm / dd), kSlack,
                "theta_V <= sqrt(n/d)");
  rep.expect_eq((th.array() * (sigma.array() + bv)).sum(), dd, kRel,
                "sum theta (sigma + beta) = d");
  rep.expect_le((th.array().square() * (sigma.array() + bv)).sum(),
                std::sqrt(dm * dd), kSlack, "sum theta^2 (sigma + beta)");
  const Eigen::MatrixXd Th = quad_matrix(As, V.L);
  for (Eigen::Index i = 0; i < m; ++i)
    rep.expect_eq(
        (Th.row(i).transpose().array().square() * (sigma.array() + bv)).sum(),
        th[i], kRel, "theta_i = sum_j (sigma_j + beta) theta_ij^2");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> vh(V.M, H.M);
  rep.expect(vh.eigenvalues().minCoeff() >= bv - kSlack,
             "V >= beta H", vh.eigenvalues().minCoeff());
  rep.expect(vh.eigenvalues().maxCoeff() <= 1 + bv + kSlack,
             "V <= (1 + beta) H", vh.eigenvalues().maxCoeff());

  // John: Appendix C weight bounds, sum, theta identities, beta sandwich
  const double bj = beta_john(m, d);
  const JohnWeights jw = john_weights(P, x);
  rep.expect(jw.residual <= 1e-10, "john residual <= tol", jw.residual);
  rep.expect(jw.zeta.minCoeff() >= bj - kSlack, "zeta >= beta_J",
             jw.zeta.minCoeff());
  rep.expect(jw.zeta.maxCoeff() <= 1 + bj + kSlack, "zeta <= 1 + beta_J",
             jw.zeta.maxCoeff());
  rep.expect_eq(jw.zeta.sum(), 1.5 * dd, kRel, "sum zeta = 3d/2");
  const LocalMetric J = john_metric(P, x, jw);
  const Eigen::VectorXd tj = john_theta(P, x, jw);
  rep.expect(tj.minCoeff() >= -kSlack, "theta_J >= 0", tj.minCoeff());
  rep.expect_le(tj.maxCoeff(), 4.0, kSlack, "theta_J <= 4");
  rep.expect_eq((jw.zeta.array() * tj.array()).sum(), dd, kRel,
                "sum zeta theta_J = d");
  rep.expect_le((jw.zeta.array() * tj.array().square()).sum(), 4.0 * dd, kSlack,
                "sum zeta theta_J^2 <= 4d");
  const Eigen::MatrixXd Tj = quad_matrix(As, J.L);
  for (Eigen::Index i = 0; i < m; ++i)
    rep.expect_eq((Tj.row(i).transpose().array().square() * jw.zeta.array()).sum(),
                  tj[i], kRel, "theta_J_i = sum_j zeta_j theta_J_ij^2");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> jh(J.M, H.M);
  rep.expect(jh.eigenvalues().minCoeff() >= bj - kSlack,
             "J >= beta_J H", jh.eigenvalues().minCoeff());
  rep.expect(jh.eigenvalues().maxCoeff() <= 1 + bj + kSlack,
             "J <= (1 + beta_J) H", jh.eigenvalues().maxCoeff());

  // slackness lemmas at the (x, y) pair
  const Eigen::VectorXd sx = slackness(P, x), sy = slackness(P, y);
  const double ratio_gap = (1.0 - (sy.array() / sx.array())).abs().maxCoeff();
  rep.expect_le(ratio_gap, std::pow(dm / dd, 0.25) * V.local_norm(y - x), kSlack,
                "slackness vs (n/d)^{1/4} |x-y|_V");
  rep.expect_le(ratio_gap, 2.0 * J.local_norm(y - x), kSlack,
                "slackness vs 2 |x-y|_J");

  // eigenvalue sandwich for a pair at V_x-distance t / (nd)^{1/4}, t <= 1/12
  {
    const double t = (1.0 / 24.0) * (1.0 + rng.uniform());  // (1/24, 1/12)
    Eigen::VectorXd w = rng.gauss_vector(d);
    w *= t / (std::pow(dm * dd, 0.25) * V.local_norm(w));
    const Eigen::VectorXd yc = x + w;
    if (!contains_interior(P, yc)) {
      rep.expect(false, "Dikin-ball pair left the interior", t);
    } else {
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ee(
          vaidya_metric(P, yc).M, V.M);
      const double band = 8.0 * t / std::sqrt(dd);
      rep.expect(ee.eigenvalues().minCoeff() >= 1 - band - kSlack,
                 "lemma-4 sandwich lower", ee.eigenvalues().minCoeff());
      rep.expect(ee.eigenvalues().maxCoeff() <= 1 + band + kSlack,
                 "lemma-4 sandwich upper", ee.eigenvalues().maxCoeff());
    }
  }

  // acceptance-ratio antisymmetry for all three walks
  for (MetricKind kind : {MetricKind::Dikin, MetricKind::Vaidya, MetricKind::John}) {
    WalkConfig cfg;
    cfg.kind = kind;
    const double fwd = log_accept_ratio(P, cfg, x, y);
    const double bwd = log_accept_ratio(P, cfg, y, x);
    rep.expect(std::abs(fwd + bwd) <= 1e-8 * (1.0 + std::abs(fwd)),
               "log-ratio antisymmetry", fwd + bwd);
  }
}

// A 2-D polytope {Ax <= b} with b > 0 is bounded exactly when the row
// normals leave no angular gap of pi or more. random_symmetric_2d flips
// row signs independently, so at small m a draw occasionally puts every
// normal into one quadrant pair; that instance has no analytic center,
// and the suite must not pick it.
bool bounded_2d(const Polytope& P) {
  std::vector<double> ang(static_cast<std::size_t>(P.rows()));
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    ang[static_cast<std::size_t>(i)] = std::atan2(P.A(i, 1), P.A(i, 0));
  std::sort(ang.begin(), ang.end());
  double gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
  for (std::size_t i = 1; i < ang.size(); ++i)
    gap = std::max(gap, ang[i] - ang[i - 1]);
  return gap < std::numbers::pi - 1e-9;
}

}  // namespace

int run_invariant_suite(int n_instances, std::uint64_t seed,
                        std::ostream& report) {
  if (n_instances < 1) fail(Errc::BadParams, "invariant suite: n_instances < 1");
  Rng rng(seed);
  Reporter rep{report, "", 0};

  for (int inst = 0; inst < n_instances; ++inst) {
    const std::uint64_t sub_seed = chain_seed(seed, std::uint64_t(inst));
    Polytope P = [&] {
      switch (inst % 3) {
        case 0: {
          // d in 1..8, m a multiple of 2d in [2d, 40d]
          const Eigen::Index d = 1 + (inst / 3) % 8;
          const Eigen::Index reps = 1 + Eigen::Index(rng.uniform() * 8.0);
          return generate(Family::HypercubeRepeated, 2 * d * reps, d, sub_seed);
        }
        case 1: {
          // even m in [6, 64]
          const Eigen::Index m = 6 + 2 * Eigen::Index(rng.uniform() * 29.0);
          Polytope cand = generate(Family::RandomSymmetric2D, m, 2, sub_seed);
          for (int attempt = 1; !bounded_2d(cand); ++attempt) {
            if (attempt > 64)
              fail(Errc::UnboundedDirection,
                   "invariant suite: could not draw a bounded instance");
            cand = generate(Family::RandomSymmetric2D, m, 2,
                            chain_seed(sub_seed, std::uint64_t(1000 + attempt)));
          }
          return cand;
        }
        default: {
          const Eigen::Index m = 4 + Eigen::Index(rng.uniform() * 29.0);
          return generate(Family::RegularPolygon, m, 2, sub_seed);
        }
      }
    }();

    std::ostringstream tag;
    tag << "instance " << inst << ", " << family_name(Family(inst % 3))
        << " m=" << P.rows() << " d=" << P.dim();
    rep.where = tag.str();

    const Eigen::VectorXd center = analytic_center(P);
    const Eigen::VectorXd x = random_interior(P, center, rng, 0.85);
    const Eigen::VectorXd y = random_interior(P, x, rng, 0.5);
    check_instance(P, x, y, rng, rep);

    // a short chain stays interior and its counters reconcile
    WalkConfig cfg;
    cfg.kind = MetricKind(inst % 3);
    const Trajectory t = run_chain(P, cfg, center, 50, sub_seed);
    for (Eigen::Index r = 0; r < t.points.rows(); ++r)
      rep.expect(contains_interior(P, t.points.row(r).transpose()),
                 "chain left the interior", double(r));
    rep.expect(t.stats.total() == 50, "step counters reconcile",
               double(t.stats.total()));
  }

  report << "invariant suite: " << n_instances << " instances, "
         << rep.violations << " violation(s)\n";
  return rep.violations;
}

}  // namespace pw
