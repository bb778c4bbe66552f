#include "polywalk/barriers.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace pw {

namespace detail {

Eigen::MatrixXd slack_scaled_rows(const Polytope& P, const Eigen::VectorXd& x) {
  Eigen::VectorXd s = slackness(P, x);
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (s[i] < 1e-12 * (1.0 + std::abs(P.b[i])))
      fail(Errc::NotInterior,
           "point is on or numerically too close to facet " +
               std::to_string(i) + " (slack " + std::to_string(s[i]) + ")");
  return (P.A.array().colwise() / s.array()).matrix();
}

}  // namespace detail

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// M = As^T diag(w) As together with its factorization, as a LocalMetric.
LocalMetric metric_from_rows(MetricKind kind, const VectorXd& x,
                             const MatrixXd& As, const VectorXd& w) {
  LocalMetric out;
  out.kind = kind;
  out.x = x;
  out.weights = w;
  MatrixXd M = As.transpose() * (w.asDiagonal() * As);
  M = 0.5 * (M + M.transpose());  // clean up roundoff asymmetry
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    fail(Errc::FactorizationFailure,
         std::string(metric_kind_name(kind)) +
             " metric is not numerically positive definite");
  out.M = std::move(M);
  out.L = llt.matrixL();
  out.half_log_det = out.L.diagonal().array().log().sum();
  return out;
}

// diag of As M^{-1} As^T given the Cholesky factor L of M, i.e. the vector of
// ||L^{-1} a_i / s_i||^2 — used for sigma (M = H) and both thetas (M = V, J).
VectorXd metric_sensitivities(const MatrixXd& As, const MatrixXd& L) {
  MatrixXd Y = L.triangularView<Eigen::Lower>().solve(As.transpose());
  return Y.colwise().squaredNorm().transpose();
}

VectorXd leverage_from_rows(const MatrixXd& As) {
  MatrixXd H = As.transpose() * As;
  H = 0.5 * (H + H.transpose());
  Eigen::LLT<MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    fail(Errc::FactorizationFailure,
         "log-barrier Hessian is not numerically positive definite");
  return metric_sensitivities(As, llt.matrixL());
}

// sigma_{x,w}: diagonal of W^{a/2} Ax (Ax^T W^a Ax)^{-1} Ax^T W^{a/2},
// computed as w_i^a ||L^{-1} a_i/s_i||^2 with L the factor of Ax^T W^a Ax.
VectorXd john_sigma(const MatrixXd& As, const VectorXd& w, double alpha) {
  VectorXd wa = w.array().pow(alpha);
  MatrixXd B = As.transpose() * (wa.asDiagonal() * As);
  B = 0.5 * (B + B.transpose());
  Eigen::LLT<MatrixXd> llt(B);
  if (llt.info() != Eigen::Success)
    fail(Errc::FactorizationFailure,
         "john weight system is not numerically positive definite");
  MatrixXd Y = llt.matrixL().solve(As.transpose());
  return (Y.colwise().squaredNorm().transpose().array() * wa.array());
}

// dense projection P = As M^{-1} As^T for the gradient oracles (m x m)
MatrixXd dense_projection_of(const MatrixXd& As, const MatrixXd& M) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    fail(Errc::FactorizationFailure, "projection factorization failed");
  MatrixXd Y = llt.matrixL().solve(As.transpose());
  return Y.transpose() * Y;
}

}  // namespace

double LocalMetric::local_norm(const Eigen::VectorXd& v) const {
  return (L.transpose() * v).norm();
}

const char* metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::Dikin: return "dikin";
    case MetricKind::Vaidya: return "vaidya";
    case MetricKind::John: return "john";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "dikin") return MetricKind::Dikin;
  if (name == "vaidya") return MetricKind::Vaidya;
  if (name == "john") return MetricKind::John;
  fail(Errc::BadParams, "unknown walk kind '" + name + "'");
}

LocalMetric log_barrier_hessian(const Polytope& P, const Eigen::VectorXd& x) {
  MatrixXd As = detail::slack_scaled_rows(P, x);
  return metric_from_rows(MetricKind::Dikin, x, As,
                          VectorXd::Ones(P.rows()));
}

Eigen::VectorXd leverage_scores(const Polytope& P, const Eigen::VectorXd& x) {
  return leverage_from_rows(detail::slack_scaled_rows(P, x));
}

LocalMetric vaidya_metric(const Polytope& P, const Eigen::VectorXd& x) {
  MatrixXd As = detail::slack_scaled_rows(P, x);
  VectorXd w =
      leverage_from_rows(As).array() + beta_vaidya(P.rows(), P.dim());
  return metric_from_rows(MetricKind::Vaidya, x, As, w);
}

Eigen::VectorXd vaidya_theta(const Polytope& P, const Eigen::VectorXd& x) {
  MatrixXd As = detail::slack_scaled_rows(P, x);
  VectorXd w =
      leverage_from_rows(As).array() + beta_vaidya(P.rows(), P.dim());
  LocalMetric V = metric_from_rows(MetricKind::Vaidya, x, As, w);
  return metric_sensitivities(As, V.L);
}

JohnWeights john_weights(const Polytope& P, const Eigen::VectorXd& x,
                         double tol, int max_iter) {
  if (!(tol > 0.0) || max_iter < 1)
    fail(Errc::BadParams, "john weight solver needs tol > 0 and max_iter >= 1");
  MatrixXd As = detail::slack_scaled_rows(P, x);
  const Index m = P.rows();
  const Index d = P.dim();
  const double beta = beta_john(m, d);
  const double alpha = alpha_john(m, d);

  VectorXd w = VectorXd::Constant(m, 1.5 * double(d) / double(m));
  for (int it = 0; it <= max_iter; ++it) {
    VectorXd sigma = john_sigma(As, w, alpha);
    double res = ((w - sigma).array() - beta).abs().maxCoeff();
    if (res <= tol) return {w, res, it};
    if (it == max_iter) break;
    w = 0.5 * w + 0.5 * (sigma.array() + beta).matrix();
  }
  fail(Errc::NoConvergence,
       "john weights: fixed point not reached in " +
           std::to_string(max_iter) + " damped iterations (tol " +
           std::to_string(tol) + ")");
}

LocalMetric john_metric(const Polytope& P, const Eigen::VectorXd& x,
                        const JohnWeights& weights) {
  if (weights.zeta.size() != P.rows())
    fail(Errc::DimensionMismatch, "john weights solved for a different m");
  MatrixXd As = detail::slack_scaled_rows(P, x);
  return metric_from_rows(MetricKind::John, x, As, weights.zeta);
}

Eigen::VectorXd john_theta(const Polytope& P, const Eigen::VectorXd& x,
                           const JohnWeights& weights) {
  MatrixXd As = detail::slack_scaled_rows(P, x);
  LocalMetric J = metric_from_rows(MetricKind::John, x, As, weights.zeta);
  return metric_sensitivities(As, J.L);
}

LocalMetric local_metric(const Polytope& P, MetricKind kind,
                         const Eigen::VectorXd& x, double john_tol) {
  switch (kind) {
    case MetricKind::Dikin: return log_barrier_hessian(P, x);
    case MetricKind::Vaidya: return vaidya_metric(P, x);
    case MetricKind::John:
      return john_metric(P, x, john_weights(P, x, john_tol));
  }
  fail(Errc::BadParams, "unknown metric kind");
}

Eigen::VectorXd grad_leverage(const Polytope& P, const Eigen::VectorXd& x,
                              Eigen::Index i) {
  if (i < 0 || i >= P.rows())
    fail(Errc::BadParams, "row index out of range");
  MatrixXd As = detail::slack_scaled_rows(P, x);
  MatrixXd H = As.transpose() * As;
  MatrixXd Pd = dense_projection_of(As, 0.5 * (H + H.transpose()));
  // grad sigma_i = 2 Ax^T (Sigma - P.^2) e_i
  VectorXd col = -Pd.col(i).array().square();
  col[i] += Pd(i, i);
  return 2.0 * As.transpose() * col;
}

Eigen::VectorXd grad_half_log_det_vaidya(const Polytope& P,
                                         const Eigen::VectorXd& x) {
  MatrixXd As = detail::slack_scaled_rows(P, x);
  const double beta = beta_vaidya(P.rows(), P.dim());
  MatrixXd H = As.transpose() * As;
  MatrixXd Pd = dense_projection_of(As, 0.5 * (H + H.transpose()));
  VectorXd sigma = Pd.diagonal();
  VectorXd w = sigma.array() + beta;
  LocalMetric V = metric_from_rows(MetricKind::Vaidya, x, As, w);
  VectorXd theta = metric_sensitivities(As, V.L);
  // grad Psi = Ax^T (2 Sigma + beta I - P.^2) theta
  VectorXd t = 2.0 * sigma.cwiseProduct(theta) + beta * theta -
               Pd.cwiseProduct(Pd) * theta;
  return As.transpose() * t;
}

Eigen::MatrixXd grad_john_weights(const Polytope& P, const Eigen::VectorXd& x,
                                  const JohnWeights& weights) {
  if (weights.zeta.size() != P.rows())
    fail(Errc::DimensionMismatch, "john weights solved for a different m");
  MatrixXd As = detail::slack_scaled_rows(P, x);
  const Index m = P.rows();
  const double alpha = alpha_john(m, P.dim());
  const VectorXd& zeta = weights.zeta;

  // John projection at the solved weights: C = W^{a/2} Ax, P_J = C(C^T C)^{-1}C^T
  MatrixXd C = zeta.array().pow(alpha / 2).matrix().asDiagonal() * As;
  MatrixXd B = C.transpose() * C;
  MatrixXd Pj = dense_projection_of(C, 0.5 * (B + B.transpose()));
  MatrixXd Lambda = MatrixXd(Pj.diagonal().asDiagonal()) - Pj.cwiseProduct(Pj);

  // (G - a Lambda) (dzeta/zeta) = 2 Lambda Ax dx, G = diag(zeta)
  MatrixXd lhs = MatrixXd(zeta.asDiagonal()) - alpha * Lambda;
  Eigen::FullPivLU<MatrixXd> lu(lhs);
  if (!lu.isInvertible())
    fail(Errc::SingularSystem, "john weight sensitivity system is singular");
  MatrixXd X = lu.solve(2.0 * Lambda * As);
  return zeta.asDiagonal() * X;
}

}  // namespace pw
