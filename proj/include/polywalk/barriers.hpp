#pragma once

#include <Eigen/Core>

#include "polywalk/polytope.hpp"

namespace pw {

enum class MetricKind { Dikin, Vaidya, John };

const char* metric_kind_name(MetricKind k);
MetricKind metric_kind_from_string(const std::string& name);

// A state-dependent positive-definite metric M = sum_i w_i a_i a_i^T / s_i^2
// together with its Cholesky factor and half log-determinant.
//   Dikin:  w = 1          (M = H_x, the log-barrier Hessian)
//   Vaidya: w = sigma + d/m
//   John:   w = zeta
struct LocalMetric {
  MetricKind kind;
  Eigen::VectorXd x;
  Eigen::MatrixXd M;
  Eigen::MatrixXd L;  // lower triangular, M = L L^T
  double half_log_det;
  Eigen::VectorXd weights;

  // |v|_M = sqrt(v^T M v) = |L^T v|_2
  double local_norm(const Eigen::VectorXd& v) const;
};

// beta offsets and the John exponent/kappa, all functions of (m, d).
inline double beta_vaidya(Eigen::Index m, Eigen::Index d) {
  return static_cast<double>(d) / static_cast<double>(m);
}
inline double beta_john(Eigen::Index m, Eigen::Index d) {
  return static_cast<double>(d) / (2.0 * static_cast<double>(m));
}
inline double kappa_john(Eigen::Index m, Eigen::Index d) {
  return std::log2(2.0 * static_cast<double>(m) / static_cast<double>(d));
}
inline double alpha_john(Eigen::Index m, Eigen::Index d) {
  return 1.0 - 1.0 / kappa_john(m, d);
}

LocalMetric log_barrier_hessian(const Polytope& P, const Eigen::VectorXd& x);

// sigma_i = a_i^T H_x^{-1} a_i / s_i^2, via one Cholesky of H_x and m
// triangular solves (never builds the m x m projection).
Eigen::VectorXd leverage_scores(const Polytope& P, const Eigen::VectorXd& x);

LocalMetric vaidya_metric(const Polytope& P, const Eigen::VectorXd& x);

// theta_{V,i} = a_i^T V_x^{-1} a_i / s_i^2
Eigen::VectorXd vaidya_theta(const Polytope& P, const Eigen::VectorXd& x);

struct JohnWeights {
  Eigen::VectorXd zeta;
  double residual;  // max_i |zeta_i - sigma_{x,zeta,i} - beta_J|
  int iterations;
};

// Damped fixed point w <- (1-eta) w + eta (sigma_{x,w} + beta_J), eta = 1/2,
// from w0 = 3d/(2m) * 1, where sigma_{x,w} is the diagonal of the projection
// P_{x,w} = W^{a/2} A_x (A_x^T W^a A_x)^{-1} A_x^T W^{a/2},  A_x = S_x^{-1} A.
JohnWeights john_weights(const Polytope& P, const Eigen::VectorXd& x,
                         double tol = 1e-10, int max_iter = 500);

LocalMetric john_metric(const Polytope& P, const Eigen::VectorXd& x,
                        const JohnWeights& weights);

// theta_{J,i} = a_i^T J_x^{-1} a_i / s_i^2
Eigen::VectorXd john_theta(const Polytope& P, const Eigen::VectorXd& x,
                           const JohnWeights& weights);

// Dispatcher used by the walks.
LocalMetric local_metric(const Polytope& P, MetricKind kind,
                         const Eigen::VectorXd& x, double john_tol = 1e-10);

// --- analytic gradients -----------------------------------------------------
// Differentiation-oracle routines; they build dense m x m projections and are
// O(m^2 d)..O(m^3). The sampling path never calls them.

// grad of sigma_{x,i}: 2 A_x^T (Sigma_x - P_x∘P_x) e_i
Eigen::VectorXd grad_leverage(const Polytope& P, const Eigen::VectorXd& x,
                              Eigen::Index i);

// grad of Psi(x) = 1/2 log det V_x: A_x^T (2 Sigma_x + beta_V I - P_x∘P_x) theta_x
Eigen::VectorXd grad_half_log_det_vaidya(const Polytope& P,
                                         const Eigen::VectorXd& x);

// Jacobian d zeta / d x (m x d), from the linear system
// (G - a Lambda) (dzeta/zeta) = 2 Lambda A_x dx with G = diag(zeta),
// Lambda = Sigma_J - P_J∘P_J. Throws SingularSystem if G - a Lambda is singular.
Eigen::MatrixXd grad_john_weights(const Polytope& P, const Eigen::VectorXd& x,
                                  const JohnWeights& weights);

namespace detail {
// Rows a_i^T / s_i; throws NotInterior when min_i s_i < 1e-12 * (1 + |b_i|).
Eigen::MatrixXd slack_scaled_rows(const Polytope& P, const Eigen::VectorXd& x);
}  // namespace detail

}  // namespace pw
