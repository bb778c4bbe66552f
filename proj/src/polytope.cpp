#include "polywalk/polytope.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "polywalk/rng.hpp"

namespace pw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows of A scaled by the current slack: row i is a_i^T / s_i.
Eigen::MatrixXd slack_rows(const Eigen::MatrixXd& A, const Eigen::VectorXd& s) {
  return (A.array().colwise() / s.array()).matrix();
}

// Phase-I: find a strictly feasible point of {Ax <= b}, assuming full column
// rank. We center the inflated polytope {Ax <= b + tau} (feasible at x = 0 for
// large tau) and shrink tau, checking the *original* slack after every Newton
// iterate so that unbounded polytopes — whose inflated barrier has no
// minimizer — still terminate as soon as an iterate lands inside K.
Eigen::VectorXd phase_one_witness(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index d = A.cols();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd s = b - A * x;
  if (s.minCoeff() > 0.0) return x;

  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  const double tau_floor = 1e-13 * scale;
  double tau = -s.minCoeff() + scale;  // inflated slack >= scale at x = 0
  int stalls = 0;

  for (int round = 0; round < 500; ++round) {
    // Loose centering of {Ax <= b + tau}; high accuracy is pointless here.
    for (int it = 0; it < 50; ++it) {
      Eigen::VectorXd st = (b.array() + tau).matrix() - A * x;
      Eigen::MatrixXd As = slack_rows(A, st);
      Eigen::VectorXd g = As.colwise().sum().transpose();
      Eigen::MatrixXd H = As.transpose() * As;
      Eigen::LLT<Eigen::MatrixXd> llt(H);
      if (llt.info() != Eigen::Success) break;
      Eigen::VectorXd dx = -llt.solve(g);
      double lambda2 = -g.dot(dx);
      if (!(lambda2 > 1e-4)) break;  // centered enough (or NaN)

      Eigen::VectorXd w = A * dx;
      double t = 1.0;
      int halvings = 0;
      while ((st - t * w).minCoeff() <= 0.0 && halvings++ < 60) t *= 0.5;
      if ((st - t * w).minCoeff() <= 0.0) break;
      double f0 = -st.array().log().sum();
      double slope = g.dot(dx);  // = -lambda2 < 0
      while (halvings++ < 60 &&
             -((st - t * w).array().log().sum()) > f0 + 1e-4 * t * slope)
        t *= 0.5;

      x += t * dx;
      s = b - A * x;
      if (s.minCoeff() > 0.0) return x;
    }

    s = b - A * x;
    if (s.minCoeff() > 0.0) return x;
    double deficit = -s.minCoeff();  // >= 0: worst violation of the original
    double tau_next = std::max(tau * 0.25, deficit * (1.0 + 1e-6));
    if (tau_next >= tau * (1.0 - 1e-9)) {
      if (++stalls >= 3)
        fail(Errc::EmptyInterior,
             "polytope has empty interior (phase-I stalled at violation " +
                 std::to_string(deficit) + ")");
    } else {
      stalls = 0;
    }
    tau = tau_next;
    if (tau < tau_floor)
      fail(Errc::EmptyInterior,
           "polytope has empty interior (inflation exhausted)");
  }
  (void)m;
  fail(Errc::EmptyInterior, "phase-I did not find a strictly feasible point");
}

}  // namespace

Polytope make_polytope(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() < 1 || A.cols() < 1)
    fail(Errc::DimensionMismatch, "constraint matrix must be nonempty");
  if (b.size() != A.rows())
    fail(Errc::DimensionMismatch,
         "b has " + std::to_string(b.size()) + " entries for " +
             std::to_string(A.rows()) + " rows");
  if (!A.allFinite() || !b.allFinite())
    fail(Errc::DegenerateInput, "constraint data contains NaN or infinity");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < A.cols())
    fail(Errc::RankDeficient, "constraint matrix has rank " +
                                  std::to_string(qr.rank()) + " < dimension " +
                                  std::to_string(A.cols()));

  Polytope P;
  P.A = A;
  P.b = b;
  P.interior_witness = phase_one_witness(A, b);
  return P;
}

Slackness slackness(const Polytope& P, const Eigen::VectorXd& x) {
  if (x.size() != P.dim())
    fail(Errc::DimensionMismatch, "point has dimension " +
                                      std::to_string(x.size()) + ", expected " +
                                      std::to_string(P.dim()));
  return P.b - P.A * x;
}

bool contains_interior(const Polytope& P, const Eigen::VectorXd& x) {
  return slackness(P, x).minCoeff() > 0.0;
}

Chord chord_endpoints(const Polytope& P, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u) {
  if (u.size() != P.dim())
    fail(Errc::DimensionMismatch, "direction has wrong dimension");
  if (!u.allFinite() || u.squaredNorm() == 0.0)
    fail(Errc::DegenerateInput, "chord direction must be nonzero and finite");
  Eigen::VectorXd s = slackness(P, x);
  if (s.minCoeff() <= 0.0)
    fail(Errc::NotInterior, "chord base point is not interior");

  Eigen::VectorXd w = P.A * u;
  double t_plus = kInf;
  double t_minus = -kInf;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (w[i] > 0.0)
      t_plus = std::min(t_plus, s[i] / w[i]);
    else if (w[i] < 0.0)
      t_minus = std::max(t_minus, s[i] / w[i]);
  }
  if (!std::isfinite(t_plus))
    fail(Errc::UnboundedDirection, "polytope is unbounded along +u");
  if (!std::isfinite(t_minus))
    fail(Errc::UnboundedDirection, "polytope is unbounded along -u");
  return {t_minus, t_plus};
}

double cross_ratio(const Polytope& P, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  if (y.size() != x.size())
    fail(Errc::DimensionMismatch, "points have different dimensions");
  double n = (x - y).norm();
  if (n <= 1e-14 * (1.0 + x.norm()))
    fail(Errc::DegeneratePair, "points coincide up to working precision");
  if (!contains_interior(P, y))
    fail(Errc::NotInterior, "second point is not interior");

  Eigen::VectorXd u = (y - x) / n;
  Chord c = chord_endpoints(P, x, u);  // validates x as interior
  // endpoints at parameters c.t_minus < 0 < n < c.t_plus along u
  if (c.t_plus - n <= 0.0 || -c.t_minus <= 0.0)
    fail(Errc::DegeneratePair, "point sits on the boundary numerically");
  return ((c.t_plus - c.t_minus) * n) / ((-c.t_minus) * (c.t_plus - n));
}

double cross_ratio_lower_bound(const Polytope& P, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) {
  Eigen::VectorXd s = slackness(P, x);
  if (s.minCoeff() <= 0.0)
    fail(Errc::NotInterior, "first point is not interior");
  Eigen::VectorXd diff = P.A * (x - y);
  return (diff.cwiseAbs().array() / s.array()).maxCoeff();
}

Eigen::VectorXd analytic_center(const Polytope& P, double tol, int max_iter) {
  Eigen::VectorXd x = P.interior_witness;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd s = slackness(P, x);
    Eigen::MatrixXd As = slack_rows(P.A, s);
    Eigen::VectorXd g = As.colwise().sum().transpose();
    Eigen::MatrixXd H = As.transpose() * As;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() != Eigen::Success)
      fail(Errc::FactorizationFailure,
           "analytic center: Hessian factorization failed");
    Eigen::VectorXd dx = -llt.solve(g);
    double lambda2 = -g.dot(dx);
    if (!std::isfinite(lambda2))
      fail(Errc::FactorizationFailure, "analytic center: Newton step is NaN");
    // once the decrement passes tol we take one last full step (quadratic
    // phase), which polishes the iterate to ~tol^2 accuracy
    bool done = lambda2 <= tol * tol;

    Eigen::VectorXd w = P.A * dx;
    double t = 1.0;
    int halvings = 0;
    while ((s - t * w).minCoeff() <= 0.0 && halvings++ < 60) t *= 0.5;
    if ((s - t * w).minCoeff() <= 0.0) {
      if (done) return x;
      fail(Errc::NoConvergence, "analytic center: step collapsed to zero");
    }
    double f0 = -s.array().log().sum();
    double slope = g.dot(dx);
    while (halvings++ < 60 &&
           -((s - t * w).array().log().sum()) > f0 + 1e-4 * t * slope)
      t *= 0.5;
    x += t * dx;
    if (done) return x;
  }
  fail(Errc::NoConvergence,
       "analytic center: no convergence in " + std::to_string(max_iter) +
           " Newton iterations (polytope may be unbounded)");
}

Polytope generate(Family family, Eigen::Index m, Eigen::Index d,
                  std::uint64_t seed) {
  switch (family) {
    case Family::HypercubeRepeated: {
      if (d < 1 || m < 2 * d || m % (2 * d) != 0)
        fail(Errc::BadParams,
             "hypercube_repeated needs m a positive multiple of 2d");
      Eigen::Index reps = m / (2 * d);
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, d);
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < reps; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) A(r++, j) = 1.0;
        for (Eigen::Index j = 0; j < d; ++j) A(r++, j) = -1.0;
      }
      return make_polytope(A, Eigen::VectorXd::Ones(m));
    }
    case Family::RandomSymmetric2D: {
      if (d != 2) fail(Errc::BadParams, "random_symmetric_2d is 2-D only");
      if (m < 2 || m % 2 != 0)
        fail(Errc::BadParams, "random_symmetric_2d needs even m >= 2");
      Rng rng(seed);
      Eigen::MatrixXd A(m, 2);
      for (Eigen::Index i = 0; i < m; ++i) {
        double u1 = rng.uniform();
        double u2 = rng.uniform();
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        A(i, 0) = sign * u1;
        A(i, 1) = sign * u2;
      }
      return make_polytope(A, Eigen::VectorXd::Ones(m));
    }
    case Family::RegularPolygon: {
      if (d != 2) fail(Errc::BadParams, "regular_polygon is 2-D only");
      if (m < 3) fail(Errc::BadParams, "regular_polygon needs m >= 3");
      Eigen::MatrixXd A(m, 2);
      double apothem = std::cos(std::numbers::pi / static_cast<double>(m));
      for (Eigen::Index i = 0; i < m; ++i) {
        double theta =
            (2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
            static_cast<double>(m);
        A(i, 0) = std::cos(theta);
        A(i, 1) = std::sin(theta);
      }
      return make_polytope(A, Eigen::VectorXd::Constant(m, apothem));
    }
  }
  fail(Errc::BadParams, "unknown polytope family");
}

Family family_from_string(const std::string& name) {
  if (name == "hypercube_repeated") return Family::HypercubeRepeated;
  if (name == "random_symmetric_2d") return Family::RandomSymmetric2D;
  if (name == "regular_polygon") return Family::RegularPolygon;
  fail(Errc::BadParams, "unknown family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::HypercubeRepeated: return "hypercube_repeated";
    case Family::RandomSymmetric2D: return "random_symmetric_2d";
    case Family::RegularPolygon: return "regular_polygon";
  }
  return "unknown";
}

void save_polytope(const Polytope& P, std::ostream& out) {
  out << P.rows() << ' ' << P.dim() << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", P.A(i, j));
      out << buf << ' ';
    }
    std::snprintf(buf, sizeof buf, "%.17g", P.b[i]);
    out << buf << '\n';
  }
  if (!out) fail(Errc::Io, "failed to write polytope");
}

Polytope load_polytope(std::istream& in) {
  Eigen::Index m = 0, d = 0;
  in >> m >> d;
  if (!in || m < 1 || d < 1)
    fail(Errc::Io, "malformed polytope header (expected 'm d')");
  Eigen::MatrixXd A(m, d);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) in >> A(i, j);
    in >> b[i];
  }
  if (!in) fail(Errc::Io, "truncated polytope data");
  return make_polytope(A, b);
}

void save_polytope_file(const Polytope& P, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot open '" + path + "' for writing");
  save_polytope(P, out);
  out.flush();
  if (!out) fail(Errc::Io, "failed writing '" + path + "'");
}

Polytope load_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open '" + path + "'");
  return load_polytope(in);
}

}  // namespace pw
