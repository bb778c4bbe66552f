#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "polywalk/errors.hpp"

namespace pw {

// K = {x : Ax <= b}. Construction validates full column rank and a nonempty
// interior (a strictly feasible witness is stored). Boundedness is *not*
// checked here; chord_endpoints reports UnboundedDirection lazily.
struct Polytope {
  Eigen::MatrixXd A;  // m x d, row i is a_i^T
  Eigen::VectorXd b;  // m
  Eigen::VectorXd interior_witness;

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index dim() const { return A.cols(); }
};

// s_i = b_i - a_i^T x; all entries strictly positive iff x is interior.
using Slackness = Eigen::VectorXd;

Polytope make_polytope(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

Slackness slackness(const Polytope& P, const Eigen::VectorXd& x);

bool contains_interior(const Polytope& P, const Eigen::VectorXd& x);

struct Chord {
  double t_minus;  // < 0
  double t_plus;   // > 0
};

// Boundary hits of {x + t*u}: t_plus = min over {a_i^T u > 0} of s_i/(a_i^T u),
// symmetrically for t_minus. Throws UnboundedDirection if a side is unbounded.
Chord chord_endpoints(const Polytope& P, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& u);

// Cross-ratio d_K(x,y) = |e(x)-e(y)| |x-y| / (|e(x)-x| |e(y)-y|) with e(x),e(y)
// the chord endpoints on the x- and y-side. Throws DegeneratePair when
// |x-y| <= 1e-14 * (1 + |x|).
double cross_ratio(const Polytope& P, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

// Lower bound max_i |a_i^T(x-y)| / s_{x,i} <= d_K(x,y); exposed for tests.
double cross_ratio_lower_bound(const Polytope& P, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y);

// Damped-Newton minimizer of F(x) = -sum log s_i, stopping when the Newton
// decrement sqrt(g^T H^{-1} g) <= tol. Throws NoConvergence past max_iter.
Eigen::VectorXd analytic_center(const Polytope& P, double tol = 1e-8,
                                int max_iter = 100);

enum class Family {
  HypercubeRepeated,   // the 2d rows of [-1,1]^d, each repeated m/(2d) times
  RandomSymmetric2D,   // a_i ~ U[0,1]^2, both signs flipped w.p. 1/2, b_i = 1
  RegularPolygon,      // edges of the regular m-gon inscribed in the unit circle
};

Polytope generate(Family family, Eigen::Index m, Eigen::Index d,
                  std::uint64_t seed);

Family family_from_string(const std::string& name);
const char* family_name(Family f);

// Text format: first line "m d", then one line per row with d+1 values
// "a_i1 ... a_id b_i", printed with %.17g so a save/load cycle is bit-exact.
void save_polytope(const Polytope& P, std::ostream& out);
Polytope load_polytope(std::istream& in);
void save_polytope_file(const Polytope& P, const std::string& path);
Polytope load_polytope_file(const std::string& path);

}  // namespace pw
