#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace hausd {

using Vec = Eigen::VectorXd;

enum class Family { Euclidean, Torus, SU2, Heisenberg, UpperTriangular };

std::string family_name(Family f);

// One of the five concrete groups.  Points are plain coordinate vectors:
//   Euclidean(n)       x in R^n
//   Torus(n)           x in [0,1)^n, additive coordinates
//   SU2                unit quaternion in R^4
//   Heisenberg(n)      (v, w, t) in R^n x R^n x R
//   UpperTriangular(n) strict upper entries a_ij, i<j, row-major
struct GroupSpec {
  Family family = Family::Euclidean;
  int n = 1;

  static GroupSpec euclidean(int n);
  static GroupSpec torus(int n);
  static GroupSpec su2();
  static GroupSpec heisenberg(int n);
  static GroupSpec upper_triangular(int n);

  int coord_dim() const;
  // s (= log2 C_mu) for Euclidean/Torus/SU2, Q for the homogeneous groups.
  double homogeneous_dim() const;
  double doubling_constant() const;

  bool operator==(const GroupSpec& o) const { return family == o.family && n == o.n; }
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct SnowflakeParams {
  double a = 1.0;
  double b = 1.0;
  double beta = 1.0;
};

// Shrinking centered boxes V_n of side 2^-n on the torus, used by the
// Struble-type invariant metric sup_n nu(xV_n \ yV_n union yV_n \ xV_n).
struct StrubleFamily {
  GroupSpec group;  // Torus only
  int n_max = 16;
};

Vec identity(const GroupSpec& spec);
Vec canonical(const GroupSpec& spec, Vec x);  // torus reduction / SU2 renormalization
bool valid_point(const GroupSpec& spec, const Vec& x, double tol = 1e-9);

Vec multiply(const GroupSpec& spec, const Vec& g, const Vec& h);
Vec inverse(const GroupSpec& spec, const Vec& g);
// Quasi-distance.  On the homogeneous families this is the left-invariant
// |g^-1 h|, which is asymmetric on T_1(n,R); callers testing membership in
// B(x,r) must pass the center as the first argument.
double distance(const GroupSpec& spec, const Vec& g, const Vec& h);

// Homogeneous quasi-norm |g| = distance(e, g); for Heisenberg/UpperTriangular
// this is the calibrated gauge.
double gauge(const GroupSpec& spec, const Vec& g);

double ball_measure(const GroupSpec& spec, const Ball& ball);
double ball_measure(const GroupSpec& spec, double radius);

// Gauge constant c_n making the Haar measure of the unit gauge ball equal 1,
// so that ball_measure = r^Q.  Deterministic, cached per spec.
double calibrate_gauge(const GroupSpec& spec);

double snowflake_distance(const GroupSpec& spec, const Vec& g, const Vec& h, double theta);

double struble_metric(const Vec& x, const Vec& y, const StrubleFamily& fam);

struct DoublingProfile {
  double max_ratio = 0.0;  // max mu(B(x,2r)) / mu(B(x,r))
  double c_mu = 0.0;
  bool doubling_ok = false;    // max_ratio <= C_mu (+tol)
  bool dimension_ok = false;   // mu(B(x,kr)) <= C_mu k^s mu(B(x,r)) for k in {1.5,2,4,8}
  double worst_dimension_slack = 0.0;  // max over samples of lhs/rhs - 1
};

DoublingProfile doubling_profile(const GroupSpec& spec, const std::vector<Vec>& centers,
                                 const std::vector<double>& radii, double tol = 1e-9);

// --- quadrature grids ---------------------------------------------------

// Midpoint tensor grid over a truncated piece of the group, with cell Haar
// weights.  Box grids cover [-radius, radius]^d in coordinates (the full
// torus for Torus, all of S^3 for SU2); ball grids keep only cells whose
// representative lies in a metric ball and carry the ball center so lookup
// works in local (left-translated) coordinates.
class GroupGrid {
 public:
  GroupSpec spec;
  Vec center;        // identity for box grids
  Vec lo, hi;        // local coordinate box (angles for SU2)
  Eigen::VectorXi dims;
  Vec h;             // cell sizes per axis
  std::vector<Vec> nodes;   // global group points (kept cells only)
  Vec weights;              // Haar measure per kept cell
  double domain_measure = 0.0;  // Haar measure of the truncated domain

  // index of the cell containing x, or -1 if outside the kept cells
  int locate(const Vec& x) const;

  std::size_t size() const { return nodes.size(); }

  std::vector<int> cellmap_;  // full tensor cell -> kept index or -1; filled by the factories
};

GroupGrid make_box_grid(const GroupSpec& spec, double radius, int res);
GroupGrid make_ball_grid(const GroupSpec& spec, const Ball& ball, int res);

// Piecewise-constant function on a grid.
struct GridFunction {
  std::shared_ptr<const GroupGrid> grid;
  Vec values;
  double operator()(const Vec& x) const {
    int i = grid->locate(x);
    return i < 0 ? 0.0 : values[i];
  }
};

// --- sampling -----------------------------------------------------------

Vec random_point(const GroupSpec& spec, std::mt19937_64& gen, double radius = 1.0);
Vec random_ball_point(const GroupSpec& spec, const Ball& ball, std::mt19937_64& gen);

}  // namespace hausd
