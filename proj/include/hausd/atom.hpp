#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hausd/automorphism.hpp"
#include "hausd/group.hpp"

namespace hausd {

// A (1,infty)-atom: supported in a ball, bounded by 1/mu(B), mean zero.
// Atoms carry their own quadrature representation (nodes/weights/values)
// so that integrals of pushforwards stay exact under change of variables,
// plus a pointwise evaluator for operator quadrature.
struct Atom {
  GroupSpec spec;
  Ball support;
  double sup_bound = 0.0;  // declared ||a||_inf
  std::vector<Vec> nodes;
  Vec weights;
  Vec values;
  std::function<double(const Vec&)> eval;

  double operator()(const Vec& x) const { return eval(x); }
  double integral() const { return values.dot(weights); }
};

struct AtomReport {
  double support_residual = 0.0;  // max excess of node distance over radius, relative
  double sup_residual = 0.0;      // max|a| * mu(B) - 1, clamped at 0
  double cancel_residual = 0.0;   // |int a| / (||a||_inf mu(B))
  bool pass = false;
};

AtomReport validate_atom(const Atom& a, double tol);

// Random piecewise-constant atom on a grid over the ball: mean-subtracted,
// rescaled to ||a||_inf = 1/mu(B).  Deterministic in the seed.
Atom make_random_atom(const GroupSpec& spec, const Ball& ball, std::uint64_t seed, int res = 8);

struct RenormConstants {
  double c_mu = 0.0;
  double a = 1.0;
  double b = 1.0;
  double s = 0.0;
  static RenormConstants for_group(const GroupSpec& spec);
};

struct Pushforward {
  double lambda_scale = 0.0;  // C_mu (b k / a)^s
  Atom atom;                  // a' = a o A / lambda_scale on B(A^-1 c, k r)
};

Pushforward pushforward_atom(const Atom& a, const AutomorphismSpec& A,
                             const RenormConstants& consts);

struct AtomicRepresentation {
  std::vector<double> lambdas;
  std::vector<Atom> atoms;
};

double h1_upper_bound(const AtomicRepresentation& rep);

struct RepresentResult {
  AtomicRepresentation rep;
  double residual_l1 = 0.0;  // L1 mass of f not captured by the given balls
};

// Splits a grid function into atoms supported on the given (disjoint) balls.
// A test harness for constructed inputs, not a general decomposition.
RepresentResult represent(const GridFunction& f, const std::vector<Ball>& balls,
                          const GroupSpec& spec);

}  // namespace hausd
