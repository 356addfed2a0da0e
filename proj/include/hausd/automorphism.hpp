#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "hausd/group.hpp"

namespace hausd {

// A single automorphism of one of the supported groups:
//   Euclidean        x -> M x, M invertible
//   Torus            x -> M x mod 1, M integer with det = +-1
//   SU2              x -> q x q^-1 (inner)
//   Heisenberg       dilation (v,w,t) -> (l v, l w, l^2 t), or a symplectic
//                    map (v,w) -> S(v,w) with t fixed
//   UpperTriangular  dilation a_ij -> l^{j-i} a_ij
struct AutomorphismSpec {
  enum class Kind { Matrix, TorusMatrix, Su2Conjugation, Dilation, Symplectic };
  GroupSpec group;
  Kind kind = Kind::Dilation;
  Eigen::MatrixXd mat;  // Matrix / TorusMatrix / Symplectic
  Vec quat;             // Su2Conjugation
  double lambda = 1.0;  // Dilation
};

AutomorphismSpec euclidean_automorphism(const GroupSpec& spec, const Eigen::MatrixXd& m);
AutomorphismSpec torus_automorphism(const GroupSpec& spec, const Eigen::MatrixXi& m);
AutomorphismSpec su2_inner_automorphism(const Vec& conjugator);
AutomorphismSpec dilation_automorphism(const GroupSpec& spec, double lambda);
AutomorphismSpec symplectic_automorphism(const GroupSpec& spec, const Eigen::MatrixXd& s);
AutomorphismSpec identity_automorphism(const GroupSpec& spec);

Vec apply(const AutomorphismSpec& a, const Vec& g);
AutomorphismSpec inverse(const AutomorphismSpec& a);
double modulus(const AutomorphismSpec& a);
double k_constant(const AutomorphismSpec& a);

// A measurable family u -> A(u) over a weighted parameter box Omega.
struct AutomorphismFamily {
  GroupSpec group;
  std::function<AutomorphismSpec(const Vec& u)> at;
};

struct StarCertificate {
  double k = 0.0;
  long samples_checked = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max distance(x', A^-1 y)/r over samples
};

// Samples the ball uniformly, applies A^-1 and checks containment in
// B(A^-1(x), k r).  Violations are reported, never thrown.
StarCertificate verify_star_condition(const AutomorphismSpec& a, const Ball& ball, double k,
                                      std::uint64_t seed, long n_samples);

struct ModulusEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

// Monte Carlo estimate of mu(A(E))/mu(E) for a coordinate box E.
ModulusEstimate estimate_modulus(const AutomorphismSpec& a, std::uint64_t seed, long n_samples);

struct LipschitzEstimate {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double mean_ratio = 0.0;
  long pairs = 0;
};

// Max over sampled pairs of rho(Ax, Ay)/rho(x, y); a lower bound for the
// true Lipschitz constant.
LipschitzEstimate estimate_lipschitz(const AutomorphismSpec& a, std::uint64_t seed, long n_pairs);

// Certified empirical k for automorphisms without a closed-form constant:
// binary search for the smallest k with zero star violations, times a 1.05
// safety factor.
double certify_k_empirical(const AutomorphismSpec& a, std::uint64_t seed, long n_samples);

struct ScalingInterval {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

// Observed interval of rho_1(A(x), A(y))/rho_1(x, y) over sampled pairs on
// the torus.  Reported, not asserted.
ScalingInterval struble_scaling_ratio(const AutomorphismSpec& a, const StrubleFamily& fam,
                                      std::uint64_t seed, long n_pairs);

}  // namespace hausd
