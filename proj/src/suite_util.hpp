#pragma once

// Internal helpers shared by the experiment suites and the acceptance runner:
// canonical test kernels, families, and smooth bump functions per group.

#include <cmath>
#include <random>
#include <string>

#include "hausd/hausdorff.hpp"

namespace hausd::harness::detail {

// compactly supported C^2 bump of the quasi-distance to the center
inline ScalarFn smooth_bump(const GroupSpec& spec, const Vec& center, double radius) {
  Vec c = canonical(spec, center);
  return [spec, c, radius](const Vec& x) {
    double t = distance(spec, c, x) / radius;
    if (t >= 1.0) return 0.0;
    double s = 1.0 - t * t;
    return s * s * s;
  };
}

inline Kernel function_kernel(ParamFn phi, std::string text, const Vec& lo, const Vec& hi,
                              int res = 256) {
  Kernel k;
  k.phi = std::move(phi);
  k.phi_text = std::move(text);
  k.lo = lo;
  k.hi = hi;
  k.resolution = res;
  return k;
}

inline Kernel unit_kernel(double lo = 1.0, double hi = 2.0, int res = 256) {
  return function_kernel([](const Vec&) { return 1.0; }, "1", Vec::Constant(1, lo),
                         Vec::Constant(1, hi), res);
}

// canonical nontrivial family over Omega = [1,2] for each group
inline AutomorphismFamily default_family(const GroupSpec& spec) {
  AutomorphismFamily fam;
  fam.group = spec;
  switch (spec.family) {
    case Family::Euclidean:
      // A(u) x = x / u, so k(u) = u
      fam.at = [spec](const Vec& u) {
        return euclidean_automorphism(spec,
                                      Eigen::MatrixXd::Identity(spec.n, spec.n) / u[0]);
      };
      break;
    case Family::Torus:
      if (spec.n == 1) {
        AutomorphismSpec ident = identity_automorphism(spec);
        AutomorphismSpec refl = torus_automorphism(spec, -Eigen::MatrixXi::Identity(1, 1));
        fam.at = [ident, refl](const Vec& u) { return u[0] < 1.5 ? refl : ident; };
      } else {
        Eigen::MatrixXi m = Eigen::MatrixXi::Identity(spec.n, spec.n);
        m(0, 1) = 1;  // shear
        AutomorphismSpec a = torus_automorphism(spec, m);
        fam.at = [a](const Vec&) { return a; };
      }
      break;
    case Family::SU2:
      fam.at = [](const Vec& u) {
        Vec q(4);
        q << 1.0, u[0] - 1.5, 0.3, 0.1;
        return su2_inner_automorphism(q);
      };
      break;
    default:
      fam.at = [spec](const Vec& u) { return dilation_automorphism(spec, u[0]); };
      break;
  }
  return fam;
}

// seeded (kernel, family, f) triple with controlled support so that the
// truncated domain captures everything the operator touches
struct Triple {
  Kernel kernel;
  AutomorphismFamily family;
  ScalarFn f;
  bool nonnegative = false;
};

inline Triple random_triple(const GroupSpec& spec, std::mt19937_64& gen, int kernel_res = 64) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Triple t;
  double c0 = 0.2 + u01(gen);
  double c1 = u01(gen);
  double c2 = u01(gen);
  bool signed_kernel = u01(gen) < 0.3;
  double flip = signed_kernel ? -1.0 : 1.0;
  t.nonnegative = !signed_kernel;
  auto phi = [c0, c1, c2, flip](const Vec& u) {
    double x = u[0] - 1.5;
    return c0 + flip * c1 * x + c2 * x * x;
  };
  // c0 > 0 dominates |c1 x| only for |x| <= 0.5 when c1 <= 2 c0; keep the
  // nonnegative branch truly nonnegative
  t.kernel = function_kernel(phi, "random-poly", Vec::Constant(1, 1.0), Vec::Constant(1, 2.0),
                             kernel_res);
  if (t.nonnegative) {
    auto raw = t.kernel.phi;
    t.kernel.phi = [raw](const Vec& u) { return std::abs(raw(u)); };
  }
  t.family = default_family(spec);
  double radius = spec.family == Family::Torus ? 0.15 + 0.1 * u01(gen) : 0.3 + 0.2 * u01(gen);
  if (spec.family == Family::SU2) radius = 0.4 + 0.2 * u01(gen);
  t.f = smooth_bump(spec, identity(spec), radius);
  return t;
}

// domain grid sized so that the triple's operator images stay inside
inline GroupGrid triple_domain(const GroupSpec& spec, int res) {
  switch (spec.family) {
    case Family::Euclidean: return make_box_grid(spec, 2.0, res);
    case Family::Torus:
    case Family::SU2: return make_box_grid(spec, 0.0, res);
    case Family::Heisenberg:
    case Family::UpperTriangular: return make_box_grid(spec, 1.0, res);
  }
  return make_box_grid(spec, 2.0, res);
}

inline int default_domain_res(const GroupSpec& spec) {
  int d = spec.family == Family::SU2 ? 3 : spec.coord_dim();
  if (d <= 1) return 2048;
  if (d == 2) return 96;
  if (d == 3) return 36;
  if (d == 4) return 16;
  return 10;
}

inline Ball unit_test_ball(const GroupSpec& spec) {
  double r = spec.family == Family::Torus ? 0.25 : 1.0;
  return {identity(spec), r};
}

}  // namespace hausd::harness::detail
