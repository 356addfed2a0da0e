#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hausd/automorphism.hpp"
#include "hausd/rng.hpp"

using namespace hausd;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<long>(v.size()));
  long i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// one representative automorphism per group
std::vector<AutomorphismSpec> representatives() {
  std::vector<AutomorphismSpec> out;
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 0, 0.5;
  out.push_back(euclidean_automorphism(GroupSpec::euclidean(2), m));
  Eigen::MatrixXi t(2, 2);
  t << 1, 1, 0, 1;
  out.push_back(torus_automorphism(GroupSpec::torus(2), t));
  out.push_back(su2_inner_automorphism(vec({1, 2, 0.5, -1})));
  out.push_back(dilation_automorphism(GroupSpec::heisenberg(1), 2.0));
  Eigen::MatrixXd s(2, 2);
  s << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  out.push_back(symplectic_automorphism(GroupSpec::heisenberg(1), s));
  out.push_back(dilation_automorphism(GroupSpec::upper_triangular(3), 0.6));
  return out;
}

}  // namespace

TEST_CASE("constructor validation") {
  Eigen::MatrixXd sing = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(euclidean_automorphism(GroupSpec::euclidean(2), sing), std::invalid_argument);
  Eigen::MatrixXi det2 = 2 * Eigen::MatrixXi::Identity(2, 2);
  CHECK_THROWS_AS(torus_automorphism(GroupSpec::torus(2), det2), std::invalid_argument);
  CHECK_THROWS_AS(dilation_automorphism(GroupSpec::heisenberg(1), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(dilation_automorphism(GroupSpec::euclidean(1), 2.0), std::invalid_argument);
  Eigen::MatrixXd notsym(2, 2);
  notsym << 2, 0, 0, 2;  // S'JS = 4J
  CHECK_THROWS_AS(symplectic_automorphism(GroupSpec::heisenberg(1), notsym), std::invalid_argument);
}

TEST_CASE("homomorphism property over seeded pairs") {
  for (const AutomorphismSpec& a : representatives()) {
    const GroupSpec& spec = a.group;
    CAPTURE(family_name(spec.family));
    auto gen = rng::substream(23, family_name(spec.family));
    // arccos on SU2 and the root-homogeneous gauges on Heisenberg /
    // upper-triangular amplify coordinate roundoff to ~sqrt(eps) near zero
    bool flat = spec.family == Family::Euclidean || spec.family == Family::Torus;
    double tol = flat ? 1e-9 : 1e-7;
    for (int trial = 0; trial < 1000; ++trial) {
      Vec g = canonical(spec, random_point(spec, gen));
      Vec h = canonical(spec, random_point(spec, gen));
      Vec lhs = apply(a, multiply(spec, g, h));
      Vec rhs = multiply(spec, apply(a, g), apply(a, h));
      REQUIRE(distance(spec, canonical(spec, lhs), canonical(spec, rhs)) <= tol);
    }
  }
}

TEST_CASE("inverse consistency") {
  for (const AutomorphismSpec& a : representatives()) {
    const GroupSpec& spec = a.group;
    CAPTURE(family_name(spec.family));
    auto gen = rng::substream(29, "inv");
    AutomorphismSpec ai = inverse(a);
    bool flat = spec.family == Family::Euclidean || spec.family == Family::Torus;
    double tol = flat ? 1e-10 : 1e-7;
    for (int trial = 0; trial < 200; ++trial) {
      Vec g = canonical(spec, random_point(spec, gen));
      REQUIRE(distance(spec, canonical(spec, apply(ai, apply(a, g))), g) <= tol);
    }
    CHECK(modulus(a) * modulus(ai) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("torus action matches the integer matrix") {
  GroupSpec t2 = GroupSpec::torus(2);
  Eigen::MatrixXi m(2, 2);
  m << 1, 1, 0, 1;
  AutomorphismSpec a = torus_automorphism(t2, m);
  Vec y = apply(a, vec({0.25, 0.5}));
  CHECK(y[0] == doctest::Approx(0.75));
  CHECK(y[1] == doctest::Approx(0.5));
  CHECK(modulus(a) == doctest::Approx(1.0));
}

TEST_CASE("modulus closed forms") {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 0, 3;
  CHECK(modulus(euclidean_automorphism(GroupSpec::euclidean(2), m)) == doctest::Approx(6.0));
  CHECK(modulus(dilation_automorphism(GroupSpec::heisenberg(1), 2.0)) == doctest::Approx(16.0));
  CHECK(modulus(dilation_automorphism(GroupSpec::heisenberg(2), 2.0)) == doctest::Approx(64.0));
  CHECK(modulus(dilation_automorphism(GroupSpec::upper_triangular(3), 3.0)) ==
        doctest::Approx(81.0));
  CHECK(modulus(su2_inner_automorphism(vec({1, 1, 1, 1}))) == doctest::Approx(1.0));
}

TEST_CASE("k_constant closed forms") {
  GroupSpec r2 = GroupSpec::euclidean(2);
  Eigen::MatrixXd minv(2, 2);
  minv << 1, 2, 0, 1;
  AutomorphismSpec a = euclidean_automorphism(r2, minv.inverse());
  CHECK(k_constant(a) == doctest::Approx(3.0).epsilon(1e-12));  // max abs row sum of M^-1
  CHECK(k_constant(dilation_automorphism(GroupSpec::heisenberg(1), 2.0)) == doctest::Approx(0.5));
  CHECK(k_constant(su2_inner_automorphism(vec({1, 2, 3, 4}))) == doctest::Approx(1.0));
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  CHECK(k_constant(symplectic_automorphism(GroupSpec::heisenberg(1), rot)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // squeeze map: largest singular value of S^-1 wins
  Eigen::MatrixXd sq(2, 2);
  sq << 2, 0, 0, 0.5;
  CHECK(k_constant(symplectic_automorphism(GroupSpec::heisenberg(1), sq)) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("star condition certificates") {
  GroupSpec r2 = GroupSpec::euclidean(2);
  Eigen::MatrixXd minv(2, 2);
  minv << 1, 2, 0, 1;
  AutomorphismSpec a = euclidean_automorphism(r2, minv.inverse());
  Ball b{Vec::Zero(2), 1.0};

  StarCertificate ok = verify_star_condition(a, b, 3.0, 101, 50'000);
  CHECK(ok.violations == 0);
  CHECK(ok.worst_ratio <= 3.0 * (1.0 + 1e-9));
  CHECK(ok.samples_checked == 50'000);

  // k below the row-sum constant must be caught at the box corners
  StarCertificate bad = verify_star_condition(a, b, 2.9, 101, 50'000);
  CHECK(bad.violations >= 1);
  CHECK(bad.worst_ratio > 2.9);
}

TEST_CASE("star condition for every representative") {
  for (const AutomorphismSpec& a : representatives()) {
    CAPTURE(family_name(a.group.family));
    double r = a.group.family == Family::Torus ? 0.2 : 1.0;
    Ball b{identity(a.group), r};
    StarCertificate c = verify_star_condition(a, b, k_constant(a), 31, 20'000);
    CHECK(c.violations == 0);
  }
}

TEST_CASE("modulus monte carlo estimates") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  AutomorphismSpec dbl = euclidean_automorphism(r1, 2.0 * Eigen::MatrixXd::Identity(1, 1));
  ModulusEstimate est = estimate_modulus(dbl, 7, 100'000);
  CHECK(est.std_error > 0.0);
  CHECK(std::abs(est.estimate - 2.0) <= 3.0 * est.std_error);

  AutomorphismSpec d = dilation_automorphism(GroupSpec::heisenberg(1), 1.3);
  ModulusEstimate eh = estimate_modulus(d, 7, 100'000);
  CHECK(std::abs(eh.estimate - std::pow(1.3, 4.0)) <= 3.0 * eh.std_error);

  CHECK_THROWS_AS(estimate_modulus(dbl, 7, 100), std::invalid_argument);
}

TEST_CASE("lipschitz estimates") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  AutomorphismSpec dbl = euclidean_automorphism(r1, 2.0 * Eigen::MatrixXd::Identity(1, 1));
  LipschitzEstimate est = estimate_lipschitz(dbl, 3, 10'000);
  CHECK(est.max_ratio == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(est.min_ratio == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(est.pairs > 9'000);
  // lipschitz constant of A^-1 never exceeds the star constant k
  for (const AutomorphismSpec& a : representatives()) {
    CAPTURE(family_name(a.group.family));
    LipschitzEstimate li = estimate_lipschitz(inverse(a), 5, 10'000);
    CHECK(li.max_ratio <= k_constant(a) * (1.0 + 1e-6));
  }
}

TEST_CASE("empirical k certification") {
  AutomorphismSpec conj = su2_inner_automorphism(vec({1, 0.3, -0.2, 0.5}));
  double k = certify_k_empirical(conj, 17, 20'000);
  CHECK(k == doctest::Approx(1.05).epsilon(1e-3));  // isometry: worst ratio 1
}

TEST_CASE("struble scaling of torus automorphisms") {
  GroupSpec t1 = GroupSpec::torus(1);
  StrubleFamily fam{t1, 16};
  AutomorphismSpec ident = torus_automorphism(t1, Eigen::MatrixXi::Identity(1, 1));
  ScalingInterval iv = struble_scaling_ratio(ident, fam, 19, 2'000);
  CHECK(iv.min_ratio == doctest::Approx(1.0));
  CHECK(iv.max_ratio == doctest::Approx(1.0));
  AutomorphismSpec refl = torus_automorphism(t1, -Eigen::MatrixXi::Identity(1, 1));
  ScalingInterval ir = struble_scaling_ratio(refl, fam, 19, 2'000);
  CHECK(std::abs(ir.min_ratio - 1.0) <= 1e-9);
  CHECK(std::abs(ir.max_ratio - 1.0) <= 1e-9);
}
