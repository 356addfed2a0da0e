#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hausd/hausdorff.hpp"
#include "hausd/rng.hpp"

using namespace hausd;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<long>(v.size()));
  long i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

Kernel kernel_fn(ParamFn phi, double lo, double hi, int res) {
  Kernel k;
  k.phi = std::move(phi);
  k.phi_text = "test";
  k.lo = Vec::Constant(1, lo);
  k.hi = Vec::Constant(1, hi);
  k.resolution = res;
  return k;
}

Kernel unit_kernel(int res = 256) {
  return kernel_fn([](const Vec&) { return 1.0; }, 1.0, 2.0, res);
}

// A(u) x = x / u on R^1
AutomorphismFamily scaling_family() {
  AutomorphismFamily fam;
  fam.group = GroupSpec::euclidean(1);
  fam.at = [](const Vec& u) {
    return euclidean_automorphism(GroupSpec::euclidean(1),
                                  Eigen::MatrixXd::Identity(1, 1) / u[0]);
  };
  return fam;
}

AutomorphismFamily identity_family(const GroupSpec& spec) {
  AutomorphismFamily fam;
  fam.group = spec;
  AutomorphismSpec id = identity_automorphism(spec);
  fam.at = [id](const Vec&) { return id; };
  return fam;
}

AutomorphismFamily heisenberg_dilation_family() {
  AutomorphismFamily fam;
  fam.group = GroupSpec::heisenberg(1);
  fam.at = [](const Vec& u) { return dilation_automorphism(GroupSpec::heisenberg(1), u[0]); };
  return fam;
}

}  // namespace

TEST_CASE("kernel integrability refinement test") {
  IntegrabilityReport ok = check_integrable(unit_kernel());
  CHECK(ok.pass);
  CHECK(ok.coarse == doctest::Approx(1.0));
  // midpoint rule on a rough kernel at tiny resolution does not converge at 1%
  Kernel rough = kernel_fn([](const Vec& u) { return u[0] < 1.1 ? 100.0 : 0.1; }, 1.0, 2.0, 4);
  IntegrabilityReport bad = check_integrable(rough, 1e-2);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("operator evaluation: identity family collapses to mass times f") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  ScalarFn f = [](const Vec& x) { return std::exp(-x[0] * x[0]); };
  double v = evaluate_operator(unit_kernel(), identity_family(r1), f, vec({0.3}));
  CHECK(v == doctest::Approx(f(vec({0.3}))).epsilon(1e-12));
}

TEST_CASE("operator evaluation against 1-D brute oracle") {
  // H f(x) = measure of {u in [1,2] : x/u in [0,1]}
  ScalarFn f = [](const Vec& x) { return x[0] >= 0.0 && x[0] <= 1.0 ? 1.0 : 0.0; };
  AutomorphismFamily fam = scaling_family();
  Kernel k = unit_kernel(4096);
  for (double x : {0.5, 1.2, 1.7, 2.5}) {
    double expect = x <= 1.0 ? 1.0 : std::max(0.0, 2.0 - x);
    CHECK(evaluate_operator(k, fam, f, vec({x})) == doctest::Approx(expect).epsilon(2e-3));
  }
  RefinedValue rv = evaluate_operator_refined(k, fam, f, vec({0.5}));
  CHECK(rv.rel_change <= 1e-3);
}

TEST_CASE("linearity") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  AutomorphismFamily fam = scaling_family();
  Kernel k = unit_kernel(64);
  ScalarFn f = [](const Vec& x) { return std::sin(x[0]); };
  ScalarFn g = [](const Vec& x) { return x[0] * x[0]; };
  ScalarFn combo = [&](const Vec& x) { return 2.0 * f(x) - 3.0 * g(x); };
  for (double x : {-1.0, 0.2, 2.0}) {
    double lhs = evaluate_operator(k, fam, combo, vec({x}));
    double rhs = 2.0 * evaluate_operator(k, fam, f, vec({x})) -
                 3.0 * evaluate_operator(k, fam, g, vec({x}));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("kernel norms: closed forms") {
  AutomorphismFamily fam = scaling_family();
  Kernel k = unit_kernel(512);
  // mod(A(u)^-1) = u and k(u) = u: both integrals are int_1^2 u du = 3/2
  CHECK(norm_L_A(k, fam) == doctest::Approx(1.5).epsilon(1e-12));  // midpoint exact on linear
  CHECK(norm_L1_ks(k, fam, 1.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(norm_L_A(kernel_fn([](const Vec&) { return 0.0; }, 1.0, 2.0, 32), fam) == 0.0);
  // identity family: norm_L_A is the plain L1 norm
  CHECK(norm_L_A(k, identity_family(GroupSpec::euclidean(1))) == doctest::Approx(1.0));

  // Heisenberg dilations: int_1^2 lambda^-4 dlambda = 7/24
  AutomorphismFamily hd = heisenberg_dilation_family();
  CHECK(norm_L1_ks(unit_kernel(2048), hd, 4.0) == doctest::Approx(7.0 / 24.0).epsilon(1e-6));
}

TEST_CASE("theorem bound reports") {
  AutomorphismFamily fam = scaling_family();
  RenormConstants consts = RenormConstants::for_group(GroupSpec::euclidean(1));
  BoundReport br = theorem1_bound(unit_kernel(512), fam, consts);
  CHECK(br.theorem1_bound == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(br.theorem1_bound ==
        doctest::Approx(consts.c_mu * std::pow(consts.b / consts.a, consts.s) * br.norm_L1_ks));

  AutomorphismFamily hd = heisenberg_dilation_family();
  RenormConstants hc = RenormConstants::for_group(GroupSpec::heisenberg(1));
  BoundReport hb = theorem1_bound(unit_kernel(2048), hd, hc);
  CHECK(hb.theorem1_bound == doctest::Approx(14.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("addendum bound") {
  AutomorphismFamily fam = scaling_family();
  RenormConstants consts = RenormConstants::for_group(GroupSpec::euclidean(1));
  // kappa=1: k(u) = kappa/mod(A(u)) = u, same integral as the theorem bound
  CHECK(addendum_bound(unit_kernel(512), fam, 1.0, consts) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(addendum_bound(unit_kernel(32), fam, 0.0, consts), std::invalid_argument);
  AutomorphismFamily id = identity_family(GroupSpec::torus(1));
  RenormConstants tc = RenormConstants::for_group(GroupSpec::torus(1));
  CHECK(addendum_bound(unit_kernel(128), id, 1.0, tc) ==
        doctest::Approx(tc.c_mu * norm_L_A(unit_kernel(128), id)));
}

TEST_CASE("lemma 1 report") {
  AutomorphismFamily fam = scaling_family();
  ScalarFn f = [](const Vec& x) { return x[0] >= 0.0 && x[0] <= 1.0 ? 1.0 : 0.0; };
  GroupGrid domain = make_box_grid(GroupSpec::euclidean(1), 4.0, 4096);
  Lemma1Report rep = check_lemma1(unit_kernel(512), fam, f, domain, 1e-2);
  CHECK(rep.pass);
  CHECK(rep.lhs == doctest::Approx(1.5).epsilon(1e-2));
  CHECK(rep.rhs == doctest::Approx(1.5).epsilon(1e-2));

  // signed f loses mass in the inner integral: strict inequality
  ScalarFn fs = [](const Vec& x) {
    if (x[0] >= 0.0 && x[0] <= 1.0) return 1.0;
    if (x[0] > 1.0 && x[0] <= 2.0) return -1.0;
    return 0.0;
  };
  Lemma1Report rs = check_lemma1(unit_kernel(512), fam, fs, domain, 1e-2);
  CHECK(rs.pass);
  CHECK(rs.lhs < rs.rhs * 0.95);

  ScalarFn zero = [](const Vec&) { return 0.0; };
  Lemma1Report rz = check_lemma1(unit_kernel(64), fam, zero, domain, 1e-2);
  CHECK(rz.lhs == 0.0);
  CHECK(rz.pass);
}

TEST_CASE("atomic image decomposition on R") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  RenormConstants consts = RenormConstants::for_group(r1);
  Atom a0 = make_random_atom(r1, {Vec::Zero(1), 1.0}, 99, 32);
  AtomicImage img = atomic_image_decomposition(unit_kernel(64), scaling_family(), a0, consts);
  CHECK(img.invalid_atoms == 0);
  CHECK(img.pass);
  CHECK(img.bound == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(img.sum_abs_lambda <= img.bound * (1.0 + 1e-2));
  CHECK(img.rep.lambdas.size() == 64);
  // identity family: sum|lambda| is exactly C_mu * ||Phi||_1
  AtomicImage idimg =
      atomic_image_decomposition(unit_kernel(64), identity_family(r1), a0, consts);
  CHECK(idimg.sum_abs_lambda == doctest::Approx(consts.c_mu).epsilon(1e-12));
}

TEST_CASE("torus special form") {
  GroupSpec t1 = GroupSpec::torus(1);
  Kernel k = kernel_fn([](const Vec&) { return 1.0; }, 0.0, 1.0, 128);
  ScalarFn f = [](const Vec& x) { return std::sin(2.0 * kPi * x[0]); };

  AutomorphismFamily id = identity_family(t1);
  TorusForm fi = special_form_torus(k, id, f, vec({0.2}));
  CHECK(fi.a == doctest::Approx(1.0));
  CHECK(fi.b == doctest::Approx(0.0));
  CHECK(fi.value == doctest::Approx(f(vec({0.2}))).epsilon(1e-12));

  AutomorphismFamily two;
  two.group = t1;
  AutomorphismSpec ident = identity_automorphism(t1);
  AutomorphismSpec refl = torus_automorphism(t1, -Eigen::MatrixXi::Identity(1, 1));
  two.at = [ident, refl](const Vec& u) { return u[0] < 0.5 ? refl : ident; };
  TorusForm ft = special_form_torus(k, two, f, vec({0.2}));
  CHECK(ft.a == doctest::Approx(0.5));
  CHECK(ft.b == doctest::Approx(0.5));
  CHECK(std::abs(ft.value) <= 1e-8);  // (f + f(-.))/2 = 0 for sin
  // quadrature vs a f(x) + b f(-x) closed form
  double closed = ft.a * f(vec({0.2})) + ft.b * f(vec({0.8}));
  CHECK(ft.value == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("su2 special form and class functions") {
  GroupSpec su2 = GroupSpec::su2();
  AutomorphismFamily conj;
  conj.group = su2;
  conj.at = [](const Vec& u) { return su2_inner_automorphism(vec({1.0, u[0], -0.4, 0.2})); };
  // class function: depends only on the real part (trace)
  ScalarFn cls = [](const Vec& q) { return q[0] * q[0]; };
  Vec x = canonical(su2, vec({0.5, 0.5, 0.5, 0.5}));
  double v = special_form_su2(unit_kernel(64), conj, cls, x);
  CHECK(v == doctest::Approx(cls(x)).epsilon(1e-12));
  CHECK_THROWS_AS(special_form_su2(unit_kernel(8), identity_family(GroupSpec::torus(1)), cls, x),
                  std::invalid_argument);
}

TEST_CASE("heisenberg symplectic special form") {
  GroupSpec h1 = GroupSpec::heisenberg(1);
  AutomorphismFamily rots;
  rots.group = h1;
  rots.at = [](const Vec& u) {
    Eigen::MatrixXd s(2, 2);
    s << std::cos(u[0]), -std::sin(u[0]), std::sin(u[0]), std::cos(u[0]);
    return symplectic_automorphism(GroupSpec::heisenberg(1), s);
  };
  // radial in (v,w): invariant under every rotation
  ScalarFn radial = [](const Vec& p) { return p.head(2).squaredNorm() + p[2]; };
  Vec x = vec({0.3, -0.4, 0.2});
  double v = special_form_heisenberg_symplectic(unit_kernel(64), rots, radial, x);
  CHECK(v == doctest::Approx(radial(x)).epsilon(1e-12));
}

TEST_CASE("grid refinement convergence on smooth data") {
  AutomorphismFamily fam = scaling_family();
  Kernel k = kernel_fn([](const Vec& u) { return 1.0 + u[0] * u[0]; }, 1.0, 2.0, 256);
  double n1 = norm_L_A(k, fam);
  Kernel k2 = k;
  k2.resolution = 512;
  CHECK(std::abs(norm_L_A(k2, fam) - n1) / n1 <= 1e-3);
  ScalarFn f = [](const Vec& x) { return std::exp(-x[0] * x[0]); };
  RefinedValue rv = evaluate_operator_refined(k, fam, f, vec({0.7}));
  CHECK(rv.rel_change <= 1e-3);
}
