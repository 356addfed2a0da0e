#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "hausd/atom.hpp"
#include "hausd/rng.hpp"

using namespace hausd;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<long>(v.size()));
  long i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// +2 on (0, 1/4), -2 on (-1/4, 0): saturates the sup bound with exact cancellation
Atom square_wave_atom(int res = 32) {
  GroupSpec t1 = GroupSpec::torus(1);
  Ball b{Vec::Zero(1), 0.25};
  auto grid = std::make_shared<GroupGrid>(make_ball_grid(t1, b, res));
  Vec v(static_cast<long>(grid->size()));
  for (long i = 0; i < v.size(); ++i) {
    double x = grid->nodes[static_cast<std::size_t>(i)][0];
    v[i] = (x > 0.0 && x < 0.5) ? 2.0 : -2.0;  // canonical coords: (0,1/4) vs (3/4,1)
  }
  Atom a;
  a.spec = t1;
  a.support = b;
  a.sup_bound = 2.0;
  a.nodes = grid->nodes;
  a.weights = grid->weights;
  a.values = v;
  a.eval = [grid, v](const Vec& x) {
    int i = grid->locate(x);
    return i < 0 ? 0.0 : v[i];
  };
  return a;
}

std::vector<GroupSpec> all_groups() {
  return {GroupSpec::euclidean(1), GroupSpec::torus(1), GroupSpec::su2(),
          GroupSpec::heisenberg(1), GroupSpec::upper_triangular(3)};
}

AutomorphismSpec representative(const GroupSpec& spec, double u) {
  switch (spec.family) {
    case Family::Euclidean:
      return euclidean_automorphism(spec, Eigen::MatrixXd::Identity(spec.n, spec.n) / u);
    case Family::Torus: return torus_automorphism(spec, -Eigen::MatrixXi::Identity(spec.n, spec.n));
    case Family::SU2: return su2_inner_automorphism(vec({1.0, u, 0.3, -0.2}));
    default: return dilation_automorphism(spec, u);
  }
}

}  // namespace

TEST_CASE("renormalization constants") {
  RenormConstants c = RenormConstants::for_group(GroupSpec::heisenberg(1));
  CHECK(c.c_mu == doctest::Approx(16.0));
  CHECK(c.s == doctest::Approx(4.0));
  CHECK(c.a == 1.0);
  CHECK(c.b == 1.0);
  CHECK(RenormConstants::for_group(GroupSpec::su2()).s == doctest::Approx(3.0));
}

TEST_CASE("square wave atom saturates the conditions") {
  Atom a = square_wave_atom();
  AtomReport rep = validate_atom(a, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.support_residual <= 1e-12);
  CHECK(rep.sup_residual <= 1e-12);  // ||a||_inf * mu(B) = 2 * 1/2 = 1 exactly
  CHECK(rep.cancel_residual <= 1e-12);
  CHECK(a.integral() == doctest::Approx(0.0));

  // scaling by 1.1 breaks the sup bound: excess 0.2 in sup-norm units
  Atom big = a;
  big.values *= 1.1;
  auto base = a.eval;
  big.eval = [base](const Vec& x) { return 1.1 * base(x); };
  AtomReport bad = validate_atom(big, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK(bad.sup_residual == doctest::Approx(0.1).epsilon(1e-9));
  double mu = ball_measure(big.spec, big.support);
  CHECK(bad.sup_residual / mu == doctest::Approx(0.2).epsilon(1e-9));  // 2.2 vs bound 2
}

TEST_CASE("zero atom passes") {
  Atom a = square_wave_atom();
  a.values.setZero();
  a.eval = [](const Vec&) { return 0.0; };
  CHECK(validate_atom(a, 1e-12).pass);
}

TEST_CASE("random atoms validate on every group") {
  for (const GroupSpec& spec : all_groups()) {
    CAPTURE(family_name(spec.family));
    Ball b{identity(spec), spec.family == Family::Torus ? 0.25 : 1.0};
    Atom a = make_random_atom(spec, b, 4242, spec.coord_dim() <= 2 ? 24 : 6);
    AtomReport rep = validate_atom(a, 1e-8);
    CHECK(rep.pass);
    CHECK(std::abs(a.integral()) <= 1e-10);
    CHECK(a.values.cwiseAbs().maxCoeff() ==
          doctest::Approx(1.0 / ball_measure(spec, b)).epsilon(1e-12));
    // determinism
    Atom a2 = make_random_atom(spec, b, 4242, spec.coord_dim() <= 2 ? 24 : 6);
    CHECK((a.values - a2.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pushforward scale factors") {
  GroupSpec t1 = GroupSpec::torus(1);
  RenormConstants tc = RenormConstants::for_group(t1);
  Atom a = square_wave_atom();

  // identity: lambda_scale = C_mu, a' = a / C_mu
  Pushforward pid = pushforward_atom(a, identity_automorphism(t1), tc);
  CHECK(pid.lambda_scale == doctest::Approx(tc.c_mu));
  CHECK(pid.atom.values[0] == doctest::Approx(a.values[0] / tc.c_mu));
  CHECK(validate_atom(pid.atom, 1e-6).pass);

  // reflection on T^1: C_mu = 2, k = 1, s = 1 -> scale 2
  Pushforward prefl =
      pushforward_atom(a, torus_automorphism(t1, -Eigen::MatrixXi::Identity(1, 1)), tc);
  CHECK(prefl.lambda_scale == doctest::Approx(2.0));
  CHECK(validate_atom(prefl.atom, 1e-6).pass);

  // H1 dilation by 2: k = 1/2, s = 4, C_mu = 16 -> scale 1
  GroupSpec h1 = GroupSpec::heisenberg(1);
  Atom ah = make_random_atom(h1, {identity(h1), 1.0}, 7, 6);
  Pushforward pd = pushforward_atom(ah, dilation_automorphism(h1, 2.0),
                                    RenormConstants::for_group(h1));
  CHECK(pd.lambda_scale == doctest::Approx(1.0));
  CHECK(pd.atom.support.radius == doctest::Approx(0.5));
  CHECK(validate_atom(pd.atom, 1e-6).pass);
}

TEST_CASE("pushforward reconstruction and cancellation") {
  for (const GroupSpec& spec : all_groups()) {
    CAPTURE(family_name(spec.family));
    RenormConstants c = RenormConstants::for_group(spec);
    Ball b{identity(spec), spec.family == Family::Torus ? 0.2 : 1.0};
    for (int trial = 0; trial < 100; ++trial) {
      Atom a = make_random_atom(spec, b, 1000 + static_cast<std::uint64_t>(trial),
                                spec.coord_dim() <= 2 ? 12 : 4);
      AutomorphismSpec A = representative(spec, 1.0 + 0.01 * trial);
      Pushforward pf = pushforward_atom(a, A, c);
      // lambda_scale * a'(x) = a(A x) on the original nodes
      for (std::size_t i = 0; i < a.nodes.size(); i += 7) {
        const Vec& y = pf.atom.nodes[i];  // = A^-1(node_i)
        REQUIRE(pf.lambda_scale * pf.atom.eval(y) ==
                doctest::Approx(a.values[static_cast<long>(i)]).epsilon(1e-10));
      }
      // cancellation survives the change of variables exactly
      double sup = std::max(pf.atom.values.cwiseAbs().maxCoeff(), pf.atom.sup_bound);
      double mu = ball_measure(spec, pf.atom.support);
      REQUIRE(std::abs(pf.atom.integral()) <= 1e-6 * sup * mu);
      REQUIRE(validate_atom(pf.atom, 1e-6).pass);
    }
  }
}

TEST_CASE("h1 upper bound arithmetic") {
  AtomicRepresentation rep;
  rep.lambdas = {3.0, -4.0};
  CHECK(h1_upper_bound(rep) == doctest::Approx(7.0));
  CHECK(h1_upper_bound(AtomicRepresentation{}) == 0.0);
}

TEST_CASE("represent splits constructed functions into atoms") {
  GroupSpec r1 = GroupSpec::euclidean(1);
  auto grid = std::make_shared<GroupGrid>(make_box_grid(r1, 4.0, 512));
  Ball b1{vec({-2.0}), 0.5}, b2{vec({2.0}), 0.5};
  Atom a1 = make_random_atom(r1, b1, 1, 16);
  Atom a2 = make_random_atom(r1, b2, 2, 16);

  GridFunction f{grid, Vec::Zero(static_cast<long>(grid->size()))};
  for (std::size_t i = 0; i < grid->size(); ++i)
    f.values[static_cast<long>(i)] = a1(grid->nodes[i]) - 2.0 * a2(grid->nodes[i]);

  RepresentResult rr = represent(f, {b1, b2}, r1);
  REQUIRE(rr.rep.lambdas.size() == 2);
  CHECK(h1_upper_bound(rr.rep) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rr.residual_l1 <= 1e-12);
  // reconstruction on the grid
  for (std::size_t i = 0; i < grid->size(); i += 13) {
    double rec = 0.0;
    for (std::size_t j = 0; j < rr.rep.atoms.size(); ++j)
      rec += rr.rep.lambdas[j] * rr.rep.atoms[j](grid->nodes[i]);
    REQUIRE(rec == doctest::Approx(f.values[static_cast<long>(i)]).epsilon(1e-8));
  }
  // L1 norm never exceeds the atomic bound
  double l1 = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i)
    l1 += std::abs(f.values[static_cast<long>(i)]) * grid->weights[static_cast<long>(i)];
  CHECK(l1 <= h1_upper_bound(rr.rep) * (1.0 + 1e-6));

  // single scaled atom and the zero function
  GridFunction g{grid, Vec::Zero(static_cast<long>(grid->size()))};
  for (std::size_t i = 0; i < grid->size(); ++i)
    g.values[static_cast<long>(i)] = 3.0 * a1(grid->nodes[i]);
  RepresentResult rs = represent(g, {b1}, r1);
  REQUIRE(rs.rep.lambdas.size() == 1);
  CHECK(rs.rep.lambdas[0] == doctest::Approx(3.0).epsilon(1e-9));
  GridFunction z{grid, Vec::Zero(static_cast<long>(grid->size()))};
  RepresentResult rz = represent(z, {b1, b2}, r1);
  CHECK(rz.rep.lambdas.empty());
  CHECK(rz.residual_l1 == 0.0);
}

TEST_CASE("sabotaged doubling constant is caught") {
  // halving C_mu (and its exponent s = log2 C_mu) under-renormalizes the
  // pushforward: the image atom then violates the sup bound
  GroupSpec r1 = GroupSpec::euclidean(1);
  RenormConstants broken = RenormConstants::for_group(r1);
  broken.c_mu /= 2.0;  // = 1
  broken.s = std::log2(broken.c_mu);  // = 0
  Atom a = make_random_atom(r1, {Vec::Zero(1), 1.0}, 5, 16);
  AutomorphismSpec half = euclidean_automorphism(r1, 0.5 * Eigen::MatrixXd::Identity(1, 1));
  Pushforward pf = pushforward_atom(a, half, broken);  // k = 2, support doubles
  CHECK_FALSE(validate_atom(pf.atom, 1e-6).pass);
  CHECK(pushforward_atom(a, half, RenormConstants::for_group(r1)).lambda_scale ==
        doctest::Approx(4.0));  // honest constants keep it valid
  CHECK(validate_atom(pushforward_atom(a, half, RenormConstants::for_group(r1)).atom, 1e-6).pass);
}
