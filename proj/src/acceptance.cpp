#include <chrono>
#include <cmath>
#include <sstream>

#include "hausd/harness.hpp"
#include "hausd/rng.hpp"
#include "suite_util.hpp"

namespace hausd::harness {

namespace {

using Clock = std::chrono::steady_clock;
using detail::default_family;
using detail::function_kernel;
using detail::random_triple;
using detail::smooth_bump;
using detail::triple_domain;
using detail::unit_kernel;
using detail::unit_test_ball;

struct Criterion {
  CriterionResult result;
  Clock::time_point t0 = Clock::now();

  Criterion(int index, std::string name) {
    result.index = index;
    result.name = std::move(name);
    result.pass = true;
  }

  void check(bool ok, const std::string& what) {
    result.pass = result.pass && ok;
    result.details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }

  void check_close(double lhs, double rhs, double rel_tol, const std::string& what) {
    bool ok = std::abs(lhs - rhs) <= rel_tol * std::max(1.0, std::abs(rhs));
    std::ostringstream os;
    os << what << " (got " << format_sci(lhs) << ", want " << format_sci(rhs) << ", tol "
       << format_sci(rel_tol) << ")";
    check(ok, os.str());
  }

  void check_leq(double lhs, double rhs, double rel_tol, const std::string& what) {
    bool ok = lhs <= rhs + rel_tol * std::max(1.0, std::abs(rhs));
    std::ostringstream os;
    os << what << " (" << format_sci(lhs) << " <= " << format_sci(rhs) << " +tol "
       << format_sci(rel_tol) << ")";
    check(ok, os.str());
  }

  CriterionResult done() {
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return result;
  }
};

std::vector<GroupSpec> five_groups() {
  return {GroupSpec::euclidean(1), GroupSpec::torus(1), GroupSpec::su2(),
          GroupSpec::heisenberg(1), GroupSpec::upper_triangular(3)};
}

// Independent check of the Heisenberg(1) gauge-ball volume: 2-D quadrature
// over (v,w) with the t-extent in closed form.
double h1_gauge_ball_volume(double raw_radius, int res) {
  double r4 = std::pow(raw_radius, 4.0);
  double h = 2.0 * raw_radius / res;
  double vol = 0.0;
  for (int i = 0; i < res; ++i) {
    double v = -raw_radius + (i + 0.5) * h;
    for (int j = 0; j < res; ++j) {
      double w = -raw_radius + (j + 0.5) * h;
      double z4 = (v * v + w * w) * (v * v + w * w);
      if (z4 < r4) vol += 2.0 * std::sqrt(r4 - z4) * h * h;
    }
  }
  return vol;
}

CriterionResult criterion1(std::uint64_t seed) {
  Criterion c(1, "closed-form constants (doubling, Heisenberg gauge, T1(3,R) modulus)");
  for (int n = 1; n <= 3; ++n) {
    for (GroupSpec spec : {GroupSpec::euclidean(n), GroupSpec::torus(n)}) {
      auto gen = rng::substream(seed, "c1-centers", static_cast<std::uint64_t>(n));
      std::vector<Vec> centers;
      for (int i = 0; i < 3; ++i) centers.push_back(canonical(spec, random_point(spec, gen)));
      std::vector<double> radii = spec.family == Family::Torus
                                      ? std::vector<double>{0.05, 0.1, 0.2}
                                      : std::vector<double>{0.25, 0.5, 1.0, 2.0};
      DoublingProfile p = doubling_profile(spec, centers, radii);
      c.check_close(p.max_ratio, std::pow(2.0, n), 1e-12,
                    family_name(spec.family) + "(" + std::to_string(n) + ") doubling ratio = 2^n");
    }
  }
  GroupSpec h1 = GroupSpec::heisenberg(1);
  double cg = calibrate_gauge(h1);
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double vol = h1_gauge_ball_volume(r / cg, 2000);
    c.check(std::abs(vol / std::pow(r, 4.0) - 1.0) <= 1e-3,
            "H1 quadrature ball volume = r^4 at r=" + format_sci(r) + " (got " + format_sci(vol) +
                ")");
    c.check_close(ball_measure(h1, r), std::pow(r, 4.0), 1e-12,
                  "H1 ball_measure formula at r=" + format_sci(r));
  }
  GroupSpec t13 = GroupSpec::upper_triangular(3);
  AutomorphismSpec dil = dilation_automorphism(t13, 1.7);
  ModulusEstimate est = estimate_modulus(dil, seed ^ 0xc1, 200'000);
  double expected = std::pow(1.7, 4.0);  // Q = 3(9-1)/6 = 4
  c.check(std::abs(est.estimate - expected) <= 3.0 * est.std_error,
          "T1(3,R) mod(D_1.7) = 1.7^4 within 3 MC standard errors (est " +
              format_sci(est.estimate) + ", se " + format_sci(est.std_error) + ")");
  return c.done();
}

CriterionResult criterion2(std::uint64_t seed) {
  Criterion c(2, "condition (*) with k = k_constant; sharpness of the row-sum constant");
  long n_samples = 100'000;
  auto run_star = [&](const AutomorphismSpec& a, const Ball& b, double k, const char* what,
                      bool expect_violation) {
    StarCertificate cert = verify_star_condition(a, b, k, seed ^ rng::hash_name(what), n_samples);
    if (expect_violation)
      c.check(cert.violations >= 1, std::string(what) + " produced >= 1 violation (" +
                                         std::to_string(cert.violations) + ")");
    else
      c.check(cert.violations == 0, std::string(what) + " has 0 violations over 1e5 samples (k=" +
                                         format_sci(k) + ")");
  };

  {
    GroupSpec spec = GroupSpec::euclidean(2);
    Eigen::MatrixXd minv(2, 2);
    minv << 1, 2, 0, 1;
    AutomorphismSpec a = euclidean_automorphism(spec, minv.inverse());
    Ball b{Vec::Zero(2), 1.0};
    run_star(a, b, k_constant(a), "euclidean shear, k=3", false);
    run_star(a, b, 2.9, "euclidean shear, k=2.9", true);
  }
  {
    GroupSpec spec = GroupSpec::torus(2);
    Eigen::MatrixXi m(2, 2);
    m << 1, 1, 0, 1;
    AutomorphismSpec a = torus_automorphism(spec, m);
    run_star(a, unit_test_ball(spec), k_constant(a), "torus shear", false);
  }
  {
    auto gen = rng::substream(seed, "c2-su2");
    AutomorphismSpec a = su2_inner_automorphism(random_point(GroupSpec::su2(), gen));
    run_star(a, unit_test_ball(GroupSpec::su2()), k_constant(a), "su2 inner", false);
  }
  {
    GroupSpec spec = GroupSpec::heisenberg(1);
    AutomorphismSpec a = dilation_automorphism(spec, 2.0);
    run_star(a, unit_test_ball(spec), k_constant(a), "heisenberg dilation", false);
    Eigen::MatrixXd s(2, 2);
    double th = 0.7;
    s << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    AutomorphismSpec sym = symplectic_automorphism(spec, s);
    run_star(sym, unit_test_ball(spec), k_constant(sym), "heisenberg symplectic rotation", false);
  }
  {
    GroupSpec spec = GroupSpec::upper_triangular(3);
    AutomorphismSpec a = dilation_automorphism(spec, 0.5);
    run_star(a, unit_test_ball(spec), k_constant(a), "upper-triangular dilation", false);
  }
  return c.done();
}

CriterionResult criterion3(std::uint64_t seed) {
  Criterion c(3, "Lemma 1: ||Hf||_1 <= ||Phi||_{L_A} ||f||_1 over seeded triples");
  for (const GroupSpec& spec : five_groups()) {
    auto gen = rng::substream(seed, "c3", rng::hash_name(family_name(spec.family)));
    GroupGrid domain = triple_domain(spec, detail::default_domain_res(spec));
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      detail::Triple t = random_triple(spec, gen, 32);
      Lemma1Report lr = check_lemma1(t.kernel, t.family, t.f, domain, 1e-2);
      worst = std::max(worst, lr.rhs > 0 ? lr.lhs / lr.rhs : 0.0);
      if (!lr.pass) ++failures;
    }
    c.check(failures == 0, family_name(spec.family) + ": 50 triples pass (worst lhs/rhs = " +
                               format_sci(worst) + ")");
  }
  // running example on R: Phi = 1_{[1,2]}, A(u)x = x/u, f = 1_{[0,1]}
  GroupSpec r1 = GroupSpec::euclidean(1);
  Kernel kern = unit_kernel(1.0, 2.0, 512);
  AutomorphismFamily fam = default_family(r1);
  ScalarFn f = [](const Vec& x) { return x[0] >= 0.0 && x[0] <= 1.0 ? 1.0 : 0.0; };
  GroupGrid domain = make_box_grid(r1, 4.0, 8192);
  Lemma1Report lr = check_lemma1(kern, fam, f, domain, 1e-2);
  c.check_close(lr.lhs, 1.5, 1e-2, "running example lhs = 1.5");
  c.check_close(lr.rhs, 1.5, 1e-2, "running example rhs = 1.5 (Fubini equality)");
  return c.done();
}

CriterionResult criterion4(std::uint64_t seed) {
  (void)seed;
  Criterion c(4, "Lemma 4: norm_L_A <= C_mu norm_L1_ks; modulus(A^-1) <= C_mu k^s");
  for (const GroupSpec& spec : five_groups()) {
    RenormConstants consts = RenormConstants::for_group(spec);
    AutomorphismFamily fam = default_family(spec);
    for (int kres : {64, 128}) {
      Kernel kern = function_kernel(
          [](const Vec& u) { return 1.0 + 0.5 * (u[0] - 1.5) * (u[0] - 1.5); }, "1+0.5(u-1.5)^2",
          Vec::Constant(1, 1.0), Vec::Constant(1, 2.0), kres);
      double na = norm_L_A(kern, fam);
      double nk = norm_L1_ks(kern, fam, consts.s);
      c.check_leq(na, consts.c_mu * nk, 1e-12,
                  family_name(spec.family) + " norm inclusion (res " + std::to_string(kres) + ")");
    }
    for (double u0 : {1.1, 1.5, 1.9}) {
      AutomorphismSpec a = fam.at(Vec::Constant(1, u0));
      c.check_leq(modulus(inverse(a)), consts.c_mu * std::pow(k_constant(a), consts.s), 1e-12,
                  family_name(spec.family) + " modulus bound at u=" + format_sci(u0));
    }
  }
  return c.done();
}

CriterionResult criterion5(std::uint64_t seed) {
  Criterion c(5, "Theorem 1 mechanism: atomic image decompositions");
  for (const GroupSpec& spec : five_groups()) {
    RenormConstants consts = RenormConstants::for_group(spec);
    Kernel kern = unit_kernel(1.0, 2.0, 48);
    AutomorphismFamily fam = default_family(spec);
    Ball ball = unit_test_ball(spec);
    long bad_atoms = 0;
    int bound_failures = 0;
    for (int i = 0; i < 20; ++i) {
      Atom a0 = make_random_atom(spec, ball, seed + static_cast<std::uint64_t>(i) * 977,
                                 spec.coord_dim() <= 2 ? 16 : 6);
      AtomicImage img = atomic_image_decomposition(kern, fam, a0, consts, 1e-6, 1e-2);
      bad_atoms += img.invalid_atoms;
      if (img.sum_abs_lambda > img.bound * (1.0 + 1e-2)) ++bound_failures;
    }
    c.check(bad_atoms == 0,
            family_name(spec.family) + ": all pushforward atoms valid at tol 1e-6");
    c.check(bound_failures == 0,
            family_name(spec.family) + ": sum|lambda| <= theorem1 bound for all 20 atoms");
  }
  // closed-form bounds of the running examples
  {
    GroupSpec r1 = GroupSpec::euclidean(1);
    BoundReport br =
        theorem1_bound(unit_kernel(1.0, 2.0, 256), default_family(r1), RenormConstants::for_group(r1));
    c.check_close(br.theorem1_bound, 3.0, 1e-3, "R^1 example bound = 2 * 1.5 = 3");
  }
  {
    GroupSpec h1 = GroupSpec::heisenberg(1);
    BoundReport br =
        theorem1_bound(unit_kernel(1.0, 2.0, 256), default_family(h1), RenormConstants::for_group(h1));
    c.check_close(br.theorem1_bound, 14.0 / 3.0, 1e-3, "H1 dilation bound = 16 * 7/24 = 14/3");
  }
  return c.done();
}

CriterionResult criterion6(std::uint64_t seed) {
  Criterion c(6, "Example 1 structure on T^1: H = aI + bJ");
  GroupSpec t1 = GroupSpec::torus(1);
  Kernel kern = function_kernel([](const Vec&) { return 1.0; }, "1", Vec::Constant(1, 0.0),
                                Vec::Constant(1, 1.0), 256);
  AutomorphismFamily fam;
  fam.group = t1;
  AutomorphismSpec ident = identity_automorphism(t1);
  AutomorphismSpec refl = torus_automorphism(t1, -Eigen::MatrixXi::Identity(1, 1));
  fam.at = [ident, refl](const Vec& u) { return u[0] < 0.5 ? refl : ident; };

  ScalarFn f = [](const Vec& x) { return std::sin(2.0 * M_PI * x[0]); };
  auto gen = rng::substream(seed, "c6");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_struct = 0.0, worst_zero = 0.0;
  for (int i = 0; i < 10; ++i) {
    Vec x = Vec::Constant(1, u01(gen));
    TorusForm form = special_form_torus(kern, fam, f, x);
    double closed = form.a * f(x) + form.b * std::sin(-2.0 * M_PI * x[0]);
    worst_struct = std::max(worst_struct, std::abs(form.value - closed));
    worst_zero = std::max(worst_zero, std::abs(form.value));
  }
  c.check(worst_struct <= 1e-6,
          "quadrature agrees with aI + bJ closed form (worst " + format_sci(worst_struct) + ")");
  c.check(worst_zero <= 1e-8,
          "equal branches annihilate sin(2 pi x) (worst " + format_sci(worst_zero) + ")");
  TorusForm form = special_form_torus(kern, fam, f, Vec::Constant(1, 0.2));
  c.check_close(form.a, 0.5, 1e-12, "identity branch weight a = 1/2");
  c.check_close(form.b, 0.5, 1e-12, "reflection branch weight b = 1/2");
  return c.done();
}

CriterionResult criterion7(std::uint64_t seed) {
  Criterion c(7, "Example 2: SU(2) inner automorphisms are isometries; Lemma 1 on SU(2)");
  GroupSpec su2 = GroupSpec::su2();
  auto gen = rng::substream(seed, "c7");
  double lo = 2.0, hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    AutomorphismSpec a = su2_inner_automorphism(random_point(su2, gen));
    LipschitzEstimate est =
        estimate_lipschitz(a, seed + static_cast<std::uint64_t>(i) * 31, 10'000);
    lo = std::min(lo, est.min_ratio);
    hi = std::max(hi, est.max_ratio);
  }
  c.check(lo >= 1.0 - 1e-6 && hi <= 1.0 + 1e-6,
          "20 conjugations: distance ratios in [1 - 1e-6, 1 + 1e-6] (range [" + format_sci(lo) +
              ", " + format_sci(hi) + "])");
  AutomorphismFamily fam = default_family(su2);
  Kernel kern = unit_kernel(1.0, 2.0, 24);
  for (double u0 : {1.2, 1.8})
    c.check_close(modulus(fam.at(Vec::Constant(1, u0))), 1.0, 1e-15,
                  "mod = 1 for inner automorphisms");
  GroupGrid domain = make_box_grid(su2, 0.0, 32);
  Lemma1Report lr = check_lemma1(kern, fam, smooth_bump(su2, identity(su2), 0.7), domain, 1e-2);
  c.check(lr.pass, "check_lemma1 passes on SU(2) (lhs " + format_sci(lr.lhs) + " <= rhs " +
                       format_sci(lr.rhs) + ")");
  return c.done();
}

CriterionResult criterion8(std::uint64_t seed) {
  Criterion c(8, "Addendum: Struble scaling on T^1; addendum bound identity");
  GroupSpec t1 = GroupSpec::torus(1);
  StrubleFamily sf{t1, 20};
  for (int m : {1, -1}) {
    AutomorphismSpec a = torus_automorphism(t1, Eigen::MatrixXi::Constant(1, 1, m));
    ScalingInterval iv = struble_scaling_ratio(a, sf, seed ^ static_cast<std::uint64_t>(m + 2), 5000);
    c.check(std::abs(iv.min_ratio - 1.0) <= 1e-9 && std::abs(iv.max_ratio - 1.0) <= 1e-9,
            "M = " + std::to_string(m) + ": scaling interval [1,1] (got [" +
                format_sci(iv.min_ratio) + ", " + format_sci(iv.max_ratio) + "])");
  }
  // on compact families mod = 1, so the addendum bound with kappa = 1 is the
  // same sum as C_mu ||Phi||_{L^1}
  for (const GroupSpec& spec : {GroupSpec::torus(2), GroupSpec::su2()}) {
    RenormConstants consts = RenormConstants::for_group(spec);
    Kernel kern = function_kernel(
        [](const Vec& u) { return 0.3 + (u[0] - 1.0) * (2.0 - u[0]); }, "bump", Vec::Constant(1, 1.0),
        Vec::Constant(1, 2.0), 128);
    AutomorphismFamily fam = default_family(spec);
    double ab = addendum_bound(kern, fam, 1.0, consts);
    double l1 = norm_L_A(kern, fam);  // mod = 1: this is ||Phi||_{L^1}
    c.check_close(ab, consts.c_mu * l1, 1e-12,
                  family_name(spec.family) + " addendum bound = C_mu ||Phi||_1");
  }
  return c.done();
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion1(seed));
  out.push_back(criterion2(seed));
  out.push_back(criterion3(seed));
  out.push_back(criterion4(seed));
  out.push_back(criterion5(seed));
  out.push_back(criterion6(seed));
  out.push_back(criterion7(seed));
  out.push_back(criterion8(seed));
  return out;
}

}  // namespace hausd::harness
