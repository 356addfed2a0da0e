#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hausd/atom.hpp"
#include "hausd/automorphism.hpp"
#include "hausd/expr.hpp"
#include "hausd/group.hpp"

namespace hausd {

using ScalarFn = std::function<double(const Vec&)>;

// Midpoint tensor grid over the compact parameter box Omega.
struct ParamGrid {
  std::vector<Vec> nodes;
  Vec weights;
};

ParamGrid make_param_grid(const Vec& lo, const Vec& hi, int res);

using ParamFn = std::function<double(const Vec&)>;

// Kernel Phi over Omega, declared compactly supported inside the box.
struct Kernel {
  ParamFn phi;
  std::string phi_text;  // id for reports; empty for ad-hoc callables
  Vec lo, hi;            // support box
  int resolution = 256;

  ParamGrid grid() const { return make_param_grid(lo, hi, resolution); }
  ParamGrid refined_grid() const { return make_param_grid(lo, hi, 2 * resolution); }
};

// Grid-refinement ratio test: |Phi| quadrature at res vs 2*res.
struct IntegrabilityReport {
  double coarse = 0.0;
  double fine = 0.0;
  double rel_change = 0.0;
  bool pass = false;
};
IntegrabilityReport check_integrable(const Kernel& kernel, double tol = 1e-2);

double evaluate_operator(const Kernel& kernel, const AutomorphismFamily& family, const ScalarFn& f,
                         const Vec& x);

// value plus the relative change under one grid refinement
struct RefinedValue {
  double value = 0.0;
  double rel_change = 0.0;
};
RefinedValue evaluate_operator_refined(const Kernel& kernel, const AutomorphismFamily& family,
                                       const ScalarFn& f, const Vec& x);

double norm_L_A(const Kernel& kernel, const AutomorphismFamily& family);
double norm_L1_ks(const Kernel& kernel, const AutomorphismFamily& family, double s);

struct BoundReport {
  double norm_L_A = 0.0;
  double norm_L1_ks = 0.0;
  double theorem1_bound = 0.0;  // C_mu (b/a)^s ||Phi||_{L1_{k^s}}
  std::optional<double> addendum_bound;
  RenormConstants consts;
  double kappa_rho = 1.0;
};

BoundReport theorem1_bound(const Kernel& kernel, const AutomorphismFamily& family,
                           const RenormConstants& consts);

// C_mu * int |Phi| (kappa_rho / mod A(u))^s dmu(u)
double addendum_bound(const Kernel& kernel, const AutomorphismFamily& family, double kappa_rho,
                      const RenormConstants& consts);

struct Lemma1Report {
  double lhs = 0.0;  // ||Hf||_1 over the truncated domain
  double rhs = 0.0;  // ||Phi||_{L_A} ||f||_1
  double f_l1 = 0.0;
  double tol = 1e-2;
  bool pass = false;
};

// f is evaluated in closed form; both integrals use the given domain grid.
Lemma1Report check_lemma1(const Kernel& kernel, const AutomorphismFamily& family, const ScalarFn& f,
                          const GroupGrid& domain, double tol = 1e-2);

struct AtomicImage {
  AtomicRepresentation rep;
  double sum_abs_lambda = 0.0;
  double bound = 0.0;  // theorem1 bound for this kernel/family
  long invalid_atoms = 0;
  bool pass = false;
};

// Discretizes H a0 into sum_i [Phi(u_i) w_i lambda_scale(u_i)] a'_i with the
// renormalized atoms a'_i; checks each atom and sum|lambda| <= bound (1+tol).
AtomicImage atomic_image_decomposition(const Kernel& kernel, const AutomorphismFamily& family,
                                       const Atom& a0, const RenormConstants& consts,
                                       double atom_tol = 1e-6, double bound_tol = 1e-2);

// Example-1 structure on the torus: for n=1, the operator splits as
// a I + b J with Jf(x) = f(-x).
struct TorusForm {
  double value = 0.0;
  double a = 0.0;  // weight of the identity branch
  double b = 0.0;  // weight of the reflection branch
};
TorusForm special_form_torus(const Kernel& kernel, const AutomorphismFamily& m_family,
                             const ScalarFn& f, const Vec& x);

double special_form_su2(const Kernel& kernel, const AutomorphismFamily& conjugator_family,
                        const ScalarFn& f, const Vec& x);

double special_form_heisenberg_symplectic(const Kernel& kernel, const AutomorphismFamily& s_family,
                                          const ScalarFn& f, const Vec& point);

}  // namespace hausd
