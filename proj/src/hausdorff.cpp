#include "hausd/hausdorff.hpp"

#include <cmath>
#include <stdexcept>

namespace hausd {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double quad_sum(const ParamGrid& g, const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += f(g.nodes[i]) * g.weights[i];
  return s;
}

}  // namespace

ParamGrid make_param_grid(const Vec& lo, const Vec& hi, int res) {
  require(lo.size() == hi.size() && lo.size() >= 1, "param grid: bad box");
  require(res >= 1, "param grid: resolution >= 1");
  int d = static_cast<int>(lo.size());
  long total = 1;
  for (int i = 0; i < d; ++i) {
    require(hi[i] > lo[i], "param grid: empty box");
    total *= res;
  }
  require(total <= 20'000'000L, "param grid: too many cells");
  Vec h = (hi - lo) / res;
  double w = h.prod();
  ParamGrid g;
  g.nodes.reserve(total);
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(d);
  Vec node(d);
  for (long flat = 0; flat < total; ++flat) {
    for (int i = 0; i < d; ++i) node[i] = lo[i] + (idx[i] + 0.5) * h[i];
    g.nodes.push_back(node);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < res) break;
      idx[i] = 0;
    }
  }
  g.weights = Vec::Constant(total, w);
  return g;
}

IntegrabilityReport check_integrable(const Kernel& kernel, double tol) {
  IntegrabilityReport rep;
  auto absphi = [&](const Vec& u) { return std::abs(kernel.phi(u)); };
  rep.coarse = quad_sum(kernel.grid(), absphi);
  rep.fine = quad_sum(kernel.refined_grid(), absphi);
  double denom = std::max(std::abs(rep.fine), 1e-300);
  rep.rel_change = std::abs(rep.fine - rep.coarse) / denom;
  rep.pass = rep.rel_change <= tol;
  return rep;
}

double evaluate_operator(const Kernel& kernel, const AutomorphismFamily& family, const ScalarFn& f,
                         const Vec& x) {
  ParamGrid g = kernel.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double phi = kernel.phi(g.nodes[i]);
    if (phi == 0.0) continue;
    s += phi * f(apply(family.at(g.nodes[i]), x)) * g.weights[i];
  }
  return s;
}

RefinedValue evaluate_operator_refined(const Kernel& kernel, const AutomorphismFamily& family,
                                       const ScalarFn& f, const Vec& x) {
  RefinedValue rv;
  rv.value = evaluate_operator(kernel, family, f, x);
  Kernel fine = kernel;
  fine.resolution *= 2;
  double v2 = evaluate_operator(fine, family, f, x);
  rv.rel_change = std::abs(v2 - rv.value) / std::max(std::abs(v2), 1e-300);
  return rv;
}

double norm_L_A(const Kernel& kernel, const AutomorphismFamily& family) {
  return quad_sum(kernel.grid(), [&](const Vec& u) {
    double phi = kernel.phi(u);
    return phi == 0.0 ? 0.0 : std::abs(phi) / modulus(family.at(u));
  });
}

double norm_L1_ks(const Kernel& kernel, const AutomorphismFamily& family, double s) {
  return quad_sum(kernel.grid(), [&](const Vec& u) {
    double phi = kernel.phi(u);
    return phi == 0.0 ? 0.0 : std::abs(phi) * std::pow(k_constant(family.at(u)), s);
  });
}

BoundReport theorem1_bound(const Kernel& kernel, const AutomorphismFamily& family,
                           const RenormConstants& consts) {
  BoundReport rep;
  rep.consts = consts;
  rep.norm_L_A = norm_L_A(kernel, family);
  rep.norm_L1_ks = norm_L1_ks(kernel, family, consts.s);
  rep.theorem1_bound = consts.c_mu * std::pow(consts.b / consts.a, consts.s) * rep.norm_L1_ks;
  return rep;
}

double addendum_bound(const Kernel& kernel, const AutomorphismFamily& family, double kappa_rho,
                      const RenormConstants& consts) {
  require(kappa_rho > 0.0, "addendum_bound: kappa_rho must be supplied and positive");
  double integral = quad_sum(kernel.grid(), [&](const Vec& u) {
    double phi = kernel.phi(u);
    if (phi == 0.0) return 0.0;
    return std::abs(phi) * std::pow(kappa_rho / modulus(family.at(u)), consts.s);
  });
  return consts.c_mu * integral;
}

Lemma1Report check_lemma1(const Kernel& kernel, const AutomorphismFamily& family, const ScalarFn& f,
                          const GroupGrid& domain, double tol) {
  Lemma1Report rep;
  rep.tol = tol;
  ParamGrid g = kernel.grid();
  std::vector<AutomorphismSpec> autos;
  std::vector<double> phiw;
  autos.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double phi = kernel.phi(g.nodes[i]);
    if (phi == 0.0) continue;
    autos.push_back(family.at(g.nodes[i]));
    phiw.push_back(phi * g.weights[i]);
  }
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const Vec& x = domain.nodes[j];
    double hf = 0.0;
    for (std::size_t i = 0; i < autos.size(); ++i) hf += phiw[i] * f(apply(autos[i], x));
    rep.lhs += std::abs(hf) * domain.weights[j];
    rep.f_l1 += std::abs(f(x)) * domain.weights[j];
  }
  rep.rhs = norm_L_A(kernel, family) * rep.f_l1;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + tol);
  return rep;
}

AtomicImage atomic_image_decomposition(const Kernel& kernel, const AutomorphismFamily& family,
                                       const Atom& a0, const RenormConstants& consts,
                                       double atom_tol, double bound_tol) {
  AtomicImage out;
  BoundReport br = theorem1_bound(kernel, family, consts);
  out.bound = br.theorem1_bound;
  ParamGrid g = kernel.grid();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double phi = kernel.phi(g.nodes[i]);
    if (phi == 0.0) continue;
    AutomorphismSpec a = family.at(g.nodes[i]);
    Pushforward pf = pushforward_atom(a0, a, consts);
    double lambda = phi * g.weights[i] * pf.lambda_scale;
    if (!validate_atom(pf.atom, atom_tol).pass) ++out.invalid_atoms;
    out.sum_abs_lambda += std::abs(lambda);
    out.rep.lambdas.push_back(lambda);
    out.rep.atoms.push_back(std::move(pf.atom));
  }
  out.pass = out.invalid_atoms == 0 && out.sum_abs_lambda <= out.bound * (1.0 + bound_tol);
  return out;
}

TorusForm special_form_torus(const Kernel& kernel, const AutomorphismFamily& m_family,
                             const ScalarFn& f, const Vec& x) {
  require(m_family.group.family == Family::Torus, "special_form_torus: torus family expected");
  TorusForm out;
  out.value = evaluate_operator(kernel, m_family, f, x);
  if (m_family.group.n == 1) {
    // Aut(T) = {I, J}; split the kernel mass between the two branches
    ParamGrid g = kernel.grid();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      double phi = kernel.phi(g.nodes[i]);
      if (phi == 0.0) continue;
      AutomorphismSpec a = m_family.at(g.nodes[i]);
      if (a.mat(0, 0) > 0.0)
        out.a += phi * g.weights[i];
      else
        out.b += phi * g.weights[i];
    }
  }
  return out;
}

double special_form_su2(const Kernel& kernel, const AutomorphismFamily& conjugator_family,
                        const ScalarFn& f, const Vec& x) {
  require(conjugator_family.group.family == Family::SU2, "special_form_su2: SU2 family expected");
  return evaluate_operator(kernel, conjugator_family, f, x);
}

double special_form_heisenberg_symplectic(const Kernel& kernel, const AutomorphismFamily& s_family,
                                          const ScalarFn& f, const Vec& point) {
  require(s_family.group.family == Family::Heisenberg,
          "special_form_heisenberg_symplectic: Heisenberg family expected");
  return evaluate_operator(kernel, s_family, f, point);
}

}  // namespace hausd
