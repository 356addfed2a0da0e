#include "hausd/atom.hpp"

#include <cmath>
#include <stdexcept>

#include "hausd/rng.hpp"

namespace hausd {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

RenormConstants RenormConstants::for_group(const GroupSpec& spec) {
  RenormConstants c;
  c.c_mu = spec.doubling_constant();
  c.s = std::log2(c.c_mu);
  return c;
}

AtomReport validate_atom(const Atom& a, double tol) {
  AtomReport rep;
  double mu = ball_measure(a.spec, a.support);
  Vec center = canonical(a.spec, a.support.center);
  double maxval = 0.0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    double v = std::abs(a.values[static_cast<long>(i)]);
    maxval = std::max(maxval, v);
    if (v > 0.0) {
      double excess = distance(a.spec, center, a.nodes[i]) / a.support.radius - 1.0;
      rep.support_residual = std::max(rep.support_residual, excess);
    }
  }
  rep.sup_residual = std::max(0.0, maxval * mu - 1.0);
  double sup = std::max(maxval, a.sup_bound);
  rep.cancel_residual = sup > 0.0 ? std::abs(a.integral()) / (sup * mu) : 0.0;
  rep.pass = rep.support_residual <= tol && rep.sup_residual <= tol && rep.cancel_residual <= tol;
  return rep;
}

Atom make_random_atom(const GroupSpec& spec, const Ball& ball, std::uint64_t seed, int res) {
  if (spec.family == Family::Torus)
    require(ball.radius <= 0.5, "make_random_atom: torus radius capped at 1/2");
  auto grid = std::make_shared<GroupGrid>(make_ball_grid(spec, ball, res));
  require(grid->size() > 0, "make_random_atom: empty grid over ball");
  auto gen = rng::substream(seed, "atom");
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Vec v(static_cast<long>(grid->size()));
  for (long i = 0; i < v.size(); ++i) v[i] = ud(gen);
  v.array() -= v.dot(grid->weights) / grid->weights.sum();  // exact cancellation
  double mu = ball_measure(spec, ball);
  double scale = 1.0 / (mu * v.cwiseAbs().maxCoeff());
  v *= scale;

  Atom a;
  a.spec = spec;
  a.support = {canonical(spec, ball.center), ball.radius};
  a.sup_bound = 1.0 / mu;
  a.nodes = grid->nodes;
  a.weights = grid->weights;
  a.values = v;
  a.eval = [grid, v](const Vec& x) {
    int i = grid->locate(x);
    return i < 0 ? 0.0 : v[i];
  };
  return a;
}

Pushforward pushforward_atom(const Atom& a, const AutomorphismSpec& A,
                             const RenormConstants& consts) {
  require(a.spec == A.group, "pushforward_atom: atom and automorphism on different groups");
  double k = k_constant(A);
  double scale = consts.c_mu * std::pow(consts.b * k / consts.a, consts.s);
  AutomorphismSpec ainv = inverse(A);
  double minv = modulus(ainv);

  Pushforward out;
  out.lambda_scale = scale;
  Atom& ap = out.atom;
  ap.spec = a.spec;
  ap.support = {canonical(a.spec, apply(ainv, a.support.center)), k * a.support.radius};
  ap.sup_bound = a.sup_bound / scale;
  ap.nodes.reserve(a.nodes.size());
  for (const Vec& x : a.nodes) ap.nodes.push_back(apply(ainv, x));
  ap.weights = a.weights * minv;  // change of variables keeps the integral exact
  ap.values = a.values / scale;
  auto base = a.eval;
  ap.eval = [base, A, scale](const Vec& x) { return base(apply(A, x)) / scale; };
  return out;
}

double h1_upper_bound(const AtomicRepresentation& rep) {
  double s = 0.0;
  for (double l : rep.lambdas) s += std::abs(l);
  return s;
}

RepresentResult represent(const GridFunction& f, const std::vector<Ball>& balls,
                          const GroupSpec& spec) {
  RepresentResult out;
  const GroupGrid& grid = *f.grid;
  std::vector<bool> claimed(grid.size(), false);
  for (const Ball& b : balls) {
    Vec center = canonical(spec, b.center);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (claimed[i] || f.values[static_cast<long>(i)] == 0.0) continue;
      if (distance(spec, center, grid.nodes[i]) <= b.radius * (1.0 + 1e-12)) {
        idx.push_back(i);
        claimed[i] = true;
      }
    }
    if (idx.empty()) continue;
    Atom a;
    a.spec = spec;
    a.support = {center, b.radius};
    a.nodes.reserve(idx.size());
    a.weights = Vec(static_cast<long>(idx.size()));
    a.values = Vec(static_cast<long>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      a.nodes.push_back(grid.nodes[idx[j]]);
      a.weights[static_cast<long>(j)] = grid.weights[static_cast<long>(idx[j])];
      a.values[static_cast<long>(j)] = f.values[static_cast<long>(idx[j])];
    }
    double mu = ball_measure(spec, b);
    double lambda = a.values.cwiseAbs().maxCoeff() * mu;
    if (lambda == 0.0) continue;
    a.values /= lambda;
    a.sup_bound = 1.0 / mu;
    Vec piece = Vec::Zero(f.values.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      piece[static_cast<long>(idx[j])] = a.values[static_cast<long>(j)];
    auto g = f.grid;
    a.eval = [g, piece](const Vec& x) {
      int i = g->locate(x);
      return i < 0 ? 0.0 : piece[i];
    };
    out.rep.lambdas.push_back(lambda);
    out.rep.atoms.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!claimed[i])
      out.residual_l1 +=
          std::abs(f.values[static_cast<long>(i)]) * grid.weights[static_cast<long>(i)];
  return out;
}

}  // namespace hausd
