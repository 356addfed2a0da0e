#include "hausd/automorphism.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hausd/rng.hpp"

namespace hausd {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Eigen::MatrixXd symplectic_form(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

// exponent of the dilation on coordinate k
double dilation_exponent(const GroupSpec& spec, int k) {
  if (spec.family == Family::Heisenberg) return k < 2 * spec.n ? 1.0 : 2.0;
  // UpperTriangular: entry (i,j) scales with lambda^{j-i}
  int idx = 0;
  for (int i = 0; i < spec.n; ++i)
    for (int j = i + 1; j < spec.n; ++j)
      if (idx++ == k) return j - i;
  throw std::logic_error("dilation_exponent: bad coordinate");
}

// linear action of the automorphism on coordinates (all non-SU2 kinds)
Eigen::MatrixXd coordinate_matrix(const AutomorphismSpec& a) {
  int d = a.group.coord_dim();
  switch (a.kind) {
    case AutomorphismSpec::Kind::Matrix:
    case AutomorphismSpec::Kind::TorusMatrix: return a.mat;
    case AutomorphismSpec::Kind::Dilation: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      for (int k = 0; k < d; ++k) m(k, k) = std::pow(a.lambda, dilation_exponent(a.group, k));
      return m;
    }
    case AutomorphismSpec::Kind::Symplectic: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
      m.topLeftCorner(d - 1, d - 1) = a.mat;
      return m;
    }
    default: throw std::logic_error("coordinate_matrix: no linear coordinate action");
  }
}

}  // namespace

AutomorphismSpec euclidean_automorphism(const GroupSpec& spec, const Eigen::MatrixXd& m) {
  require(spec.family == Family::Euclidean, "euclidean_automorphism: wrong group");
  require(m.rows() == spec.n && m.cols() == spec.n, "euclidean_automorphism: matrix size");
  require(std::abs(m.determinant()) > 1e-14, "euclidean_automorphism: singular matrix");
  return {spec, AutomorphismSpec::Kind::Matrix, m, {}, 1.0};
}

AutomorphismSpec torus_automorphism(const GroupSpec& spec, const Eigen::MatrixXi& m) {
  require(spec.family == Family::Torus, "torus_automorphism: wrong group");
  require(m.rows() == spec.n && m.cols() == spec.n, "torus_automorphism: matrix size");
  double det = m.cast<double>().determinant();
  require(std::abs(std::abs(det) - 1.0) < 1e-9, "torus_automorphism: |det| must be 1");
  return {spec, AutomorphismSpec::Kind::TorusMatrix, m.cast<double>(), {}, 1.0};
}

AutomorphismSpec su2_inner_automorphism(const Vec& conjugator) {
  require(conjugator.size() == 4, "su2_inner_automorphism: quaternion expected");
  require(conjugator.norm() > 1e-14, "su2_inner_automorphism: zero conjugator");
  return {GroupSpec::su2(), AutomorphismSpec::Kind::Su2Conjugation, {},
          conjugator / conjugator.norm(), 1.0};
}

AutomorphismSpec dilation_automorphism(const GroupSpec& spec, double lambda) {
  require(spec.family == Family::Heisenberg || spec.family == Family::UpperTriangular,
          "dilation_automorphism: homogeneous groups only");
  require(lambda > 0.0, "dilation_automorphism: lambda > 0");
  return {spec, AutomorphismSpec::Kind::Dilation, {}, {}, lambda};
}

AutomorphismSpec symplectic_automorphism(const GroupSpec& spec, const Eigen::MatrixXd& s) {
  require(spec.family == Family::Heisenberg, "symplectic_automorphism: Heisenberg only");
  int n = spec.n;
  require(s.rows() == 2 * n && s.cols() == 2 * n, "symplectic_automorphism: matrix size");
  Eigen::MatrixXd j = symplectic_form(n);
  require((s.transpose() * j * s - j).cwiseAbs().maxCoeff() <= 1e-10,
          "symplectic_automorphism: S'JS != J");
  return {spec, AutomorphismSpec::Kind::Symplectic, s, {}, 1.0};
}

AutomorphismSpec identity_automorphism(const GroupSpec& spec) {
  switch (spec.family) {
    case Family::Euclidean:
      return euclidean_automorphism(spec, Eigen::MatrixXd::Identity(spec.n, spec.n));
    case Family::Torus: return torus_automorphism(spec, Eigen::MatrixXi::Identity(spec.n, spec.n));
    case Family::SU2: return su2_inner_automorphism(identity(spec));
    default: return dilation_automorphism(spec, 1.0);
  }
}

Vec apply(const AutomorphismSpec& a, const Vec& g) {
  require(g.size() == a.group.coord_dim(), "apply: dimension mismatch");
  switch (a.kind) {
    case AutomorphismSpec::Kind::Matrix: return a.mat * g;
    case AutomorphismSpec::Kind::TorusMatrix: return canonical(a.group, a.mat * g);
    case AutomorphismSpec::Kind::Su2Conjugation:
      return multiply(a.group, multiply(a.group, a.quat, g), inverse(a.group, a.quat));
    case AutomorphismSpec::Kind::Dilation:
    case AutomorphismSpec::Kind::Symplectic: return coordinate_matrix(a) * g;
  }
  return g;
}

AutomorphismSpec inverse(const AutomorphismSpec& a) {
  AutomorphismSpec r = a;
  switch (a.kind) {
    case AutomorphismSpec::Kind::Matrix:
    case AutomorphismSpec::Kind::Symplectic: r.mat = a.mat.inverse(); break;
    case AutomorphismSpec::Kind::TorusMatrix:
      // |det| = 1, so the inverse is again integer; round away drift
      r.mat = a.mat.inverse().array().round();
      break;
    case AutomorphismSpec::Kind::Su2Conjugation: r.quat = inverse(a.group, a.quat); break;
    case AutomorphismSpec::Kind::Dilation: r.lambda = 1.0 / a.lambda; break;
  }
  return r;
}

double modulus(const AutomorphismSpec& a) {
  switch (a.kind) {
    case AutomorphismSpec::Kind::Matrix: return std::abs(a.mat.determinant());
    case AutomorphismSpec::Kind::Dilation:
      return std::pow(a.lambda, a.group.homogeneous_dim());
    default: return 1.0;  // torus / inner / symplectic automorphisms preserve Haar measure
  }
}

double k_constant(const AutomorphismSpec& a) {
  switch (a.kind) {
    case AutomorphismSpec::Kind::Matrix:
    case AutomorphismSpec::Kind::TorusMatrix: {
      // max absolute row sum of the inverse matrix
      Eigen::MatrixXd inv = a.mat.inverse();
      return inv.cwiseAbs().rowwise().sum().maxCoeff();
    }
    case AutomorphismSpec::Kind::Su2Conjugation: return 1.0;  // isometry
    case AutomorphismSpec::Kind::Dilation: return 1.0 / a.lambda;
    case AutomorphismSpec::Kind::Symplectic: {
      // gauge((S^-1 z, t)) <= max(|S^-1|_2, 1) gauge((z, t))
      Eigen::MatrixXd inv = a.mat.inverse();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(inv);
      return std::max(1.0, svd.singularValues()[0]);
    }
  }
  return 1.0;
}

StarCertificate verify_star_condition(const AutomorphismSpec& a, const Ball& ball, double k,
                                      std::uint64_t seed, long n_samples) {
  require(k > 0.0, "verify_star_condition: k > 0");
  StarCertificate cert;
  cert.k = k;
  const GroupSpec& spec = a.group;
  AutomorphismSpec ainv = inverse(a);
  Vec recentered = apply(ainv, canonical(spec, ball.center));
  auto gen = rng::substream(seed, "star");
  for (long i = 0; i < n_samples; ++i) {
    Vec p = random_ball_point(spec, ball, gen);
    Vec q = apply(ainv, p);
    double ratio = distance(spec, recentered, q) / ball.radius;
    cert.worst_ratio = std::max(cert.worst_ratio, ratio);
    if (ratio > k * (1.0 + 1e-9)) ++cert.violations;
  }
  cert.samples_checked = n_samples;
  return cert;
}

ModulusEstimate estimate_modulus(const AutomorphismSpec& a, std::uint64_t seed, long n_samples) {
  require(n_samples >= 10'000, "estimate_modulus: need at least 1e4 samples");
  const GroupSpec& spec = a.group;
  auto gen = rng::substream(seed, "modulus");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ModulusEstimate est;
  est.samples = n_samples;
  long hits = 0;
  double total;  // Haar measure of the sampling region
  double measure_e;

  if (spec.family == Family::SU2) {
    Ball e_ball{identity(spec), 1.0};
    measure_e = ball_measure(spec, e_ball);
    total = 1.0;
    AutomorphismSpec ainv = inverse(a);
    for (long i = 0; i < n_samples; ++i) {
      Vec p = random_point(spec, gen);
      if (distance(spec, apply(ainv, p), identity(spec)) <= e_ball.radius) ++hits;
    }
  } else if (spec.family == Family::Torus) {
    double side = 0.25;
    measure_e = std::pow(side, spec.n);
    total = 1.0;
    AutomorphismSpec ainv = inverse(a);
    for (long i = 0; i < n_samples; ++i) {
      Vec p = random_point(spec, gen);
      Vec q = apply(ainv, p);
      bool in = true;
      for (int j = 0; j < q.size(); ++j) in = in && q[j] < side;
      if (in) ++hits;
    }
  } else {
    // E = [-1,1]^d; sample a box covering the linear image of E with margin
    int d = spec.coord_dim();
    measure_e = std::pow(2.0, d);
    Eigen::MatrixXd m = coordinate_matrix(a);
    Eigen::MatrixXd minv = m.inverse();
    Vec bound = 1.5 * m.cwiseAbs().rowwise().sum();
    total = std::pow(2.0, d) * bound.prod();
    for (long i = 0; i < n_samples; ++i) {
      Vec p(d);
      for (int j = 0; j < d; ++j) p[j] = (2.0 * u01(gen) - 1.0) * bound[j];
      if ((minv * p).cwiseAbs().maxCoeff() <= 1.0) ++hits;
    }
  }
  double f = double(hits) / double(n_samples);
  est.estimate = f * total / measure_e;
  est.std_error = std::sqrt(std::max(f * (1.0 - f), 1e-300) / double(n_samples)) * total / measure_e;
  return est;
}

LipschitzEstimate estimate_lipschitz(const AutomorphismSpec& a, std::uint64_t seed, long n_pairs) {
  require(n_pairs >= 10'000, "estimate_lipschitz: need at least 1e4 pairs");
  const GroupSpec& spec = a.group;
  auto gen = rng::substream(seed, "lipschitz");
  LipschitzEstimate est;
  est.min_ratio = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  long counted = 0;
  for (long i = 0; i < n_pairs; ++i) {
    Vec x = canonical(spec, random_point(spec, gen));
    Vec y;
    if (i % 2 == 0) {
      y = canonical(spec, random_point(spec, gen));
    } else {
      // short-range pair: probe local behavior too
      y = random_ball_point(spec, {x, 0.1}, gen);
    }
    double d0 = distance(spec, x, y);
    if (d0 <= 1e-14) continue;
    double r = distance(spec, apply(a, x), apply(a, y)) / d0;
    est.max_ratio = std::max(est.max_ratio, r);
    est.min_ratio = std::min(est.min_ratio, r);
    sum += r;
    ++counted;
  }
  est.mean_ratio = counted ? sum / counted : 0.0;
  est.pairs = counted;
  return est;
}

double certify_k_empirical(const AutomorphismSpec& a, std::uint64_t seed, long n_samples) {
  // smallest k with zero violations over the sample is exactly the worst
  // observed ratio; certify it with a safety factor
  const GroupSpec& spec = a.group;
  auto gen = rng::substream(seed, "certify_k");
  double worst = 0.0;
  Ball balls[2] = {{identity(spec), 1.0}, {canonical(spec, random_point(spec, gen)), 0.5}};
  for (const Ball& b : balls) {
    StarCertificate c = verify_star_condition(a, b, 1.0, rng::splitmix64(seed), n_samples / 2);
    worst = std::max(worst, c.worst_ratio);
  }
  return 1.05 * worst;
}

ScalingInterval struble_scaling_ratio(const AutomorphismSpec& a, const StrubleFamily& fam,
                                      std::uint64_t seed, long n_pairs) {
  require(a.group.family == Family::Torus, "struble_scaling_ratio: torus only");
  auto gen = rng::substream(seed, "struble");
  ScalingInterval iv{std::numeric_limits<double>::infinity(), 0.0};
  for (long i = 0; i < n_pairs; ++i) {
    Vec x = random_point(a.group, gen);
    Vec y = random_point(a.group, gen);
    double d0 = struble_metric(x, y, fam);
    if (d0 <= 1e-14) continue;
    double r = struble_metric(apply(a, x), apply(a, y), fam) / d0;
    iv.min_ratio = std::min(iv.min_ratio, r);
    iv.max_ratio = std::max(iv.max_ratio, r);
  }
  return iv;
}

}  // namespace hausd
