#include "hausd/group.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hausd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap01(double x) { return x - std::floor(x); }

double arc_dist(double a, double b) {
  double d = std::abs(wrap01(a) - wrap01(b));
  return std::min(d, 1.0 - d);
}

// quaternion product, coordinates (w, x, y, z)
Vec quat_mul(const Vec& p, const Vec& q) {
  Vec r(4);
  r[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
  r[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
  r[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
  r[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
  return r;
}

// strict-upper entry list for T_1(n,R), row-major
std::vector<std::pair<int, int>> ut_pairs(int n) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  return p;
}

Eigen::MatrixXd ut_to_matrix(int n, const Vec& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = a[k++];
  return m;
}

Vec ut_from_matrix(int n, const Eigen::MatrixXd& m) {
  Vec a(n * (n - 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[k++] = m(i, j);
  return a;
}

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// normalized volume of the geodesic cap of radius r on S^3
double su2_cap(double r) {
  double t = std::clamp(r, 0.0, kPi);
  double integral = simpson([](double x) { return std::sin(x) * std::sin(x); }, 0.0, t, 512);
  return integral / (kPi / 2.0);
}

// per-cell weight factors of the S^3 angle parametrization
double int_sin2(double a, double b) {
  auto F = [](double x) { return 0.5 * (x - std::sin(x) * std::cos(x)); };
  return F(b) - F(a);
}
double int_sin(double a, double b) { return std::cos(a) - std::cos(b); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Euclidean: return "euclidean";
    case Family::Torus: return "torus";
    case Family::SU2: return "su2";
    case Family::Heisenberg: return "heisenberg";
    case Family::UpperTriangular: return "upper_triangular";
  }
  return "?";
}

GroupSpec GroupSpec::euclidean(int n) {
  require(n >= 1, "euclidean: n >= 1");
  return {Family::Euclidean, n};
}
GroupSpec GroupSpec::torus(int n) {
  require(n >= 1, "torus: n >= 1");
  return {Family::Torus, n};
}
GroupSpec GroupSpec::su2() { return {Family::SU2, 1}; }
GroupSpec GroupSpec::heisenberg(int n) {
  require(n >= 1, "heisenberg: n >= 1");
  return {Family::Heisenberg, n};
}
GroupSpec GroupSpec::upper_triangular(int n) {
  require(n >= 2, "upper_triangular: n >= 2");
  return {Family::UpperTriangular, n};
}

int GroupSpec::coord_dim() const {
  switch (family) {
    case Family::Euclidean:
    case Family::Torus: return n;
    case Family::SU2: return 4;
    case Family::Heisenberg: return 2 * n + 1;
    case Family::UpperTriangular: return n * (n - 1) / 2;
  }
  return 0;
}

double GroupSpec::homogeneous_dim() const {
  switch (family) {
    case Family::Euclidean:
    case Family::Torus: return n;
    case Family::SU2: return 3.0;
    case Family::Heisenberg: return 2.0 * n + 2.0;
    case Family::UpperTriangular: return n * (double(n) * n - 1.0) / 6.0;
  }
  return 0.0;
}

double GroupSpec::doubling_constant() const {
  if (family == Family::SU2) return 8.0;
  return std::pow(2.0, homogeneous_dim());
}

Vec identity(const GroupSpec& spec) {
  Vec e = Vec::Zero(spec.coord_dim());
  if (spec.family == Family::SU2) e[0] = 1.0;
  return e;
}

Vec canonical(const GroupSpec& spec, Vec x) {
  require(x.size() == spec.coord_dim(), "canonical: dimension mismatch");
  if (spec.family == Family::Torus)
    for (int i = 0; i < x.size(); ++i) x[i] = wrap01(x[i]);
  if (spec.family == Family::SU2) x.normalize();
  return x;
}

bool valid_point(const GroupSpec& spec, const Vec& x, double tol) {
  if (x.size() != spec.coord_dim()) return false;
  if (spec.family == Family::SU2) return std::abs(x.norm() - 1.0) <= tol;
  if (spec.family == Family::Torus)
    for (int i = 0; i < x.size(); ++i)
      if (x[i] < 0.0 || x[i] >= 1.0) return false;
  return x.allFinite();
}

Vec multiply(const GroupSpec& spec, const Vec& g, const Vec& h) {
  require(g.size() == spec.coord_dim() && h.size() == spec.coord_dim(),
          "multiply: dimension mismatch");
  switch (spec.family) {
    case Family::Euclidean: return g + h;
    case Family::Torus: return canonical(spec, g + h);
    case Family::SU2: return quat_mul(g, h);
    case Family::Heisenberg: {
      int n = spec.n;
      Vec r(2 * n + 1);
      auto v = g.head(n), w = g.segment(n, n);
      auto vp = h.head(n), wp = h.segment(n, n);
      r.head(n) = v + vp;
      r.segment(n, n) = w + wp;
      r[2 * n] = g[2 * n] + h[2 * n] + 0.5 * (v.dot(wp) - w.dot(vp));
      return r;
    }
    case Family::UpperTriangular:
      return ut_from_matrix(spec.n, ut_to_matrix(spec.n, g) * ut_to_matrix(spec.n, h));
  }
  return g;
}

Vec inverse(const GroupSpec& spec, const Vec& g) {
  switch (spec.family) {
    case Family::Euclidean: return -g;
    case Family::Torus: return canonical(spec, -g);
    case Family::SU2: {
      Vec r = g;
      r.tail(3) *= -1.0;
      return r;
    }
    case Family::Heisenberg: return -g;
    case Family::UpperTriangular: {
      // unitriangular inverse: I - N + N^2 - ...
      int n = spec.n;
      Eigen::MatrixXd N = ut_to_matrix(n, g) - Eigen::MatrixXd::Identity(n, n);
      Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n), pow = Eigen::MatrixXd::Identity(n, n);
      for (int k = 1; k < n; ++k) {
        pow = pow * N;
        inv += (k % 2 ? -1.0 : 1.0) * pow;
      }
      return ut_from_matrix(n, inv);
    }
  }
  return g;
}

double gauge(const GroupSpec& spec, const Vec& g) {
  switch (spec.family) {
    case Family::Euclidean: return g.cwiseAbs().maxCoeff();
    case Family::Torus: {
      double m = 0.0;
      for (int i = 0; i < g.size(); ++i) m = std::max(m, arc_dist(g[i], 0.0));
      return m;
    }
    case Family::SU2: return std::acos(std::clamp(g[0] / g.norm(), -1.0, 1.0));
    case Family::Heisenberg: {
      int n = spec.n;
      double z2 = g.head(2 * n).squaredNorm();
      double t = g[2 * n];
      return calibrate_gauge(spec) * std::pow(z2 * z2 + t * t, 0.25);
    }
    case Family::UpperTriangular: {
      auto pairs = ut_pairs(spec.n);
      double m = 0.0;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        int d = pairs[k].second - pairs[k].first;
        m = std::max(m, std::pow(std::abs(g[k]), 1.0 / d));
      }
      return calibrate_gauge(spec) * m;
    }
  }
  return 0.0;
}

double distance(const GroupSpec& spec, const Vec& g, const Vec& h) {
  switch (spec.family) {
    case Family::Euclidean: return (g - h).cwiseAbs().maxCoeff();
    case Family::Torus: {
      double m = 0.0;
      for (int i = 0; i < g.size(); ++i) m = std::max(m, arc_dist(g[i], h[i]));
      return m;
    }
    case Family::SU2: return std::acos(std::clamp(g.dot(h) / (g.norm() * h.norm()), -1.0, 1.0));
    // left-invariant convention: distance from g to h is |g^-1 h|, so that
    // B(x,r) = x B(e,r) has measure r^Q even when |y| != |y^-1| (T_1(n,R))
    default: return gauge(spec, multiply(spec, inverse(spec, g), h));
  }
}

double calibrate_gauge(const GroupSpec& spec) {
  require(spec.family == Family::Heisenberg || spec.family == Family::UpperTriangular,
          "calibrate_gauge: only the homogeneous families carry a gauge constant");
  static std::map<std::pair<int, int>, double> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(spec.family), spec.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  double q = spec.homogeneous_dim();
  double v0;
  if (spec.family == Family::UpperTriangular) {
    // the raw gauge ball {max |a_ij|^{1/(j-i)} < 1} is the unit cube
    v0 = std::pow(2.0, spec.n * (spec.n - 1) / 2);
  } else {
    // Lebesgue volume of {(|z|^4 + t^2)^{1/4} < 1} in R^{2n+1}, reduced to a
    // 1-D integral over t: slices are 2n-balls of radius (1-t^2)^{1/4}.
    int n = spec.n;
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double coef = std::pow(kPi, n) / fact;
    // substitute t = sin(theta) so the integrand coef * cos(theta)^{n+1} is
    // smooth at the endpoints (the raw slice volume has a sqrt singularity)
    v0 = simpson([&](double th) { return coef * std::pow(std::cos(th), n + 1.0); },
                 -kPi / 2.0, kPi / 2.0, 1 << 14);
  }
  // |x| = c * raw(x) with c = V0^{1/Q} makes Leb{|x| < r} = r^Q
  double c = std::pow(v0, 1.0 / q);
  cache[key] = c;
  return c;
}

double ball_measure(const GroupSpec& spec, double radius) {
  require(radius > 0.0, "ball_measure: radius must be positive");
  switch (spec.family) {
    case Family::Euclidean: return std::pow(2.0 * radius, spec.n);
    case Family::Torus: return std::pow(std::min(2.0 * radius, 1.0), spec.n);
    case Family::SU2: return su2_cap(radius);
    default: return std::pow(radius, spec.homogeneous_dim());
  }
}

double ball_measure(const GroupSpec& spec, const Ball& ball) {
  return ball_measure(spec, ball.radius);
}

double snowflake_distance(const GroupSpec& spec, const Vec& g, const Vec& h, double theta) {
  require(theta > 0.0 && theta <= 1.0, "snowflake_distance: theta in (0,1]");
  return std::pow(distance(spec, g, h), theta);
}

double struble_metric(const Vec& x, const Vec& y, const StrubleFamily& fam) {
  require(fam.group.family == Family::Torus, "struble_metric: torus only");
  require(fam.n_max >= 1, "struble_metric: n_max >= 1");
  int d = fam.group.n;
  double best = 0.0;
  for (int k = 1; k <= fam.n_max; ++k) {
    double len = std::pow(0.5, k);
    double vol = std::pow(len, d);
    double overlap = 1.0;
    for (int i = 0; i < d; ++i) overlap *= std::max(0.0, len - arc_dist(x[i], y[i]));
    best = std::max(best, 2.0 * (vol - overlap));
  }
  return best;
}

DoublingProfile doubling_profile(const GroupSpec& spec, const std::vector<Vec>& centers,
                                 const std::vector<double>& radii, double tol) {
  require(!centers.empty() && !radii.empty(), "doubling_profile: empty input");
  DoublingProfile p;
  p.c_mu = spec.doubling_constant();
  double s = std::log2(p.c_mu);
  const double ks[] = {1.5, 2.0, 4.0, 8.0};
  for (const Vec& c : centers) {
    (void)c;  // closed-form ball measures are center independent (left invariance)
    for (double r : radii) {
      double base = ball_measure(spec, r);
      p.max_ratio = std::max(p.max_ratio, ball_measure(spec, 2.0 * r) / base);
      for (double k : ks) {
        double slack = ball_measure(spec, k * r) / (p.c_mu * std::pow(k, s) * base) - 1.0;
        p.worst_dimension_slack = std::max(p.worst_dimension_slack, slack);
      }
    }
  }
  p.doubling_ok = p.max_ratio <= p.c_mu + tol;
  p.dimension_ok = p.worst_dimension_slack <= tol;
  return p;
}

// --- grids --------------------------------------------------------------

namespace {

// local bounding box (in coordinates, or angles for SU2) for grid building
void grid_box(const GroupSpec& spec, double radius, bool ball, Vec& lo, Vec& hi) {
  int d = spec.coord_dim();
  switch (spec.family) {
    case Family::Euclidean:
      lo = Vec::Constant(d, -radius);
      hi = Vec::Constant(d, radius);
      break;
    case Family::Torus: {
      double r = ball ? std::min(radius, 0.5) : 0.5;
      lo = Vec::Constant(d, -r);
      hi = Vec::Constant(d, r);
      if (!ball) {
        lo = Vec::Constant(d, 0.0);
        hi = Vec::Constant(d, 1.0);
      }
      break;
    }
    case Family::SU2: {
      lo = Vec::Zero(3);
      hi = Vec(3);
      hi << (ball ? std::min(radius, kPi) : kPi), kPi, 2.0 * kPi;
      break;
    }
    case Family::Heisenberg: {
      int n = spec.n;
      double rc = ball ? radius / calibrate_gauge(spec) : radius;
      lo = Vec(d);
      hi = Vec(d);
      for (int i = 0; i < 2 * n; ++i) {
        lo[i] = -rc;
        hi[i] = rc;
      }
      double tb = ball ? rc * rc : radius;
      lo[2 * n] = -tb;
      hi[2 * n] = tb;
      break;
    }
    case Family::UpperTriangular: {
      auto pairs = ut_pairs(spec.n);
      lo = Vec(d);
      hi = Vec(d);
      for (int k = 0; k < d; ++k) {
        double b =
            ball ? std::pow(radius / calibrate_gauge(spec), pairs[k].second - pairs[k].first)
                 : radius;
        lo[k] = -b;
        hi[k] = b;
      }
      break;
    }
  }
}

Vec su2_from_angles(double t1, double t2, double phi) {
  Vec q(4);
  q[0] = std::cos(t1);
  double s1 = std::sin(t1);
  q[1] = s1 * std::cos(t2);
  double s2 = std::sin(t2);
  q[2] = s1 * s2 * std::cos(phi);
  q[3] = s1 * s2 * std::sin(phi);
  return q;
}

Vec su2_to_angles(const Vec& q) {
  Vec a(3);
  double n = q.norm();
  a[0] = std::acos(std::clamp(q[0] / n, -1.0, 1.0));
  double s1 = std::sin(a[0]);
  if (s1 < 1e-14) {
    a[1] = 0.0;
    a[2] = 0.0;
    return a;
  }
  a[1] = std::acos(std::clamp(q[1] / (n * s1), -1.0, 1.0));
  double phi = std::atan2(q[3], q[2]);
  if (phi < 0.0) phi += 2.0 * kPi;
  a[2] = phi;
  return a;
}

GroupGrid build_grid(const GroupSpec& spec, const Vec& center, double radius, bool ball, int res) {
  require(res >= 1, "grid: resolution >= 1");
  GroupGrid g;
  g.spec = spec;
  g.center = center;
  grid_box(spec, radius, ball, g.lo, g.hi);
  int d = g.lo.size();
  g.dims = Eigen::VectorXi::Constant(d, res);
  g.h = (g.hi - g.lo).cwiseQuotient(g.dims.cast<double>());
  long total = 1;
  for (int i = 0; i < d; ++i) total *= g.dims[i];
  require(total <= 40'000'000L, "grid: resolution too large");

  g.cellmap_.assign(total, -1);
  std::vector<double> w;
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(d);
  Vec e = identity(spec);
  bool translate = (center.size() == e.size()) && ((center - e).norm() > 0.0);
  for (long flat = 0; flat < total; ++flat) {
    Vec local(d);
    for (int i = 0; i < d; ++i) local[i] = g.lo[i] + (idx[i] + 0.5) * g.h[i];
    double weight;
    Vec point;
    if (spec.family == Family::SU2) {
      weight = int_sin2(g.lo[0] + idx[0] * g.h[0], g.lo[0] + (idx[0] + 1) * g.h[0]) *
               int_sin(g.lo[1] + idx[1] * g.h[1], g.lo[1] + (idx[1] + 1) * g.h[1]) * g.h[2] /
               (2.0 * kPi * kPi);
      point = su2_from_angles(local[0], local[1], local[2]);
    } else {
      weight = g.h.prod();
      point = local;
    }
    bool keep = true;
    if (ball) {
      if (spec.family == Family::SU2)
        keep = local[0] <= radius;
      else
        keep = gauge(spec, spec.family == Family::Torus ? canonical(spec, point) : point) <=
               radius * (1.0 + 1e-12);
    }
    if (keep) {
      if (spec.family == Family::Torus) point = canonical(spec, point);
      if (translate) point = multiply(spec, center, point);
      g.cellmap_[flat] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(point);
      w.push_back(weight);
    }
    // advance multi-index
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < g.dims[i]) break;
      idx[i] = 0;
    }
  }
  require(!g.nodes.empty(), "grid: no cells inside domain");
  g.weights = Eigen::Map<Vec>(w.data(), static_cast<long>(w.size()));
  g.domain_measure = g.weights.sum();
  return g;
}

}  // namespace

int GroupGrid::locate(const Vec& x) const {
  Vec e = identity(spec);
  Vec local = ((center - e).norm() > 0.0) ? multiply(spec, inverse(spec, center), x) : x;
  Vec c;
  if (spec.family == Family::SU2) {
    c = su2_to_angles(local);
  } else if (spec.family == Family::Torus) {
    c = canonical(spec, local);
    for (int i = 0; i < c.size(); ++i)
      if (c[i] >= lo[i] + 1.0) c[i] -= 1.0;  // shift into [lo, lo+1)
  } else {
    c = local;
  }
  long flat = 0;
  for (int i = 0; i < c.size(); ++i) {
    double t = (c[i] - lo[i]) / h[i];
    int k = static_cast<int>(std::floor(t));
    if (k == dims[i] && t - dims[i] < 1e-12) k = dims[i] - 1;  // closed upper edge
    if (k < 0 || k >= dims[i]) return -1;
    flat = flat * dims[i] + k;
  }
  return cellmap_[flat];
}

GroupGrid make_box_grid(const GroupSpec& spec, double radius, int res) {
  return build_grid(spec, identity(spec), radius, false, res);
}

GroupGrid make_ball_grid(const GroupSpec& spec, const Ball& ball, int res) {
  require(ball.radius > 0.0, "ball grid: radius must be positive");
  if (spec.family == Family::Torus)
    require(ball.radius <= 0.5 + 1e-12, "torus ball radius capped at 1/2");
  return build_grid(spec, canonical(spec, ball.center), ball.radius, true, res);
}

// --- sampling -----------------------------------------------------------

Vec random_point(const GroupSpec& spec, std::mt19937_64& gen, double radius) {
  int d = spec.coord_dim();
  Vec x(d);
  if (spec.family == Family::SU2) {
    std::normal_distribution<double> nd;
    for (int i = 0; i < 4; ++i) x[i] = nd(gen);
    x.normalize();
    return x;
  }
  if (spec.family == Family::Torus) {
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < d; ++i) x[i] = ud(gen);
    return x;
  }
  std::uniform_real_distribution<double> ud(-radius, radius);
  for (int i = 0; i < d; ++i) x[i] = ud(gen);
  return x;
}

Vec random_ball_point(const GroupSpec& spec, const Ball& ball, std::mt19937_64& gen) {
  double r = ball.radius;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec local;
  switch (spec.family) {
    case Family::Euclidean:
    case Family::Torus: {
      double rr = spec.family == Family::Torus ? std::min(r, 0.5) : r;
      local = Vec(spec.n);
      for (int i = 0; i < spec.n; ++i) local[i] = (2.0 * u01(gen) - 1.0) * rr;
      break;
    }
    case Family::SU2: {
      double rmax = std::min(r, kPi);
      double t1;
      do {
        t1 = rmax * u01(gen);
      } while (u01(gen) > std::sin(t1) * std::sin(t1));
      double t2 = std::acos(1.0 - 2.0 * u01(gen));
      double phi = 2.0 * kPi * u01(gen);
      local = su2_from_angles(t1, t2, phi);
      break;
    }
    case Family::Heisenberg: {
      int n = spec.n;
      double rc = r / calibrate_gauge(spec);
      local = Vec(2 * n + 1);
      do {
        for (int i = 0; i < 2 * n; ++i) local[i] = (2.0 * u01(gen) - 1.0) * rc;
        local[2 * n] = (2.0 * u01(gen) - 1.0) * rc * rc;
      } while (gauge(spec, local) > r);
      break;
    }
    case Family::UpperTriangular: {
      auto pairs = ut_pairs(spec.n);
      double rc = r / calibrate_gauge(spec);
      local = Vec(static_cast<long>(pairs.size()));
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        double b = std::pow(rc, pairs[k].second - pairs[k].first);
        local[static_cast<long>(k)] = (2.0 * u01(gen) - 1.0) * b;
      }
      break;
    }
  }
  return multiply(spec, canonical(spec, ball.center), canonical(spec, local));
}

}  // namespace hausd
