#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "hausd/harness.hpp"

namespace hausd::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": object expected");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

GroupSpec parse_group(const json& j) {
  check_keys(j, {"family", "n"}, "group");
  if (!j.contains("family")) throw ConfigError("group: missing 'family'");
  std::string fam = j.at("family").get<std::string>();
  int n = j.value("n", 1);
  try {
    if (fam == "euclidean") return GroupSpec::euclidean(n);
    if (fam == "torus") return GroupSpec::torus(n);
    if (fam == "su2") return GroupSpec::su2();
    if (fam == "heisenberg") return GroupSpec::heisenberg(n);
    if (fam == "upper_triangular") return GroupSpec::upper_triangular(n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("group: ") + e.what());
  }
  throw ConfigError("group: unknown family '" + fam + "'");
}

expr::Expression parse_expr(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expression string expected");
  try {
    return expr::Expression::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Kernel parse_kernel(const json& j) {
  check_keys(j, {"expr", "support", "resolution"}, "kernel");
  if (!j.contains("expr") || !j.contains("support"))
    throw ConfigError("kernel: 'expr' and 'support' are required");
  Kernel k;
  expr::Expression e = parse_expr(j.at("expr"), "kernel.expr");
  k.phi = e;
  k.phi_text = e.text();
  const json& sup = j.at("support");
  if (!sup.is_array() || sup.empty()) throw ConfigError("kernel.support: list of [lo,hi] expected");
  k.lo = Vec(sup.size());
  k.hi = Vec(sup.size());
  for (std::size_t i = 0; i < sup.size(); ++i) {
    if (!sup[i].is_array() || sup[i].size() != 2)
      throw ConfigError("kernel.support: each entry must be [lo, hi]");
    k.lo[static_cast<long>(i)] = sup[i][0].get<double>();
    k.hi[static_cast<long>(i)] = sup[i][1].get<double>();
    if (!(k.hi[static_cast<long>(i)] > k.lo[static_cast<long>(i)]))
      throw ConfigError("kernel.support: hi must exceed lo");
  }
  k.resolution = j.value("resolution", 256);
  if (k.resolution < 1) throw ConfigError("kernel.resolution: must be positive");
  return k;
}

AutomorphismFamily parse_family(const json& j, const GroupSpec& group) {
  if (!j.contains("kind")) throw ConfigError("family: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  AutomorphismFamily fam;
  fam.group = group;

  if (kind == "identity") {
    check_keys(j, {"kind"}, "family");
    AutomorphismSpec id = identity_automorphism(group);
    fam.at = [id](const Vec&) { return id; };
    return fam;
  }
  if (kind == "dilation") {
    check_keys(j, {"kind", "lambda"}, "family");
    if (group.family != Family::Heisenberg && group.family != Family::UpperTriangular)
      throw ConfigError("family: dilations need a homogeneous group");
    if (!j.contains("lambda")) throw ConfigError("family: dilation needs 'lambda'");
    expr::Expression lam = parse_expr(j.at("lambda"), "family.lambda");
    fam.at = [group, lam](const Vec& u) { return dilation_automorphism(group, lam(u)); };
    return fam;
  }
  if (kind == "matrix" || kind == "symplectic") {
    check_keys(j, {"kind", "entries"}, "family");
    if (!j.contains("entries")) throw ConfigError("family: missing 'entries'");
    const json& rows = j.at("entries");
    std::vector<std::vector<expr::Expression>> entries;
    for (const json& row : rows) {
      entries.emplace_back();
      for (const json& cell : row) entries.back().push_back(parse_expr(cell, "family.entries"));
    }
    std::size_t dim = entries.size();
    for (const auto& row : entries)
      if (row.size() != dim) throw ConfigError("family.entries: square matrix expected");
    bool symplectic = kind == "symplectic";
    fam.at = [group, entries, dim, symplectic](const Vec& u) {
      Eigen::MatrixXd m(dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t c = 0; c < dim; ++c)
          m(static_cast<long>(i), static_cast<long>(c)) = entries[i][c](u);
      return symplectic ? symplectic_automorphism(group, m) : euclidean_automorphism(group, m);
    };
    return fam;
  }
  if (kind == "torus_matrix") {
    check_keys(j, {"kind", "entries"}, "family");
    if (group.family != Family::Torus) throw ConfigError("family: torus_matrix needs a torus group");
    Eigen::MatrixXi m(group.n, group.n);
    const json& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != group.n)
      throw ConfigError("family.entries: n x n integer matrix expected");
    for (int r = 0; r < group.n; ++r)
      for (int c = 0; c < group.n; ++c) m(r, c) = rows[r][c].get<int>();
    AutomorphismSpec a = torus_automorphism(group, m);
    fam.at = [a](const Vec&) { return a; };
    return fam;
  }
  if (kind == "torus_two_branch") {
    check_keys(j, {"kind", "split"}, "family");
    if (group.family != Family::Torus || group.n != 1)
      throw ConfigError("family: torus_two_branch needs the 1-torus");
    double split = j.value("split", 0.5);
    AutomorphismSpec ident = identity_automorphism(group);
    AutomorphismSpec refl =
        torus_automorphism(group, -Eigen::MatrixXi::Identity(1, 1));
    fam.at = [split, ident, refl](const Vec& u) { return u[0] < split ? refl : ident; };
    return fam;
  }
  if (kind == "su2_conjugation") {
    check_keys(j, {"kind", "quat"}, "family");
    if (group.family != Family::SU2) throw ConfigError("family: su2_conjugation needs SU2");
    const json& q = j.at("quat");
    if (!q.is_array() || q.size() != 4)
      throw ConfigError("family.quat: four component expressions expected");
    std::vector<expr::Expression> comps;
    for (const json& c : q) comps.push_back(parse_expr(c, "family.quat"));
    fam.at = [comps](const Vec& u) {
      Vec quat(4);
      for (int i = 0; i < 4; ++i) quat[i] = comps[static_cast<std::size_t>(i)](u);
      return su2_inner_automorphism(quat);
    };
    return fam;
  }
  throw ConfigError("family: unknown kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"version", "id", "group", "kernel", "family", "function", "suite", "seed", "samples",
              "grid_resolution", "domain_radius", "kappa_rho", "tolerances"},
             "config");
  if (j.value("version", 1) != 1) throw ConfigError("config: unsupported version");
  if (!j.contains("group")) throw ConfigError("config: missing 'group'");

  ExperimentConfig cfg;
  cfg.id = j.value("id", std::string{});
  cfg.group = parse_group(j.at("group"));
  if (j.contains("kernel")) {
    cfg.kernel = parse_kernel(j.at("kernel"));
  } else {
    // default kernel: Phi = 1 on [1,2]
    expr::Expression one = expr::Expression::parse("1");
    cfg.kernel = {one, "1", Vec::Constant(1, 1.0), Vec::Constant(1, 2.0), 256};
  }
  if (j.contains("family"))
    cfg.family = parse_family(j.at("family"), cfg.group);
  else
    cfg.family = parse_family(json{{"kind", "identity"}}, cfg.group);
  if (j.contains("function")) {
    const json& f = j.at("function");
    check_keys(f, {"expr"}, "function");
    if (!f.contains("expr")) throw ConfigError("function: missing 'expr'");
    cfg.function = parse_expr(f.at("expr"), "function.expr");
  }
  cfg.suite = j.value("suite", std::string{"all"});
  static const std::set<std::string> suites = {"doubling", "star",   "lemma1",          "lemma4",
                                              "theorem1", "modulus", "torus_structure", "su2_isometry",
                                              "struble",  "all",     "none"};
  if (!suites.count(cfg.suite)) throw ConfigError("config: unknown suite '" + cfg.suite + "'");
  cfg.seed = j.value("seed", std::uint64_t{42});
  cfg.samples = j.value("samples", 100'000L);
  if (cfg.samples < 1) throw ConfigError("config: samples must be positive");
  cfg.grid_resolution = j.value("grid_resolution", 24);
  if (cfg.grid_resolution < 1) throw ConfigError("config: grid_resolution must be positive");
  cfg.domain_radius = j.value("domain_radius", 4.0);
  if (!(cfg.domain_radius > 0.0)) throw ConfigError("config: domain_radius must be positive");
  if (j.contains("kappa_rho")) cfg.kappa_rho = j.at("kappa_rho").get<double>();
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: object expected");
    for (auto it = t.begin(); it != t.end(); ++it)
      cfg.tolerances[it.key()] = it.value().get<double>();
  }
  cfg.echo = j.dump();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace hausd::harness
