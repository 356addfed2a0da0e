// hausd: verify / bound / apply / sweep / acceptance front end.
//
// Exit codes: 0 success, 1 check failure, 2 config or usage error.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hausd/harness.hpp"

namespace fs = std::filesystem;
using namespace hausd;
using namespace hausd::harness;

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("HAUSDORFF_THREADS");
  if (!env) return;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (end == env || n < 1) throw ConfigError("HAUSDORFF_THREADS: positive integer expected");
  Eigen::setNbThreads(static_cast<int>(n));
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file: " + path);
  return file;
}

int cmd_verify(const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::string& out_path) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  ExperimentReport rep = run(cfg);
  std::ofstream file;
  emit_json(rep, open_out(out_path, file));
  if (!rep.all_pass()) {
    for (const CheckRecord& c : rep.checks)
      if (!c.pass) std::cerr << "FAIL " << c.name << "\n";
    return 1;
  }
  return 0;
}

int cmd_bound(const std::string& config_path, const std::string& out_path) {
  ExperimentConfig cfg = load_config(config_path);
  ExperimentReport rep;
  rep.config_echo = cfg.echo;
  rep.seed = cfg.seed;
  rep.bound = theorem1_bound(cfg.kernel, cfg.family, RenormConstants::for_group(cfg.group));
  if (cfg.kappa_rho)
    rep.bound->addendum_bound = addendum_bound(cfg.kernel, cfg.family, *cfg.kappa_rho,
                                               rep.bound->consts);
  rep.bound->kappa_rho = cfg.kappa_rho.value_or(1.0);
  std::ofstream file;
  emit_json(rep, open_out(out_path, file));
  return 0;
}

int cmd_apply(const std::string& config_path, const std::string& points_path,
              const std::string& out_path) {
  ExperimentConfig cfg = load_config(config_path);
  if (!cfg.function) throw ConfigError("apply: config needs a 'function' block for f");
  expr::Expression f_expr = *cfg.function;
  ScalarFn f = [f_expr](const Vec& x) { return f_expr(x); };

  std::ifstream in(points_path);
  if (!in) throw ConfigError("cannot open points file: " + points_path);
  int d = cfg.group.coord_dim();
  std::vector<Vec> points;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    Vec x(d);
    std::string cell;
    bool numeric = true;
    for (int i = 0; i < d; ++i) {
      if (!std::getline(row, cell, ',')) throw ConfigError(
          points_path + ":" + std::to_string(lineno) + ": expected " + std::to_string(d) +
          " coordinates");
      try {
        x[i] = std::stod(cell);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (lineno == 1) continue;  // header row
      throw ConfigError(points_path + ":" + std::to_string(lineno) + ": non-numeric cell");
    }
    points.push_back(canonical(cfg.group, x));
  }

  std::ofstream file;
  std::ostream& os = open_out(out_path, file);
  for (int i = 0; i < d; ++i) os << "x" << i + 1 << ",";
  os << "value\n";
  for (const Vec& x : points) {
    double v = evaluate_operator(cfg.kernel, cfg.family, f, x);
    for (int i = 0; i < d; ++i) os << format_sci(x[i]) << ",";
    os << format_sci(v) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& dir, const std::string& out_path) {
  std::vector<fs::path> paths;
  if (!fs::is_directory(dir)) throw ConfigError("sweep: not a directory: " + dir);
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<ExperimentConfig> configs;
  for (const fs::path& p : paths) configs.push_back(load_config(p.string()));
  auto rows = sweep(configs);
  std::ofstream file;
  emit_csv(rows, open_out(out_path, file));
  return 0;
}

int cmd_acceptance(std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<CriterionResult> results = run_acceptance(seed);
  bool all = true;
  for (const CriterionResult& r : results) {
    std::cout << "criterion " << r.index << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name
              << "  (" << static_cast<long>(r.runtime_ms) << " ms)\n";
    for (const std::string& d : r.details)
      if (!r.pass || d.rfind("FAIL", 0) == 0) std::cout << "    " << d << "\n";
    all = all && r.pass;
  }
  double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "  (8 criteria, " << total
            << " s, seed " << seed << ")\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hausdorff operator verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, points_path, dir;
  std::uint64_t seed = 42;
  bool seed_given = false;

  CLI::App* verify = app.add_subcommand("verify", "run an experiment config and emit the report");
  verify->add_option("--config", config_path, "config JSON")->required();
  verify->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  verify->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* bound = app.add_subcommand("bound", "compute the operator norm bound for a config");
  bound->add_option("--config", config_path, "config JSON")->required();
  bound->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* apply = app.add_subcommand("apply", "evaluate the operator at points from a CSV");
  apply->add_option("--config", config_path, "config JSON (must define 'function')")->required();
  apply->add_option("--points", points_path, "input CSV of coordinates")->required();
  apply->add_option("--out", out_path, "output CSV")->required();

  CLI::App* sw = app.add_subcommand("sweep", "run every config in a directory into one CSV");
  sw->add_option("--dir", dir, "directory of config JSON files")->required();
  sw->add_option("--out", out_path, "output CSV")->required();

  CLI::App* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  acc->add_option("--seed", seed, "seed (default 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_thread_cap();
    if (verify->parsed())
      return cmd_verify(config_path,
                        seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt, out_path);
    if (bound->parsed()) return cmd_bound(config_path, out_path);
    if (apply->parsed()) return cmd_apply(config_path, points_path, out_path);
    if (sw->parsed()) return cmd_sweep(dir, out_path);
    if (acc->parsed()) return cmd_acceptance(seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
