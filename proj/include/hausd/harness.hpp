#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hausd/expr.hpp"
#include "hausd/hausdorff.hpp"

namespace hausd::harness {

inline constexpr const char* kVersion = "1.0.0";

// exit code 2 (malformed config) as opposed to check failures (exit code 1)
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string id;
  GroupSpec group;
  Kernel kernel;
  AutomorphismFamily family;
  std::optional<expr::Expression> function;  // closed-form f over coordinates
  std::string suite = "all";
  std::uint64_t seed = 42;
  long samples = 100'000;
  int grid_resolution = 24;
  double domain_radius = 4.0;
  std::optional<double> kappa_rho;
  std::map<std::string, double> tolerances;
  std::string echo;  // canonical dump of the raw config

  double tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;  // closed-form / quadrature / monte-carlo (se=...)
  double runtime_ms = 0.0;
};

struct ExperimentReport {
  std::string config_echo;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<CheckRecord> checks;
  std::optional<BoundReport> bound;

  bool all_pass() const;
};

ExperimentReport run(const ExperimentConfig& cfg);

// Canonical serialization: sorted keys, floats as %.12e strings.  Timings
// are excluded unless requested so identical (config, seed) gives identical
// bytes.
void emit_json(const ExperimentReport& rep, std::ostream& os, bool include_timings = false);
void emit_csv(const std::vector<std::pair<ExperimentConfig, ExperimentReport>>& rows,
              std::ostream& os);

// Runs bound + lemma1 for each config and writes the sweep table.
std::vector<std::pair<ExperimentConfig, ExperimentReport>> sweep(
    const std::vector<ExperimentConfig>& configs);

std::string format_sci(double v);

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> details;
  double runtime_ms = 0.0;
};

// The eight acceptance criteria; exit 0 iff all pass.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

}  // namespace hausd::harness
