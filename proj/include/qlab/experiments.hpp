#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlab/beltrami.hpp"
#include "qlab/core.hpp"

namespace qlab {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerdictReport {
  std::string scenario;
  std::vector<Check> checks;
  bool overall = true;
  double runtime_seconds = 0.0;
  nlohmann::json provenance = nlohmann::json::object();
  /// Per-stage measurements that are not verdicts (slopes, tables).
  nlohmann::json details = nlohmann::json::object();

  void add(const std::string& name, double value, double threshold, bool pass);
  nlohmann::json to_json() const;
};

/// Scenario parameters: the defaults for `scenario` with user overrides
/// merged on top (JSON merge patch).
struct ScenarioConfig {
  std::string scenario;
  nlohmann::json params;

  static ScenarioConfig defaults(const std::string& scenario);
  static ScenarioConfig with_overrides(const std::string& scenario, const nlohmann::json& overrides);
  /// Reads a JSON object; its "scenario" field (or `fallback`) picks the defaults.
  static ScenarioConfig load(const std::filesystem::path& path, const std::string& fallback = "");
  std::string hash() const;
};

VerdictReport run_theorem_a(const ScenarioConfig& config);
VerdictReport run_theorem_b(const ScenarioConfig& config);
VerdictReport run_corollary(const ScenarioConfig& config);
VerdictReport run_scenario(const ScenarioConfig& config);

/// Grid from {"half": a, "n": n}: n x n nodes on [-a, a]^2.
Grid grid_from_json(const nlohmann::json& spec);

/// |mu| = k min(1, (y/y_scale)^exponent) with smooth cutoffs in |x| and y,
/// on the upper (side = +1) or lower (side = -1) half-plane.
GridField band_bump_mu(const Grid& grid, const nlohmann::json& spec);

}  // namespace qlab
