#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bishopdisc/io.hpp"
#include "bishopdisc/report.hpp"

namespace bishopdisc {

/// Extra files (name → JSON) produced next to a report, e.g. chart exports.
/// Written with full double precision, outside the report itself.
using Artifacts = std::map<std::string, json>;

struct ScenarioConfig {
  json raw = json::object();
  std::filesystem::path base_dir = ".";
  std::string id;
  std::uint64_t seed = 1;
  int n_theta = 64;
  int n_r = 24;
  int jobs = 1;
  std::optional<double> tol_boundary;
  std::optional<double> tol_interior;

  static ScenarioConfig from_json(const json& j, const std::filesystem::path& base_dir = ".");
  static ScenarioConfig load(const std::filesystem::path& path);

  /// An inline descriptor, or a path (relative to the scenario file) to one.
  json descriptor(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  /// Configuration echoed into the report: the raw file plus effective overrides.
  json echo() const;
};

/// Containment of Bishop discs in a Levi-flat hypersurface, or (expect =
/// "excursion") the failure of containment for a negative control.
ScenarioReport run_levi_flat(const ScenarioConfig& cfg, Artifacts* artifacts = nullptr);
/// Anisotropically dilated family near the limit discs: attachment ranks,
/// residuals and δ → 0 convergence to the j0_disc family.
ScenarioReport run_sweep(const ScenarioConfig& cfg, Artifacts* artifacts = nullptr);
/// Structure-distance rates under isotropic and anisotropic dilations.
ScenarioReport run_convergence(const ScenarioConfig& cfg, Artifacts* artifacts = nullptr);
/// Disc chart over a grid of (w, c) parameters.
ScenarioReport run_chart(const ScenarioConfig& cfg, Artifacts* artifacts = nullptr);

ScenarioReport run_scenario(const ScenarioConfig& cfg, Artifacts* artifacts = nullptr);

/// Writes each artifact as <dir>/<stem>_<name>.json.
std::vector<std::filesystem::path> export_artifacts(const Artifacts& a, const std::filesystem::path& dir,
                                                    const std::string& stem = "report");

}  // namespace bishopdisc
