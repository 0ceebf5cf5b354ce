#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bishopdisc/io.hpp"

namespace bishopdisc {

/// A PASS/FAIL decision together with the quantity and threshold behind it.
struct Verdict {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", ">", "within", "=="
  double threshold = 0.0;
  double upper = 0.0;    // used by "within"
  bool pass = false;

  static Verdict at_most(std::string name, double measured, double threshold);
  static Verdict at_least(std::string name, double measured, double threshold);
  static Verdict exceeds(std::string name, double measured, double threshold);
  static Verdict within(std::string name, double measured, double lo, double hi);
  static Verdict equals(std::string name, double measured, double expected);

  json to_json() const;
  static Verdict from_json(const json& j);
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed = 0;
  json config = json::object();
  json members = json::array();
  json aggregates = json::object();
  std::vector<Verdict> verdicts;
  json failures = json::array();
  double wall_seconds = 0.0;  // kept out of the JSON report

  bool passed() const;
  json to_json() const;
  static ScenarioReport from_json(const json& j);
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares line through (log x, log y), skipping non-positive values.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// One row per member, scalar fields only; arrays are flattened as key[i].
std::string members_csv(const json& members);

struct LogLogSeries {
  std::string name;
  std::vector<double> x, y;
  bool has_fit = false;
  LogLogFit fit;
};

std::string svg_loglog(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<LogLogSeries>& series);
/// log10-colored heatmap, row-major values.
std::string svg_heatmap(const std::string& title, int rows, int cols, const std::vector<double>& values);

/// Writes <stem>.json, <stem>.csv and the scenario's SVG plots into dir.
/// Returns the written paths.
std::vector<std::filesystem::path> export_report(const ScenarioReport& r, const std::filesystem::path& dir,
                                                 const std::string& stem = "report");
std::vector<std::filesystem::path> export_plots(const ScenarioReport& r, const std::filesystem::path& dir,
                                                const std::string& stem = "report");
/// <stem>.timing.json next to the report.
std::filesystem::path export_timing(const ScenarioReport& r, const std::filesystem::path& dir,
                                    const std::string& stem = "report");

}  // namespace bishopdisc
