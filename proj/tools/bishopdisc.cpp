#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"

#include "bishopdisc/io.hpp"
#include "bishopdisc/log.hpp"
#include "bishopdisc/report.hpp"
#include "bishopdisc/scenarios.hpp"
#include "bishopdisc/structure.hpp"

using namespace bishopdisc;

namespace {

struct Flags {
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string grid;
  int jobs = 1;
  std::optional<double> tol_boundary;
  std::optional<double> tol_interior;
};

void print_verdicts(const ScenarioReport& r) {
  for (const auto& v : r.verdicts) {
    std::printf("%s %s: measured %.6e %s %.6e", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.measured,
                v.relation.c_str(), v.threshold);
    if (v.relation == "within") std::printf(" .. %.6e", v.upper);
    std::printf("\n");
  }
  for (const auto& f : r.failures)
    std::printf("member %d failed: %s\n", f.at("index").get<int>(), f.at("message").get<std::string>().c_str());
}

int run(const std::string& path, const Flags& fl, const std::string& required) {
  auto cfg = ScenarioConfig::load(path);
  if (!required.empty() && cfg.id != required)
    throw Error("'" + path + "' is a '" + cfg.id + "' scenario, expected '" + required + "'");
  if (fl.seed) cfg.seed = *fl.seed;
  if (!fl.grid.empty()) {
    std::smatch m;
    if (!std::regex_match(fl.grid, m, std::regex("(\\d+)x(\\d+)"))) throw Error("--grid expects NthetaxNr, e.g. 128x48");
    cfg.n_theta = std::stoi(m[1]);
    cfg.n_r = std::stoi(m[2]);
  }
  cfg.jobs = fl.jobs;
  if (fl.tol_boundary) cfg.tol_boundary = fl.tol_boundary;
  if (fl.tol_interior) cfg.tol_interior = fl.tol_interior;
  Artifacts artifacts;
  const auto rep = run_scenario(cfg, &artifacts);
  const std::string stem = std::filesystem::path(path).stem().string();
  for (const auto& p : export_report(rep, fl.out, stem)) log_info("wrote ", p.string());
  for (const auto& p : export_artifacts(artifacts, fl.out, stem)) log_info("wrote ", p.string());
  export_timing(rep, fl.out, stem);
  print_verdicts(rep);
  std::printf("%s: %s (%.2f s)\n", stem.c_str(), rep.passed() ? "PASS" : "FAIL", rep.wall_seconds);
  return rep.passed() ? 0 : 1;
}

int validate(const std::string& path, const Flags& fl) {
  const auto j = structure_from_json(read_json_file(path));
  const double radius = std::min(1.0, j.domain_radius());
  const auto v = validate_structure(j, unit_ball_grid(j.dim_complex(), 5, radius));
  json rep = {{"structure", j.name()},
              {"n", j.dim_complex()},
              {"max_deviation", v.max_deviation},
              {"tolerance", v.tolerance},
              {"ok", v.ok}};
  if (v.worst_point) rep["worst_point"] = std::vector<double>(v.worst_point->data(), v.worst_point->data() + v.worst_point->size());
  if (v.failure) rep["failure"] = *v.failure;
  const auto out = std::filesystem::path(fl.out) / (std::filesystem::path(path).stem().string() + ".validation.json");
  write_text_file(out, dump_report(rep));
  std::printf("%s J^2 + Id: max deviation %.6e, tolerance %.1e\n", v.ok ? "PASS" : "FAIL", v.max_deviation,
              v.tolerance);
  if (v.failure) std::printf("%s\n", v.failure->c_str());
  return v.ok ? 0 : 1;
}

int plot(const std::string& path, const Flags& fl) {
  const auto rep = ScenarioReport::from_json(read_json_file(path));
  const auto files = export_plots(rep, fl.out, std::filesystem::path(path).stem().string());
  for (const auto& p : files) std::printf("wrote %s\n", p.string().c_str());
  if (files.empty()) std::printf("no plots for scenario '%s'\n", rep.scenario.c_str());
  print_verdicts(rep);
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudoholomorphic Bishop discs: scenario runner"};
  app.require_subcommand(1);
  Flags fl;
  std::string input;
  app.add_option("--out", fl.out, "output directory")->capture_default_str();
  app.add_option("--seed", fl.seed, "random seed (overrides the scenario)");
  app.add_option("--grid", fl.grid, "disc grid NthetaxNr, e.g. 64x24");
  app.add_option("--jobs", fl.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol-boundary", fl.tol_boundary, "boundary residual tolerance");
  app.add_option("--tol-interior", fl.tol_interior, "interior J-holomorphy residual tolerance");

  auto* run_cmd = app.add_subcommand("run", "run a scenario file")->fallthrough();
  run_cmd->add_option("scenario", input, "scenario JSON")->required()->check(CLI::ExistingFile);
  auto* val_cmd = app.add_subcommand("validate", "check J^2 = -Id for a structure descriptor")->fallthrough();
  val_cmd->add_option("structure", input, "structure JSON")->required()->check(CLI::ExistingFile);
  auto* chart_cmd = app.add_subcommand("chart", "solve a disc chart")->fallthrough();
  chart_cmd->add_option("config", input, "chart scenario JSON")->required()->check(CLI::ExistingFile);
  auto* plot_cmd = app.add_subcommand("plot", "regenerate plots from a report")->fallthrough();
  plot_cmd->add_option("report", input, "report JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(input, fl, "");
    if (*chart_cmd) return run(input, fl, "chart");
    if (*val_cmd) return validate(input, fl);
    if (*plot_cmd) return plot(input, fl);
  } catch (const std::exception& e) {
    log_at(0, e.what());
    return 2;
  }
  return 2;
}
