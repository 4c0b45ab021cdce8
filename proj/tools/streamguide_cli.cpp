#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "streamguide/report.hpp"
#include "streamguide/scenario.hpp"
#include "streamguide/simulator.hpp"

namespace fs = std::filesystem;
using namespace streamguide;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

Scenario resolve(const std::string& ref) {
  if (const Scenario* sc = find_builtin(ref)) return *sc;
  if (!fs::exists(ref)) {
    throw ConfigError("no bundled scenario or file named '" + ref + "'");
  }
  return load_scenario_file(ref);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string step_name(const char* stem, std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_k%03zu.%s", stem, k, ext);
  return buf;
}

int cmd_run(const std::string& ref, const std::string& out_dir, bool plots, bool field) {
  Scenario sc;
  try {
    sc = resolve(ref);
    std::vector<std::string> notes;
    prepare(sc, &notes);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const RunTrace trace = run(sc);
  const fs::path dir = out_dir.empty() ? fs::path("out") / trace.scenario.name : fs::path(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv", std::ios::binary);
    write_trace_csv(csv, trace);
  }
  {
    std::ofstream csv(dir / "segments.csv", std::ios::binary);
    write_segments_csv(csv, trace);
  }
  write_file(dir / "summary.json", summary_json(trace));
  write_file(dir / "planning.json", planning_json(trace));
  if (field) {
    for (std::size_t k = 0; k < trace.planning.size(); ++k) {
      std::ofstream csv(dir / step_name("field", k, "csv"), std::ios::binary);
      write_field_csv(csv, planning_field(trace, k));
    }
  }
  if (plots) {
    for (std::size_t k = 0; k < trace.planning.size(); ++k) {
      write_file(dir / step_name("snapshot", k, "svg"), snapshot_svg(trace, k));
    }
    write_file(dir / "trajectory.svg", trajectory_svg(trace));
  }

  std::cout << trace.scenario.name << ": " << to_string(trace.outcome);
  if (trace.outcome == Outcome::reached) std::cout << " at t = " << trace.arrival_time << " s";
  std::cout << ", " << trace.waypoints.size() << " waypoints, output in " << dir.string() << '\n';
  if (trace.outcome == Outcome::fault) {
    std::cerr << "simulation fault: " << trace.fault << '\n';
    return kExitFault;
  }
  return kExitOk;
}

int cmd_list() {
  for (const Scenario& sc : builtin_scenarios()) {
    std::cout << sc.name << "  (" << sc.workspace.obstacles.size() << " obstacles)  "
              << sc.description << '\n';
  }
  return kExitOk;
}

int cmd_validate(const std::string& ref) {
  try {
    const Scenario sc = resolve(ref);
    std::vector<std::string> notes;
    prepare(sc, &notes);
    for (const std::string& n : notes) std::cout << "note: " << n << '\n';
    std::cout << "ok\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_export(const std::string& name, const std::string& out) {
  const Scenario* sc = find_builtin(name);
  if (!sc) {
    std::cerr << "config error: unknown bundled scenario '" << name << "'\n";
    return kExitConfig;
  }
  if (out.empty()) {
    std::cout << serialize_scenario(*sc);
  } else {
    write_file(out, serialize_scenario(*sc));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream-function guidance and path following for marine vessels"};
  app.require_subcommand(1);

  std::string run_ref, run_out;
  bool plots = false, field = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate a bundled scenario or a scenario file");
  run_cmd->add_option("scenario", run_ref, "Bundled name or path to a JSON file")->required();
  run_cmd->add_option("--out", run_out, "Output directory (default out/<name>)");
  run_cmd->add_flag("--plots", plots, "Write SVG plots");
  run_cmd->add_flag("--field", field, "Write the stream function grid of each planning step");

  app.add_subcommand("list", "List the bundled scenarios");

  std::string validate_ref;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
  validate_cmd->add_option("scenario", validate_ref, "Bundled name or path")->required();

  std::string export_name, export_out;
  auto* export_cmd = app.add_subcommand("export", "Print a bundled scenario as JSON");
  export_cmd->add_option("name", export_name, "Bundled scenario name")->required();
  export_cmd->add_option("--out", export_out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_ref, run_out, plots, field);
    if (*validate_cmd) return cmd_validate(validate_ref);
    if (*export_cmd) return cmd_export(export_name, export_out);
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFault;
  }
}
