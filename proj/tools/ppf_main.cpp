// Command-line front end: validate and run scenarios, pseudo-3D fans,
// per-turbine complex-field extraction, and phase diagnostics.
//
// Exit codes: 0 success, 2 input/validation problems, 3 runtime failures.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppf/fe_model.hpp"
#include "ppf/pe_engine.hpp"
#include "ppf/pseudo3d.hpp"
#include "ppf/scenario_io.hpp"
#include "ppf/turbine.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ppf::ValidationError({"input: cannot open file '" + path + "'"});
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
}

struct EngineFlags {
  std::optional<double> frequency_mhz;
  std::optional<double> antenna_height_m;
  std::optional<std::size_t> transform_size;
  std::optional<double> z_max_m;
  std::optional<double> delta_r_m;
  std::optional<double> absorber_fraction;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--frequency-mhz", frequency_mhz, "Override the file's frequency");
    cmd->add_option("--antenna-height", antenna_height_m, "Override the antenna height in m");
    cmd->add_option("--transform-size", transform_size, "PE transform size (power of two)");
    cmd->add_option("--z-max", z_max_m, "PE transform height in m");
    cmd->add_option("--delta-r", delta_r_m, "PE range step in m");
    cmd->add_option("--absorber-fraction", absorber_fraction,
                    "Absorbing layer fraction in [0, 0.5)");
  }

  // flag > file > default precedence; returns what was overridden
  std::vector<std::string> apply(ppf::Scenario& s) const {
    std::vector<std::string> applied;
    if (frequency_mhz) {
      s.source.frequency_mhz = *frequency_mhz;
      applied.push_back("frequency-mhz");
    }
    if (antenna_height_m) {
      s.source.antenna_height_m = *antenna_height_m;
      applied.push_back("antenna-height");
    }
    if (transform_size) {
      s.pe.transform_size = *transform_size;
      applied.push_back("transform-size");
    }
    if (z_max_m) {
      s.pe.z_max_m = *z_max_m;
      applied.push_back("z-max");
    }
    if (delta_r_m) {
      s.pe.delta_r_m = *delta_r_m;
      applied.push_back("delta-r");
    }
    if (absorber_fraction) {
      s.pe.absorber_fraction = *absorber_fraction;
      applied.push_back("absorber-fraction");
    }
    return applied;
  }
};

ppf::Scenario load_scenario(const std::string& input_path, const EngineFlags& flags,
                            std::vector<std::string>* overrides) {
  ppf::Scenario s = ppf::parse_input_file(read_file(input_path));
  auto applied = flags.apply(s);
  if (overrides) *overrides = std::move(applied);
  ppf::validate_scenario_or_throw(s);
  return s;
}

json base_manifest(const std::string& command, const std::string& digest,
                   const std::vector<std::string>& overrides,
                   const std::vector<std::string>& warnings) {
  json m;
  m["command"] = command;
  m["scenario_digest"] = digest;
  m["overrides"] = overrides;
  m["warnings"] = warnings;
  m["metadata"] = {{"magnitude_floor", ppf::kMagnitudeFloor},
                   {"ppf_db", "20*log10|u| + 10*log10(r)"},
                   {"rlog_units", "meters"},
                   {"phase_branch", "(-pi, pi]"}};
  return m;
}

void finish_manifest(json& m, const fs::path& out_dir, std::vector<std::string> files) {
  files.push_back("manifest.json");
  m["files"] = files;
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

int cmd_run(const std::string& input, const std::string& model, const std::string& out,
            const EngineFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> overrides;
  const ppf::Scenario scenario = load_scenario(input, flags, &overrides);
  fs::create_directories(out);

  ppf::PpfResult ppf_result;
  std::vector<std::string> warnings;
  if (model == "fe") {
    auto r = ppf::run_fe(scenario);
    ppf_result = std::move(r.ppf);
    warnings = std::move(r.warnings);
  } else {
    auto r = ppf::run_pe(scenario);
    ppf_result = std::move(r.ppf);
    warnings = std::move(r.warnings);
  }

  const fs::path dir(out);
  write_file(dir / "propagation.out", ppf::write_output_file(ppf_result));
  write_file(dir / "amplitude.grid.txt",
             ppf::format_plot_grid(ppf_result.heights_m, ppf_result.ranges_m,
                                   ppf_result.amplitude_db, "amplitude_db"));
  write_file(dir / "phase.grid.txt",
             ppf::format_plot_grid(ppf_result.heights_m, ppf_result.ranges_m,
                                   ppf_result.phase_rad, "phase_rad"));

  json m = base_manifest("run", ppf_result.scenario_digest, overrides, warnings);
  m["model"] = model;
  finish_manifest(m, dir, {"propagation.out", "amplitude.grid.txt", "phase.grid.txt"});

  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "run complete: model " << model << ", digest " << ppf_result.scenario_digest
            << ", " << ppf_result.ranges_m.size() << " x " << ppf_result.heights_m.size()
            << " grid, " << ms << " ms\n";
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& input, const EngineFlags& flags) {
  std::vector<std::string> overrides;
  const ppf::Scenario s = load_scenario(input, flags, &overrides);
  ppf::resolve_pe_config(s);  // engine-level checks too
  std::cout << "scenario valid, digest " << ppf::scenario_digest(s) << "\n";
  return kExitOk;
}

int cmd_volume(const std::string& input, const std::string& grid_path,
               const std::string& azimuths_csv, double origin_x, double origin_y,
               double range_step, const std::string& out, const EngineFlags& flags) {
  std::vector<std::string> overrides;
  const ppf::Scenario scenario = load_scenario(input, flags, &overrides);
  const ppf::ElevationGrid grid = ppf::read_elevation_grid(read_file(grid_path));

  ppf::AzimuthFan fan;
  fan.origin_x_m = origin_x;
  fan.origin_y_m = origin_y;
  fan.max_range_m = scenario.output.max_range_m();
  fan.range_step_m = range_step > 0.0 ? range_step : grid.cell_size_m;
  {
    std::istringstream is(azimuths_csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        const double az = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        fan.azimuths_deg.push_back(az);
      } catch (const std::exception&) {
        throw ppf::ValidationError({"fan: cannot parse azimuth '" + tok + "'"});
      }
    }
  }
  if (fan.azimuths_deg.empty())
    throw ppf::ValidationError({"fan: --azimuths must list at least one azimuth"});

  const ppf::VolumeResult volume = ppf::run_volume(scenario, grid, fan);
  for (const auto& e : volume.errors) std::cout << "warning: " << e << "\n";
  if (volume.slices.empty()) {
    std::cerr << "error: every azimuth failed\n";
    return kExitRuntime;
  }
  const auto files = ppf::export_volume(volume, out, ppf::scenario_digest(scenario));
  std::cout << "volume complete: " << volume.slices.size() << " slice(s), "
            << files.size() << " file(s)" << (volume.partial() ? ", partial" : "") << "\n";
  return kExitOk;
}

int cmd_extract_turbines(const std::string& input, const std::string& table_path,
                         const ppf::TurbineSpec& spec, double rpm, double margin_below,
                         double margin_above, double step, const std::string& out,
                         const EngineFlags& flags) {
  std::vector<std::string> overrides;
  const ppf::Scenario scenario = load_scenario(input, flags, &overrides);
  const auto turbines = ppf::parse_turbine_table(read_file(table_path));

  {
    std::set<std::string> seen;
    for (const auto& t : turbines)
      if (!seen.insert(t.id).second)
        throw ppf::ValidationError({"turbine table: duplicate id '" + t.id + "'"});
  }

  fs::create_directories(out);
  const fs::path dir(out);

  std::vector<std::string> warnings;
  const double eval_rpm = rpm > 0.0 ? rpm : spec.rpm_nominal;
  const double tip = ppf::blade_tip_speed(spec, eval_rpm, &warnings);

  std::vector<std::string> files;
  std::vector<std::string> failed;
  std::ostringstream summary;
  summary << "turbine extraction summary\n";
  summary << "rotor diameter " << spec.rotor_diameter_m << " m, hub height "
          << spec.hub_height_m << " m, " << spec.n_blades << " blades\n";
  summary << "tip speed at " << eval_rpm << " rpm: " << tip << " m/s ("
          << tip * 3.6 << " km/h)\n";

  if (!turbines.empty()) {
    const auto rr = ppf::run_pe(scenario);
    const auto window = ppf::extraction_window(spec, margin_below, margin_above, step);
    summary << "window: " << window.size() << " samples, " << window.front() << " m to "
            << window.back() << " m about the nacelle\n\n";
    summary << "id distance_m azimuth_deg status\n";
    int ordinal = 0;
    for (const auto& t : turbines) {
      ++ordinal;
      try {
        const auto column =
            ppf::field_column_at_turbine(rr.grid, t, spec, window, scenario.terrain);
        const std::string name = t.id + ".field.txt";
        write_file(dir / name, ppf::write_complex_field_export(window, column, ordinal));
        files.push_back(name);
        summary << t.id << " " << t.distance_m << " " << t.azimuth_deg << " " << name << "\n";
      } catch (const std::exception& e) {
        failed.push_back(t.id);
        summary << t.id << " " << t.distance_m << " " << t.azimuth_deg << " FAILED: " << e.what()
                << "\n";
      }
    }
  }

  write_file(dir / "turbines_summary.txt", summary.str());
  files.push_back("turbines_summary.txt");

  json m = base_manifest("extract-turbines", ppf::scenario_digest(scenario), overrides,
                         warnings);
  m["turbine_count"] = turbines.size();
  m["failed_turbines"] = failed;
  m["tip_speed_m_s"] = tip;
  finish_manifest(m, dir, files);

  std::cout << "extract-turbines complete: " << (turbines.size() - failed.size()) << " of "
            << turbines.size() << " columns exported\n";
  for (const auto& f : failed) std::cout << "warning: turbine " << f << " not exported\n";
  return kExitOk;
}

int cmd_phase_report(const std::string& input, double threshold_db, bool unwrap,
                     const std::string& out, const EngineFlags& flags) {
  std::vector<std::string> overrides;
  const ppf::Scenario scenario = load_scenario(input, flags, &overrides);
  fs::create_directories(out);
  const fs::path dir(out);

  const auto rr = ppf::run_pe(scenario);
  const auto defects = ppf::phase_continuity_report(rr.ppf, threshold_db);

  std::ostringstream os;
  os << "phase continuity report (threshold " << threshold_db << " dB)\n";
  os << defects.size() << " vertical jump(s) above pi\n";
  for (const auto& d : defects)
    os << "range " << rr.ppf.ranges_m[d.range_index] << " m, heights "
       << rr.ppf.heights_m[d.height_index] << ".." << rr.ppf.heights_m[d.height_index + 1]
       << " m: jump " << d.jump_rad << " rad\n";
  write_file(dir / "phase_report.txt", os.str());

  std::vector<std::string> files{"phase_report.txt"};
  if (unwrap) {
    const ppf::Grid unwrapped = ppf::unwrap_phase_columns(rr.ppf.phase_rad);
    write_file(dir / "phase_unwrapped.grid.txt",
               ppf::format_plot_grid(rr.ppf.heights_m, rr.ppf.ranges_m, unwrapped,
                                     "phase_rad_unwrapped"));
    files.push_back("phase_unwrapped.grid.txt");
  }

  json m = base_manifest("phase-report", rr.ppf.scenario_digest, overrides, rr.warnings);
  m["defect_count"] = defects.size();
  m["null_threshold_db"] = threshold_db;
  finish_manifest(m, dir, files);

  std::cout << "phase report complete: " << defects.size() << " defect(s)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppf — split-step parabolic-equation terrain propagation engine with "
               "complex pattern propagation factor output"};
  app.require_subcommand(1);

  std::string input, out = "ppf_out", model = "pe";
  EngineFlags flags;

  auto* run = app.add_subcommand("run", "Run one 2D scenario and write PPF products");
  run->add_option("--input", input, "Scenario input file")->required();
  run->add_option("--model", model, "Propagation model")
      ->check(CLI::IsMember({"pe", "fe"}));
  run->add_option("--out", out, "Output directory");
  flags.add_to(run);

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("--input", input, "Scenario input file")->required();
  flags.add_to(validate);

  std::string grid_path, azimuths;
  double origin_x = 0.0, origin_y = 0.0, range_step = 0.0;
  auto* volume = app.add_subcommand("volume", "Run a pseudo-3D azimuth fan over an "
                                              "elevation grid");
  volume->add_option("--input", input, "Scenario input file")->required();
  volume->add_option("--grid", grid_path, "ASCII elevation grid")->required();
  volume->add_option("--azimuths", azimuths, "Comma-separated azimuths in degrees")->required();
  volume->add_option("--origin-x", origin_x, "Radar x in grid coordinates (m)")->required();
  volume->add_option("--origin-y", origin_y, "Radar y in grid coordinates (m)")->required();
  volume->add_option("--range-step", range_step,
                     "Terrain sampling step in m (default: one grid cell)");
  volume->add_option("--out", out, "Output directory");
  flags.add_to(volume);

  std::string table_path;
  ppf::TurbineSpec spec{66.0, 67.0, 21.3, 10.5, 24.5, 3};
  double rpm = 0.0, margin_below = 0.0, margin_above = 1.0, step = 0.1;
  auto* extract = app.add_subcommand("extract-turbines",
                                     "Export per-turbine complex-field columns");
  extract->add_option("--input", input, "Scenario input file")->required();
  extract->add_option("--turbines", table_path, "Turbine table (id distance_m azimuth_deg)")
      ->required();
  extract->add_option("--out", out, "Output directory");
  extract->add_option("--rotor-diameter", spec.rotor_diameter_m, "Rotor diameter in m");
  extract->add_option("--hub-height", spec.hub_height_m, "Hub height in m");
  extract->add_option("--rpm-nominal", spec.rpm_nominal, "Nominal revolution speed");
  extract->add_option("--rpm-min", spec.rpm_min, "Lower operational rpm");
  extract->add_option("--rpm-max", spec.rpm_max, "Upper operational rpm");
  extract->add_option("--n-blades", spec.n_blades, "Number of blades");
  extract->add_option("--rpm", rpm, "Evaluation rpm for the tip-speed report");
  extract->add_option("--margin-below", margin_below, "Window margin below the tower base (m)");
  extract->add_option("--margin-above", margin_above, "Window margin above the rotor tip (m)");
  extract->add_option("--step", step, "Window height step (m)");
  flags.add_to(extract);

  double threshold_db = -40.0;
  bool unwrap = false;
  auto* phase = app.add_subcommand("phase-report", "Detect phase jumps along height");
  phase->add_option("--input", input, "Scenario input file")->required();
  phase->add_option("--threshold-db", threshold_db, "Null threshold in dB");
  phase->add_flag("--unwrap", unwrap, "Also write the unwrapped phase grid");
  phase->add_option("--out", out, "Output directory");
  flags.add_to(phase);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (run->parsed()) return cmd_run(input, model, out, flags);
    if (validate->parsed()) return cmd_validate(input, flags);
    if (volume->parsed())
      return cmd_volume(input, grid_path, azimuths, origin_x, origin_y, range_step, out, flags);
    if (extract->parsed())
      return cmd_extract_turbines(input, table_path, spec, rpm, margin_below, margin_above,
                                  step, out, flags);
    if (phase->parsed()) return cmd_phase_report(input, threshold_db, unwrap, out, flags);
  } catch (const ppf::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ppf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
