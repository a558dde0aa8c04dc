#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppf/environment.hpp"
#include "ppf/types.hpp"

namespace ppf {

/// Engine tuning knobs not carried by the input file; set from CLI flags.
/// Unset fields are resolved to defaults from the scenario.
struct PeOverrides {
  std::optional<std::size_t> transform_size;
  std::optional<double> z_max_m;
  std::optional<double> delta_r_m;
  std::optional<double> absorber_fraction;
};

/// Full run configuration as read from the line-ordered input file.
struct Scenario {
  SourceSpec source;
  OutputWindow output;
  int extrapolation_flag = 0;
  Atmosphere atmosphere;
  RefractivityField refractivity;
  TerrainProfile terrain;
  PeOverrides pe;
};

/// Parses the line-ordered "value :comment" input file. Field order is fixed;
/// errors carry the offending line number and field name. Antenna types 5/6
/// (height-finder) are rejected as unsupported.
Scenario parse_input_file(const std::string& text);

/// Canonical writer; parse(write(s)) reconstructs s exactly and
/// write(parse(write(s))) is byte-identical. All profiles must share one
/// level count (a constraint of the file format).
std::string write_input_file(const Scenario& scenario);

/// Loss / propagation-factor report: banner, then one block per range with
/// "Height(m) Loss(dB) PFac(dB)" lines at two decimals.
std::string write_output_file(const PpfResult& result);

/// Height-indexed complex-field column for the downstream RCS tool.
/// Header "<profile_index> <count>", then "h ( re , im )" lines at twelve
/// decimals, heights relative to the nacelle datum, uniform step required.
std::string write_complex_field_export(const std::vector<double>& heights_m,
                                       const std::vector<ComplexSample>& values,
                                       int profile_index);

struct ComplexFieldColumn {
  int profile_index = 0;
  std::vector<double> heights_m;
  std::vector<ComplexSample> values;
};
ComplexFieldColumn read_complex_field_export(const std::string& text);

/// All structural checks over a parsed scenario; returns one message per
/// problem, each naming the field involved. Empty means valid.
std::vector<std::string> validate_scenario(const Scenario& scenario);
void validate_scenario_or_throw(const Scenario& scenario);

/// FNV-1a hash of the canonical input text; stable across runs and platforms.
std::string scenario_digest(const Scenario& scenario);

}  // namespace ppf
