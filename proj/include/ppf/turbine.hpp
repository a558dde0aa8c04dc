#pragma once

#include <string>
#include <vector>

#include "ppf/environment.hpp"
#include "ppf/pe_engine.hpp"
#include "ppf/types.hpp"

namespace ppf {

struct TurbineSpec {
  double rotor_diameter_m = 0.0;
  double hub_height_m = 0.0;
  double rpm_nominal = 0.0;
  double rpm_min = 0.0;
  double rpm_max = 0.0;
  int n_blades = 3;

  double rotor_radius_m() const { return 0.5 * rotor_diameter_m; }
};

struct TurbinePlacement {
  std::string id;
  double distance_m = 0.0;
  double azimuth_deg = 0.0;  // from radar boresight
};

/// Tip speed 2*pi*(rpm/60)*radius in m/s. An rpm outside the operational
/// interval appends a warning instead of failing.
double blade_tip_speed(const TurbineSpec& spec, double rpm,
                       std::vector<std::string>* warnings = nullptr);

/// Nacelle-relative sample heights from -(hub + margin_below) up to
/// +(radius + margin_above), inclusive, at a uniform step.
std::vector<double> extraction_window(const TurbineSpec& spec, double margin_below_m,
                                      double margin_above_m, double step_m);

/// Complex field column at the turbine's range, one sample per window height.
/// Absolute height = terrain height at the range + hub + window offset;
/// samples at or below local ground are exact zeros.
std::vector<ComplexSample> field_column_at_turbine(const ComplexFieldGrid& grid,
                                                   const TurbinePlacement& placement,
                                                   const TurbineSpec& spec,
                                                   const std::vector<double>& window,
                                                   const TerrainProfile& terrain);

/// Table of "id distance_m azimuth_deg" rows; '#' starts a comment.
std::vector<TurbinePlacement> parse_turbine_table(const std::string& text);

}  // namespace ppf
