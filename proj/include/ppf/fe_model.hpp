#pragma once

#include "ppf/environment.hpp"
#include "ppf/scenario_io.hpp"
#include "ppf/types.hpp"

namespace ppf {

/// Direct and ground-reflected ray over flat earth (image method).
struct TwoRayGeometry {
  double r1_m = 0.0;       // direct path length
  double r2_m = 0.0;       // reflected path length, r2 >= r1
  double alpha_d_rad = 0.0;  // direct-ray elevation at the antenna
  double alpha_r_rad = 0.0;  // reflected-ray elevation (negative, downward)
  double grazing_rad = 0.0;  // grazing angle at the reflection point
};

struct FeFieldSample {
  ComplexSample value;
  double amplitude_db = 0.0;  // 20*log10|value|, floor-clamped
  double phase_rad = 0.0;     // absolute phase of the complex sum
};

/// Image-method ray trace. Throws std::domain_error for zero range or when
/// both heights sit on the ground (degenerate grazing geometry).
TwoRayGeometry trace_two_ray(double antenna_height_m, double target_height_m,
                             double ground_range_m);

/// Total phase lag Omega = (r2 - r1)*k0 + reflection_phase.
double total_phase_lag(const TwoRayGeometry& geometry, double k0,
                       double reflection_phase_rad);

/// Complex two-ray field: f(alpha_d)*e^{i r1 k0} + rho*f(alpha_r)*e^{i(r2 k0 + phi)}.
/// Returns the complex value together with its dB amplitude and absolute phase.
FeFieldSample fe_complex_field(const SourceSpec& source, const AntennaPattern& pattern,
                               const GroundComposition& ground, double target_height_m,
                               double ground_range_m);

/// Flat-earth validity region: elevation above 5 degrees or range below 2.5 km.
bool fe_region_valid(double elevation_angle_deg, double range_m);

struct FeRunResult {
  PpfResult ppf;
  std::vector<std::string> warnings;
};

/// Batch FE evaluation over the scenario's output window. Non-flat terrain is
/// flagged with a warning and evaluated over ground height 0. Points are
/// independent; `parallel` selects the OpenMP path over the serial reference.
FeRunResult run_fe(const Scenario& scenario, bool parallel = true);

}  // namespace ppf
