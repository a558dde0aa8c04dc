#pragma once

#include <vector>

#include "ppf/types.hpp"

namespace ppf {

struct RefractivityLevel {
  double height_m = 0.0;
  double m_unit = 0.0;  // modified refractivity
};

/// Modified-refractivity profile valid from start_range_km outward until the
/// next profile takes over. Heights strictly ascending.
struct RefractivityProfile {
  double start_range_km = 0.0;
  std::vector<RefractivityLevel> levels;
};

struct RefractivityField {
  std::vector<RefractivityProfile> profiles;  // start ranges ascending, first at 0
};

struct TerrainPoint {
  double range_m = 0.0;
  double height_m = 0.0;
};

struct GroundComposition {
  double start_range_km = 0.0;
  int ground_type = 0;  // opaque integer code, round-tripped verbatim
  double permittivity = 1.0;
  double conductivity_s_m = 0.0;
};

/// Piecewise-linear terrain. An empty point list means flat earth at 0 m.
struct TerrainProfile {
  std::vector<TerrainPoint> points;              // ranges strictly ascending
  std::vector<GroundComposition> compositions;   // start ranges ascending
};

struct WindEntry {
  double range_km = 0.0;
  double speed_m_s = 0.0;
};

struct Atmosphere {
  double surface_humidity_g_m3 = 0.0;
  double surface_temperature_c = 0.0;
  double gaseous_absorption_db_km = 0.0;
  std::vector<WindEntry> wind_speeds;  // stored, not modeled
};

/// M-unit value at (range, height). Linear in height inside a profile,
/// linear in range between profiles, constant beyond the data on all sides.
double m_unit_at(const RefractivityField& field, double range_m, double height_m);

/// Refractivity phase screen: per-height phase rate k0 * M(range, z) * 1e-6
/// in rad/m. The march applies it as exp(i * delta_r * screen).
std::vector<double> phase_screen_column(const RefractivityField& field, double range_m,
                                        const std::vector<double>& heights_m, double k0);

/// Terrain height by piecewise-linear interpolation; 0 for empty terrain,
/// constant beyond the last break point.
double terrain_height_at(const TerrainProfile& terrain, double range_m);

/// Slope of the segment containing `range_m`; 0 beyond the profile.
double segment_slope(const TerrainProfile& terrain, double range_m);

/// Ground composition in effect at `range_m` (step function of start ranges).
/// Free-space ground (eps_r = 1, sigma = 0) when none is defined.
GroundComposition composition_at(const TerrainProfile& terrain, double range_m);

/// Normalized pattern factor in [0, 1] at a vertical-plane angle in degrees.
/// Equals 1 at the beam maximum for every kind.
double pattern_factor(const AntennaPattern& pattern, double angle_deg);

/// Fresnel specular-reflection coefficient rho * e^{i phi} for a ground of
/// complex relative permittivity eps = eps_r - i*60*lambda*sigma.
ComplexSample reflection_coefficient(Polarization pol, double grazing_rad,
                                     double permittivity, double conductivity_s_m,
                                     double frequency_mhz);

}  // namespace ppf
