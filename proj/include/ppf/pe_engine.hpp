#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ppf/environment.hpp"
#include "ppf/scenario_io.hpp"
#include "ppf/sine_transform.hpp"
#include "ppf/types.hpp"

namespace ppf {

/// Resolved split-step configuration. delta_p is pinned to pi / z_max and
/// f_norm to the inverse round-trip scale of the sine transform.
struct PeConfig {
  std::size_t transform_size = 0;  // power of two
  double z_max_m = 0.0;
  double delta_r_m = 0.0;
  double absorber_fraction = 0.25;  // in [0, 0.5)

  double delta_p() const { return kPi / z_max_m; }          // rad/m
  double delta_z() const { return z_max_m / static_cast<double>(transform_size); }
  double f_norm() const { return 0.5 / static_cast<double>(transform_size); }
};

/// Fills in defaults for everything the overrides leave unset and enforces
/// the sampling and propagation-angle bounds. Throws ValidationError.
PeConfig resolve_pe_config(const Scenario& scenario);

/// One vertical field column mid-march. Bin i sits at absolute height
/// ground_m + i*delta_z; ground_m tracks the terrain on the bin lattice.
struct PeState {
  double range_m = 0.0;
  double ground_m = 0.0;
  std::vector<std::complex<double>> field;       // size transform_size, [0] == 0
  std::vector<std::complex<double>> propagator;  // frsp column, carried along
  std::vector<double> screen;                    // profint at the current range
};

/// Source spectrum at zero range, one coefficient per p-space index:
/// U_j = c_a * s_gain * [f(a_d) e^{-i p_j k0 h} -+ f(-a_d) e^{+i p_j k0 h}]
/// (- for horizontal, + for vertical polarization). Indices beyond the
/// propagating cone (sin > 1) are zero.
std::vector<std::complex<double>> build_init_spectrum(const SourceSpec& source,
                                                      const PeConfig& config);

/// frsp_j = f_norm * exp(i dr (sqrt(k0^2 - (j dp)^2) - k0)); evanescent
/// indices (j dp > k0) are zeroed.
std::vector<std::complex<double>> build_free_space_propagator(const PeConfig& config,
                                                              double k0);

/// Zero-range field: init spectrum transformed to height space, registered to
/// the terrain height at range 0. Throws ValidationError if the antenna sits
/// at or above z_max.
PeState init_field(const SourceSpec& source, const PeConfig& config,
                   const TerrainProfile& terrain, const SineTransform& transform);

/// One range step: tilt by the residual terrain slope, spectral free-space
/// propagation, untilt, whole-bin re-registration to the terrain lattice,
/// refractivity phase screen, absorber taper. Throws std::domain_error when
/// the terrain leaves the transform domain.
PeState march_step(const PeState& state, const PeConfig& config, double k0,
                   const TerrainProfile& terrain, const RefractivityField& refractivity,
                   const SineTransform& transform);

/// Stored march columns at the output ranges. All ground references live on
/// one absolute lattice {lattice_origin_m + k*delta_z}.
struct ComplexFieldGrid {
  double delta_z_m = 0.0;
  double lattice_origin_m = 0.0;
  std::vector<double> ranges_m;                           // ascending
  std::vector<double> ground_m;                           // per range
  std::vector<std::vector<std::complex<double>>> columns; // [range][bin]

  /// Complex field at an absolute height: linear interpolation of the complex
  /// column, exact zero at and below the local ground.
  ComplexSample sample(std::size_t range_index, double height_m) const;
};

/// PPF extraction: amplitude path interpolates magnitudes then clamps and
/// converts to dB (+10*log10 of range in meters); phase path interpolates the
/// complex field first and takes the angle. Output heights are snapped to the
/// grid lattice so both paths read the same samples.
PpfResult extract_complex_ppf(const ComplexFieldGrid& grid, const OutputWindow& window,
                              double wavelength_m, double absorption_db_km,
                              const std::string& digest);

struct PeRunResult {
  ComplexFieldGrid grid;
  PpfResult ppf;
  std::vector<std::string> warnings;
};

/// Full deterministic march over the scenario. Identical inputs give
/// bit-identical outputs.
PeRunResult run_pe(const Scenario& scenario);

/// A location where vertically adjacent phase samples jump by more than pi
/// while both amplitudes sit above the null threshold.
struct PhaseDefect {
  std::size_t height_index = 0;  // of the lower sample
  std::size_t range_index = 0;
  double jump_rad = 0.0;
};

std::vector<PhaseDefect> phase_continuity_report(const PpfResult& result,
                                                 double null_threshold_db = -40.0);

/// Per-column cumulative 2*pi correction along height.
Grid unwrap_phase_columns(const Grid& phase);

}  // namespace ppf
