#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Magnitudes below this are clamped before any 20*log10 to keep dB finite.
/// The clamp value is recorded in run manifests.
inline constexpr double kMagnitudeFloor = 1e-30;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into the principal branch (-pi, pi].
double principal_phase(double rad);

/// 20*log10(x). Throws std::domain_error for x <= 0.
double db_from_linear(double x);

/// 20*log10(max(x, kMagnitudeFloor)); total over x >= 0.
double db_from_linear_floored(double x);

/// One complex field sample. Thin value type around (re, im); the engines
/// work on std::complex<double> internally and convert at the boundaries.
struct ComplexSample {
  double re = 0.0;
  double im = 0.0;

  ComplexSample() = default;
  ComplexSample(double r, double i) : re(r), im(i) {}
  ComplexSample(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}
  operator std::complex<double>() const { return {re, im}; }

  double magnitude() const { return std::sqrt(re * re + im * im); }
  /// Angle between imaginary and real part, in (-pi, pi].
  double phase() const;

  static ComplexSample from_polar(double magnitude, double phase) {
    return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
  }
};

enum class Polarization { Horizontal, Vertical };

enum class AntennaKind { Omni, Gauss, SincX, Cosec2, UserDefined };

/// Vertical-plane antenna pattern. Built-in kinds are closed forms
/// parameterized by beam width and elevation; UserDefined interpolates a
/// normalized (angle deg, factor) table.
struct AntennaPattern {
  AntennaKind kind = AntennaKind::Omni;
  double beam_width_deg = 0.0;
  double elevation_deg = 0.0;
  std::vector<std::pair<double, double>> table;  // angles ascending, factors in [0,1]
};

struct SourceSpec {
  double frequency_mhz = 0.0;
  double antenna_height_m = 0.0;  // above local ground
  Polarization polarization = Polarization::Horizontal;
  AntennaPattern antenna;

  double wavelength_m() const { return kSpeedOfLight / (frequency_mhz * 1e6); }
  double wavenumber() const { return 2.0 * kPi / wavelength_m(); }  // rad/m
  double elevation_angle_deg() const { return antenna.elevation_deg; }
  double beam_width_deg() const { return antenna.beam_width_deg; }
};

struct OutputWindow {
  double min_height_m = 0.0;
  double max_height_m = 0.0;
  double max_range_km = 0.0;
  int n_height_points = 0;
  int n_range_points = 0;

  double max_range_m() const { return max_range_km * 1000.0; }
};

/// Dense rectangular grid, one row per height, one column per range.
struct Grid {
  std::size_t n_heights = 0;
  std::size_t n_ranges = 0;
  std::vector<double> data;

  Grid() = default;
  Grid(std::size_t nh, std::size_t nr) : n_heights(nh), n_ranges(nr), data(nh * nr, 0.0) {}

  double& at(std::size_t ih, std::size_t ir) { return data[ih * n_ranges + ir]; }
  double at(std::size_t ih, std::size_t ir) const { return data[ih * n_ranges + ir]; }
};

/// Paired amplitude (dB) and absolute phase (rad) of the pattern propagation
/// factor, plus one-way loss, on a shared range x height lattice.
struct PpfResult {
  std::vector<double> ranges_m;   // ascending
  std::vector<double> heights_m;  // ascending
  Grid amplitude_db;
  Grid phase_rad;  // principal values in (-pi, pi]
  Grid loss_db;
  std::string scenario_digest;
};

/// Free-space-referenced PPF in dB with the range/wavelength normalization
/// 20*log10|u| - 10*log10(range) - 10*log10(wavelength).
double ppf_free_space_db(const ComplexSample& u, double range_m, double wavelength_m);

/// One-way free-space path loss 20*log10(4*pi*r/lambda).
inline double free_space_path_loss_db(double range_m, double wavelength_m) {
  return 20.0 * std::log10(4.0 * kPi * range_m / wavelength_m);
}

/// Parse failure with the 1-based input line and the field being read.
struct ParseError : std::runtime_error {
  int line;
  std::string field;
  ParseError(int line_no, std::string field_name, const std::string& what);
};

/// Scenario-level validation failure; carries every issue found.
struct ValidationError : std::runtime_error {
  std::vector<std::string> issues;
  explicit ValidationError(std::vector<std::string> problems);
};

}  // namespace ppf
