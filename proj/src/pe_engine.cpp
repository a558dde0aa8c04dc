#include "ppf/pe_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ppf {

namespace {

std::size_t next_pow2(double x) {
  std::size_t n = 4;
  while (static_cast<double>(n) < x) n <<= 1;
  return n;
}

// Terrain extrema over [0, max_range]: piecewise linear, so the candidates
// are the endpoints and every break point inside the interval.
void terrain_extrema(const TerrainProfile& terrain, double max_range_m, double& h_min,
                     double& h_max) {
  h_min = h_max = terrain_height_at(terrain, 0.0);
  const auto consider = [&](double h) {
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  };
  consider(terrain_height_at(terrain, max_range_m));
  for (const auto& p : terrain.points)
    if (p.range_m >= 0.0 && p.range_m <= max_range_m) consider(p.height_m);
}

double max_terrain_slope(const TerrainProfile& terrain, double max_range_m) {
  double worst = 0.0;
  const auto& pts = terrain.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1].range_m < 0.0 || pts[i].range_m > max_range_m) continue;
    worst = std::max(worst, std::abs((pts[i + 1].height_m - pts[i].height_m) /
                                     (pts[i + 1].range_m - pts[i].range_m)));
  }
  return worst;
}

}  // namespace

PeConfig resolve_pe_config(const Scenario& s) {
  std::vector<std::string> issues;
  const double lambda = s.source.wavelength_m();
  const double k0 = s.source.wavenumber();

  double h_min = 0.0, h_max = 0.0;
  terrain_extrema(s.terrain, s.output.max_range_m(), h_min, h_max);

  PeConfig cfg;
  cfg.absorber_fraction = s.pe.absorber_fraction.value_or(0.25);
  if (cfg.absorber_fraction < 0.0 || cfg.absorber_fraction >= 0.5)
    issues.push_back("absorber_fraction: must lie in [0, 0.5)");
  const double usable = 1.0 - std::max(cfg.absorber_fraction, 0.0);

  if (s.pe.z_max_m) {
    cfg.z_max_m = *s.pe.z_max_m;
  } else {
    double need = (s.output.max_height_m - h_min) / usable * 1.1;
    need = std::max({need, 2.0 * s.source.antenna_height_m, 100.0});
    cfg.z_max_m = std::ceil(need / 16.0) * 16.0;
  }
  if (!(cfg.z_max_m > 0.0)) issues.push_back("z_max: must be positive");

  if (!issues.empty()) throw ValidationError(std::move(issues));

  if (s.source.antenna_height_m >= cfg.z_max_m)
    issues.push_back("antenna_height: must be below the transform height z_max");
  if ((h_max - h_min) >= usable * cfg.z_max_m)
    issues.push_back("terrain: relief exceeds the usable transform domain");
  if ((s.output.max_height_m - h_min) > usable * cfg.z_max_m)
    issues.push_back("output: max_height reaches into the absorbing layer; raise z_max");

  // Propagation-angle requirement: terrain slope plus beam coverage.
  const double alpha_max = std::atan(max_terrain_slope(s.terrain, s.output.max_range_m()));
  const double beam_deg = std::max(
      2.0, std::abs(s.source.elevation_angle_deg()) + std::max(0.0, s.source.beam_width_deg()));
  const double theta_need = std::min(alpha_max + deg_to_rad(beam_deg), deg_to_rad(80.0));
  const double p_need = k0 * std::sin(theta_need);

  const double output_dz =
      (s.output.max_height_m - s.output.min_height_m) / (s.output.n_height_points - 1);

  if (s.pe.transform_size) {
    cfg.transform_size = *s.pe.transform_size;
    if (cfg.transform_size < 4 || (cfg.transform_size & (cfg.transform_size - 1)) != 0)
      issues.push_back("transform_size: must be a power of two >= 4");
  } else {
    double dz_target = std::min(output_dz, cfg.z_max_m / 1024.0);
    cfg.transform_size =
        std::clamp<std::size_t>(next_pow2(cfg.z_max_m / dz_target), 1024, std::size_t{1} << 16);
    while (static_cast<double>(cfg.transform_size - 1) * kPi / cfg.z_max_m < p_need &&
           cfg.transform_size < (std::size_t{1} << 16))
      cfg.transform_size <<= 1;
  }

  if (issues.empty()) {
    const double p_max = static_cast<double>(cfg.transform_size - 1) * cfg.delta_p();
    if (p_max < p_need * 0.999) {
      std::ostringstream os;
      os << "transform_size: too small to represent propagation angles up to "
         << rad_to_deg(theta_need) << " deg (terrain slope plus beam coverage)";
      issues.push_back(os.str());
    }
    // Sampling rule: output sampling finer than half a wavelength demands PE
    // bins at least that fine.
    if (output_dz < lambda / 2.0 && cfg.delta_z() > output_dz)
      issues.push_back("transform_size: PE bin size exceeds the requested sub-half-wavelength "
                       "output height resolution");
  }

  const double spacing = s.output.max_range_m() / s.output.n_range_points;
  cfg.delta_r_m = s.pe.delta_r_m.value_or(std::min(std::sqrt(lambda * cfg.z_max_m), spacing));
  if (!(cfg.delta_r_m > 0.0)) issues.push_back("delta_r: must be positive");
  else if (cfg.delta_r_m > spacing + 1e-9)
    issues.push_back("delta_r: coarser than the output range spacing; output ranges would "
                     "collide after snapping");

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return cfg;
}

std::vector<std::complex<double>> build_init_spectrum(const SourceSpec& source,
                                                      const PeConfig& config) {
  const std::size_t n = config.transform_size;
  const double k0 = source.wavenumber();
  const double dp = config.delta_p();
  const double s_gain = std::sqrt(source.wavelength_m()) / config.z_max_m;
  const double ant_h = source.antenna_height_m;
  const bool horizontal = source.polarization == Polarization::Horizontal;

  std::vector<std::complex<double>> spectrum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = static_cast<double>(j) * dp;  // transverse wavenumber, rad/m
    const double sin_a = p / k0;
    if (sin_a > 1.0) break;  // beyond the propagating cone
    const double a_d_deg = rad_to_deg(std::asin(sin_a));
    const double ca = std::pow(1.0 - sin_a * sin_a, 0.75);
    const double fd = pattern_factor(source.antenna, a_d_deg);
    const double fr = pattern_factor(source.antenna, -a_d_deg);
    const double ph = p * ant_h;  // p_j * k0 * ant_ht with p_j = sin(angle)
    const std::complex<double> e_minus(std::cos(ph), -std::sin(ph));
    const std::complex<double> e_plus(std::cos(ph), std::sin(ph));
    spectrum[j] = horizontal ? ca * s_gain * (fd * e_minus - fr * e_plus)
                             : ca * s_gain * (fd * e_minus + fr * e_plus);
  }
  return spectrum;
}

std::vector<std::complex<double>> build_free_space_propagator(const PeConfig& config,
                                                              double k0) {
  const std::size_t n = config.transform_size;
  const double dp = config.delta_p();
  const double dr = config.delta_r_m;
  const double f_norm = config.f_norm();

  std::vector<std::complex<double>> frsp(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = static_cast<double>(j) * dp;
    if (p > k0) continue;  // evanescent index: zeroed
    const double phase = dr * (std::sqrt(k0 * k0 - p * p) - k0);
    frsp[j] = std::polar(f_norm, phase);
  }
  return frsp;
}

PeState init_field(const SourceSpec& source, const PeConfig& config,
                   const TerrainProfile& terrain, const SineTransform& transform) {
  if (source.antenna_height_m >= config.z_max_m)
    throw ValidationError({"antenna_height: must be below the transform height z_max"});

  PeState state;
  state.range_m = 0.0;
  state.ground_m = terrain_height_at(terrain, 0.0);
  state.field = build_init_spectrum(source, config);
  transform.apply(state.field);
  for (auto& v : state.field) v *= 0.5;  // plain sine synthesis of the spectrum
  state.propagator = build_free_space_propagator(config, source.wavenumber());
  state.screen.assign(config.transform_size, 0.0);
  return state;
}

PeState march_step(const PeState& state, const PeConfig& config, double k0,
                   const TerrainProfile& terrain, const RefractivityField& refractivity,
                   const SineTransform& transform) {
  const std::size_t n = config.transform_size;
  const double dz = config.delta_z();
  const double dr = config.delta_r_m;

  PeState next = state;
  next.range_m = state.range_m + dr;

  const double h0 = terrain_height_at(terrain, state.range_m);
  const double h1 = terrain_height_at(terrain, next.range_m);
  // Half-bin ties get a deterministic nudge so the split between whole-bin
  // shift and residual tilt cannot flip on last-ulp noise (keeps uniformly
  // translated scenarios on identical shift sequences).
  const long shift =
      static_cast<long>(std::floor((h1 - state.ground_m) / dz + 0.5 + 1e-9));
  if (std::llabs(shift) >= static_cast<long long>(n)) {
    std::ostringstream os;
    os << "terrain height change at range " << next.range_m
       << " m exceeds the transform domain";
    throw std::domain_error(os.str());
  }
  next.ground_m = state.ground_m + static_cast<double>(shift) * dz;
  // Whole bins move via the column shift below; the sub-bin residue of the
  // terrain track rides in the tilt phase.
  const double e0 = h0 - state.ground_m;
  const double e1 = h1 - next.ground_m;
  const double alpha = (e1 - e0) / dr;

  auto& field = next.field;

  // (1) tilt the wavefront to follow the residual slope
  if (alpha != 0.0) {
    for (std::size_t i = 1; i < n; ++i) {
      const double zeta = static_cast<double>(i) * dz;
      field[i] *= std::polar(1.0, -k0 * alpha * zeta);
    }
  }

  // (2) sine transform, free-space propagator (f_norm folded in), transform back
  transform.apply(field);
  for (std::size_t j = 0; j < n; ++j) field[j] *= state.propagator[j];
  transform.apply(field);

  // (3) untilt and re-register the column to the terrain lattice
  if (alpha != 0.0) {
    for (std::size_t i = 1; i < n; ++i) {
      const double zeta = static_cast<double>(i) * dz;
      field[i] *= std::polar(1.0, k0 * alpha * zeta);
    }
  }
  if (shift != 0) {
    std::vector<std::complex<double>> shifted(n, 0.0);
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const long src = i + shift;
      if (src >= 0 && src < static_cast<long>(n)) shifted[i] = field[src];
    }
    field = std::move(shifted);
  }

  // (4) refractivity phase screen at the new range
  {
    std::vector<double> heights(n);
    for (std::size_t i = 0; i < n; ++i)
      heights[i] = next.ground_m + static_cast<double>(i) * dz;
    next.screen = phase_screen_column(refractivity, next.range_m, heights, k0);
  }
  bool screen_trivial = true;
  for (double v : next.screen)
    if (v != 0.0) {
      screen_trivial = false;
      break;
    }
  if (!screen_trivial) {
    for (std::size_t i = 1; i < n; ++i) field[i] *= std::polar(1.0, dr * next.screen[i]);
  }

  // (5) absorbing taper over the top of the column
  if (config.absorber_fraction > 0.0) {
    const auto start =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - config.absorber_fraction)));
    if (start < n) {
      const double span = static_cast<double>(n - 1 - start);
      for (std::size_t i = start; i < n; ++i) {
        const double t = span > 0.0 ? static_cast<double>(i - start) / span : 1.0;
        field[i] *= 0.5 * (1.0 + std::cos(kPi * t));
      }
    }
  }

  field[0] = 0.0;
  return next;
}

ComplexSample ComplexFieldGrid::sample(std::size_t range_index, double height_m) const {
  const auto& col = columns[range_index];
  const double zeta = height_m - ground_m[range_index];
  if (zeta <= 0.0) return {0.0, 0.0};
  double pos = zeta / delta_z_m;
  auto idx = static_cast<std::size_t>(pos);
  double fr = pos - static_cast<double>(idx);
  if (fr > 1.0 - 1e-9) {  // collapse FP fuzz onto the lattice
    ++idx;
    fr = 0.0;
  } else if (fr < 1e-9) {
    fr = 0.0;
  }
  if (idx + (fr > 0.0 ? 1 : 0) >= col.size())
    throw std::out_of_range("field sample above the transform domain");
  const std::complex<double> u0 = col[idx];
  const std::complex<double> u1 = fr > 0.0 ? col[idx + 1] : u0;
  return ComplexSample(u0 + fr * (u1 - u0));
}

PpfResult extract_complex_ppf(const ComplexFieldGrid& grid, const OutputWindow& window,
                              double wavelength_m, double absorption_db_km,
                              const std::string& digest) {
  const std::size_t nr = grid.ranges_m.size();
  const std::size_t nh = static_cast<std::size_t>(window.n_height_points);
  const double dz = grid.delta_z_m;

  PpfResult out;
  out.scenario_digest = digest;
  out.ranges_m = grid.ranges_m;
  out.heights_m.resize(nh);
  // Snap output heights onto the column lattice so the amplitude and phase
  // paths read the complex field of exactly the same points.
  const double dh = (window.max_height_m - window.min_height_m) / (window.n_height_points - 1);
  for (std::size_t ih = 0; ih < nh; ++ih) {
    const double want = window.min_height_m + static_cast<double>(ih) * dh;
    const double k = std::round((want - grid.lattice_origin_m) / dz);
    out.heights_m[ih] = grid.lattice_origin_m + k * dz;
  }
  for (std::size_t ih = 1; ih < nh; ++ih)
    if (!(out.heights_m[ih] > out.heights_m[ih - 1]))
      throw ValidationError(
          {"output: requested height resolution is finer than the PE bin size"});

  out.amplitude_db = Grid(nh, nr);
  out.phase_rad = Grid(nh, nr);
  out.loss_db = Grid(nh, nr);

  for (std::size_t ir = 0; ir < nr; ++ir) {
    const auto& col = grid.columns[ir];
    const double range = grid.ranges_m[ir];
    const double rlog = 10.0 * std::log10(range);  // range in meters
    const double fsl = free_space_path_loss_db(range, wavelength_m) +
                       absorption_db_km * range / 1000.0;
    for (std::size_t ih = 0; ih < nh; ++ih) {
      const double zeta = out.heights_m[ih] - grid.ground_m[ir];
      double pmag = 0.0;
      double phase = 0.0;
      if (zeta > 0.0) {
        double pos = zeta / dz;
        auto idx = static_cast<std::size_t>(pos);
        double fr = pos - static_cast<double>(idx);
        if (fr > 1.0 - 1e-9) {
          ++idx;
          fr = 0.0;
        } else if (fr < 1e-9) {
          fr = 0.0;
        }
        if (idx + 1 >= col.size())
          throw std::out_of_range("output window above the transform domain");
        const std::complex<double> u0 = col[idx];
        const std::complex<double> u1 = col[idx + 1];
        // Amplitude path: interpolated magnitudes, then the floor clamp.
        pmag = std::abs(u0) + fr * (std::abs(u1) - std::abs(u0));
        // Phase path: interpolate the complex field first, then take the angle.
        const std::complex<double> uc = u0 + fr * (u1 - u0);
        phase = ComplexSample(uc).phase();
      }
      pmag = std::max(pmag, kMagnitudeFloor);
      const double amp_db = 20.0 * std::log10(pmag) + rlog;
      out.amplitude_db.at(ih, ir) = amp_db;
      out.phase_rad.at(ih, ir) = phase;
      out.loss_db.at(ih, ir) = fsl - amp_db;
    }
  }
  return out;
}

PeRunResult run_pe(const Scenario& scenario) {
  validate_scenario_or_throw(scenario);
  const PeConfig cfg = resolve_pe_config(scenario);
  const double k0 = scenario.source.wavenumber();
  const double lambda = scenario.source.wavelength_m();
  const SineTransform transform(cfg.transform_size);

  PeRunResult out;
  PeState state = init_field(scenario.source, cfg, scenario.terrain, transform);

  ComplexFieldGrid& grid = out.grid;
  grid.delta_z_m = cfg.delta_z();
  grid.lattice_origin_m = state.ground_m;

  // Output ranges snapped to whole numbers of range steps.
  const int nr = scenario.output.n_range_points;
  const double spacing = scenario.output.max_range_m() / nr;
  std::vector<long> out_steps(nr);
  for (int i = 0; i < nr; ++i)
    out_steps[i] = std::max<long>(1, std::lround((i + 1) * spacing / cfg.delta_r_m));
  for (int i = 1; i < nr; ++i)
    if (out_steps[i] <= out_steps[i - 1])
      throw ValidationError({"delta_r: output ranges collide after snapping to range steps"});

  grid.ranges_m.reserve(nr);
  grid.ground_m.reserve(nr);
  grid.columns.reserve(nr);

  std::size_t next_out = 0;
  for (long step = 1; step <= out_steps.back(); ++step) {
    state = march_step(state, cfg, k0, scenario.terrain, scenario.refractivity, transform);
    if (next_out < out_steps.size() && step == out_steps[next_out]) {
      grid.ranges_m.push_back(state.range_m);
      grid.ground_m.push_back(state.ground_m);
      grid.columns.push_back(state.field);
      ++next_out;
    }
  }

  out.ppf = extract_complex_ppf(grid, scenario.output, lambda,
                                scenario.atmosphere.gaseous_absorption_db_km,
                                scenario_digest(scenario));
  return out;
}

std::vector<PhaseDefect> phase_continuity_report(const PpfResult& result,
                                                 double null_threshold_db) {
  std::vector<PhaseDefect> defects;
  const std::size_t nh = result.heights_m.size();
  const std::size_t nr = result.ranges_m.size();
  for (std::size_t ir = 0; ir < nr; ++ir) {
    for (std::size_t ih = 0; ih + 1 < nh; ++ih) {
      if (result.amplitude_db.at(ih, ir) <= null_threshold_db ||
          result.amplitude_db.at(ih + 1, ir) <= null_threshold_db)
        continue;
      const double jump = result.phase_rad.at(ih + 1, ir) - result.phase_rad.at(ih, ir);
      if (std::abs(jump) > kPi) defects.push_back({ih, ir, jump});
    }
  }
  return defects;
}

Grid unwrap_phase_columns(const Grid& phase) {
  Grid out = phase;
  for (std::size_t ir = 0; ir < phase.n_ranges; ++ir) {
    for (std::size_t ih = 1; ih < phase.n_heights; ++ih) {
      const double prev = out.at(ih - 1, ir);
      const double raw = phase.at(ih, ir);
      out.at(ih, ir) = raw - 2.0 * kPi * std::round((raw - prev) / (2.0 * kPi));
    }
  }
  return out;
}

}  // namespace ppf
