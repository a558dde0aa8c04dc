#include "ppf/fe_model.hpp"

#include <cmath>
#include <complex>

#include "ppf/scenario_io.hpp"

namespace ppf {

TwoRayGeometry trace_two_ray(double antenna_height_m, double target_height_m,
                             double ground_range_m) {
  if (!(ground_range_m > 0.0))
    throw std::domain_error("trace_two_ray: ground range must be positive");
  if (antenna_height_m < 0.0 || target_height_m < 0.0)
    throw std::domain_error("trace_two_ray: heights must be non-negative");
  if (antenna_height_m == 0.0 && target_height_m == 0.0)
    throw std::domain_error("trace_two_ray: both heights at the ground (zero grazing angle)");

  TwoRayGeometry g;
  const double dz = target_height_m - antenna_height_m;
  const double sz = target_height_m + antenna_height_m;
  g.r1_m = std::hypot(ground_range_m, dz);
  g.r2_m = std::hypot(ground_range_m, sz);  // image method: source mirrored below ground
  g.alpha_d_rad = std::atan2(dz, ground_range_m);
  g.grazing_rad = std::atan2(sz, ground_range_m);
  g.alpha_r_rad = -g.grazing_rad;
  return g;
}

double total_phase_lag(const TwoRayGeometry& geometry, double k0, double reflection_phase_rad) {
  if (!(k0 > 0.0)) throw std::domain_error("total_phase_lag: k0 must be positive");
  return (geometry.r2_m - geometry.r1_m) * k0 + reflection_phase_rad;
}

FeFieldSample fe_complex_field(const SourceSpec& source, const AntennaPattern& pattern,
                               const GroundComposition& ground, double target_height_m,
                               double ground_range_m) {
  const TwoRayGeometry g =
      trace_two_ray(source.antenna_height_m, target_height_m, ground_range_m);
  const ComplexSample gamma =
      reflection_coefficient(source.polarization, g.grazing_rad, ground.permittivity,
                             ground.conductivity_s_m, source.frequency_mhz);
  const double rho = gamma.magnitude();
  const double phi = gamma.phase();
  const double k0 = source.wavenumber();

  const double e_d = pattern_factor(pattern, rad_to_deg(g.alpha_d_rad));
  const double e_r = rho * pattern_factor(pattern, rad_to_deg(g.alpha_r_rad));

  // The common factor e^{i r1 k0} is split off so the interference term uses
  // the reduced path-difference phase; the huge absolute phases r*k0 would
  // otherwise eat the last digits of the magnitude.
  const std::complex<double> i_unit(0.0, 1.0);
  const double omega = total_phase_lag(g, k0, phi);
  const std::complex<double> value = std::exp(i_unit * principal_phase(g.r1_m * k0)) *
                                     (e_d + e_r * std::exp(i_unit * omega));

  FeFieldSample sample;
  sample.value = ComplexSample(value);
  sample.amplitude_db = db_from_linear_floored(std::abs(value));
  sample.phase_rad = sample.value.phase();
  return sample;
}

bool fe_region_valid(double elevation_angle_deg, double range_m) {
  return elevation_angle_deg > 5.0 || range_m < 2500.0;
}

FeRunResult run_fe(const Scenario& scenario, bool parallel) {
  validate_scenario_or_throw(scenario);

  FeRunResult out;
  bool flat = true;
  for (const auto& p : scenario.terrain.points)
    if (p.height_m != 0.0) flat = false;
  if (!flat)
    out.warnings.push_back(
        "terrain: flat-earth model ignores the terrain profile; evaluating over ground height 0");
  if (!fe_region_valid(scenario.source.elevation_angle_deg(), scenario.output.max_range_m()))
    out.warnings.push_back(
        "region: output window extends past the flat-earth validity region "
        "(elevation <= 5 deg and range >= 2.5 km)");

  const int nh = scenario.output.n_height_points;
  const int nr = scenario.output.n_range_points;
  const double h0 = scenario.output.min_height_m;
  const double dh = (scenario.output.max_height_m - h0) / (nh - 1);
  const double dr = scenario.output.max_range_m() / nr;
  const double a = scenario.source.antenna_height_m;
  const double lambda = scenario.source.wavelength_m();
  const double absorb = scenario.atmosphere.gaseous_absorption_db_km;

  PpfResult& ppf = out.ppf;
  ppf.scenario_digest = scenario_digest(scenario);
  ppf.heights_m.resize(nh);
  ppf.ranges_m.resize(nr);
  for (int ih = 0; ih < nh; ++ih) ppf.heights_m[ih] = h0 + ih * dh;
  for (int ir = 0; ir < nr; ++ir) ppf.ranges_m[ir] = (ir + 1) * dr;
  ppf.amplitude_db = Grid(nh, nr);
  ppf.phase_rad = Grid(nh, nr);
  ppf.loss_db = Grid(nh, nr);

  const auto eval_point = [&](int ih, int ir) {
    const double z = ppf.heights_m[ih];
    const double x = ppf.ranges_m[ir];
    // Composition at the specular reflection point of the image ray.
    const double x_refl = (a + z) > 0.0 ? x * a / (a + z) : 0.0;
    const GroundComposition ground = composition_at(scenario.terrain, x_refl);
    const FeFieldSample s =
        fe_complex_field(scenario.source, scenario.source.antenna, ground, z, x);
    ppf.amplitude_db.at(ih, ir) = s.amplitude_db;
    ppf.phase_rad.at(ih, ir) = s.phase_rad;
    ppf.loss_db.at(ih, ir) =
        free_space_path_loss_db(x, lambda) + absorb * x / 1000.0 - s.amplitude_db;
  };

  if (parallel) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int ih = 0; ih < nh; ++ih)
      for (int ir = 0; ir < nr; ++ir) eval_point(ih, ir);
  } else {
    for (int ih = 0; ih < nh; ++ih)
      for (int ir = 0; ir < nr; ++ir) eval_point(ih, ir);
  }
  return out;
}

}  // namespace ppf
