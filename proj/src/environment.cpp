#include "ppf/environment.hpp"

#include <algorithm>
#include <cmath>

namespace ppf {

namespace {

// Height interpolation inside one profile: linear between levels, constant
// beyond both ends.
double profile_value(const RefractivityProfile& profile, double height_m) {
  const auto& lv = profile.levels;
  if (lv.empty()) return 0.0;
  if (height_m <= lv.front().height_m) return lv.front().m_unit;
  if (height_m >= lv.back().height_m) return lv.back().m_unit;
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
    if (height_m <= lv[i + 1].height_m) {
      const double t = (height_m - lv[i].height_m) / (lv[i + 1].height_m - lv[i].height_m);
      return lv[i].m_unit + t * (lv[i + 1].m_unit - lv[i].m_unit);
    }
  }
  return lv.back().m_unit;
}

}  // namespace

double m_unit_at(const RefractivityField& field, double range_m, double height_m) {
  const auto& ps = field.profiles;
  if (ps.empty()) return 0.0;
  const double range_km = range_m / 1000.0;
  if (ps.size() == 1 || range_km <= ps.front().start_range_km)
    return profile_value(ps.front(), height_m);
  if (range_km >= ps.back().start_range_km) return profile_value(ps.back(), height_m);
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    if (range_km <= ps[i + 1].start_range_km) {
      const double t =
          (range_km - ps[i].start_range_km) / (ps[i + 1].start_range_km - ps[i].start_range_km);
      const double a = profile_value(ps[i], height_m);
      const double b = profile_value(ps[i + 1], height_m);
      return a + t * (b - a);
    }
  }
  return profile_value(ps.back(), height_m);
}

std::vector<double> phase_screen_column(const RefractivityField& field, double range_m,
                                        const std::vector<double>& heights_m, double k0) {
  std::vector<double> column(heights_m.size());
  for (std::size_t i = 0; i < heights_m.size(); ++i)
    column[i] = k0 * m_unit_at(field, range_m, heights_m[i]) * 1e-6;
  return column;
}

double terrain_height_at(const TerrainProfile& terrain, double range_m) {
  const auto& pts = terrain.points;
  if (pts.empty()) return 0.0;
  if (range_m <= pts.front().range_m) return pts.front().height_m;
  if (range_m >= pts.back().range_m) return pts.back().height_m;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (range_m <= pts[i + 1].range_m) {
      const double t = (range_m - pts[i].range_m) / (pts[i + 1].range_m - pts[i].range_m);
      return pts[i].height_m + t * (pts[i + 1].height_m - pts[i].height_m);
    }
  }
  return pts.back().height_m;
}

double segment_slope(const TerrainProfile& terrain, double range_m) {
  const auto& pts = terrain.points;
  if (pts.size() < 2) return 0.0;
  if (range_m < pts.front().range_m || range_m >= pts.back().range_m) return 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (range_m < pts[i + 1].range_m) {
      return (pts[i + 1].height_m - pts[i].height_m) / (pts[i + 1].range_m - pts[i].range_m);
    }
  }
  return 0.0;
}

GroundComposition composition_at(const TerrainProfile& terrain, double range_m) {
  GroundComposition current;  // free-space ground by default
  for (const auto& c : terrain.compositions) {
    if (c.start_range_km * 1000.0 <= range_m)
      current = c;
    else
      break;
  }
  return current;
}

double pattern_factor(const AntennaPattern& pattern, double angle_deg) {
  constexpr double kLn2 = 0.6931471805599453;
  // sinc(x) falls to 1/sqrt(2) at |x| = 1.391557...; scales the argument so
  // the half-power width equals the beam width.
  constexpr double kSincHalfPower = 1.3915573775676320;

  switch (pattern.kind) {
    case AntennaKind::Omni:
      return 1.0;
    case AntennaKind::Gauss: {
      if (!(pattern.beam_width_deg > 0.0))
        throw std::invalid_argument("gauss antenna requires a positive beam width");
      const double t = (angle_deg - pattern.elevation_deg) / pattern.beam_width_deg;
      return std::exp(-2.0 * kLn2 * t * t);
    }
    case AntennaKind::SincX: {
      if (!(pattern.beam_width_deg > 0.0))
        throw std::invalid_argument("sinc antenna requires a positive beam width");
      const double x =
          2.0 * kSincHalfPower * (angle_deg - pattern.elevation_deg) / pattern.beam_width_deg;
      if (x == 0.0) return 1.0;
      return std::min(1.0, std::abs(std::sin(x) / x));
    }
    case AntennaKind::Cosec2: {
      if (!(pattern.beam_width_deg > 0.0))
        throw std::invalid_argument("cosec2 antenna requires a positive beam width");
      const double da = angle_deg - pattern.elevation_deg;
      const double half = 0.5 * pattern.beam_width_deg;
      if (da <= half) {
        const double t = da / pattern.beam_width_deg;
        return std::exp(-2.0 * kLn2 * t * t);
      }
      // csc^2 power shaping above the upper half-power edge, continuous there.
      const double da_rad = deg_to_rad(std::min(da, 89.9));
      const double f = (1.0 / std::sqrt(2.0)) * std::sin(deg_to_rad(half)) / std::sin(da_rad);
      return std::clamp(f, 0.0, 1.0);
    }
    case AntennaKind::UserDefined: {
      const auto& tb = pattern.table;
      if (tb.empty())
        throw std::invalid_argument("user-defined antenna pattern has an empty table");
      if (angle_deg <= tb.front().first) return tb.front().second;
      if (angle_deg >= tb.back().first) return tb.back().second;
      for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        if (angle_deg <= tb[i + 1].first) {
          const double t = (angle_deg - tb[i].first) / (tb[i + 1].first - tb[i].first);
          return tb[i].second + t * (tb[i + 1].second - tb[i].second);
        }
      }
      return tb.back().second;
    }
  }
  return 1.0;
}

ComplexSample reflection_coefficient(Polarization pol, double grazing_rad, double permittivity,
                                     double conductivity_s_m, double frequency_mhz) {
  if (!(grazing_rad > 0.0) || grazing_rad > kPi / 2.0)
    throw std::domain_error("reflection_coefficient: grazing angle must be in (0, pi/2]");
  const double lambda = kSpeedOfLight / (frequency_mhz * 1e6);
  const std::complex<double> eps(permittivity, -60.0 * lambda * conductivity_s_m);
  const double s = std::sin(grazing_rad);
  const double c2 = std::cos(grazing_rad) * std::cos(grazing_rad);
  const std::complex<double> root = std::sqrt(eps - c2);
  std::complex<double> gamma;
  if (pol == Polarization::Horizontal)
    gamma = (s - root) / (s + root);
  else
    gamma = (eps * s - root) / (eps * s + root);
  return ComplexSample(gamma);
}

}  // namespace ppf
