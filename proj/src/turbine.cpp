#include "ppf/turbine.hpp"

#include <cmath>
#include <sstream>

namespace ppf {

double blade_tip_speed(const TurbineSpec& spec, double rpm,
                       std::vector<std::string>* warnings) {
  if (rpm < 0.0) throw std::domain_error("blade_tip_speed: rpm must be non-negative");
  if (warnings && spec.rpm_max > 0.0 && (rpm < spec.rpm_min || rpm > spec.rpm_max)) {
    std::ostringstream os;
    os << "rpm " << rpm << " outside the operational interval [" << spec.rpm_min << ", "
       << spec.rpm_max << "]";
    warnings->push_back(os.str());
  }
  return 2.0 * kPi * (rpm / 60.0) * spec.rotor_radius_m();
}

std::vector<double> extraction_window(const TurbineSpec& spec, double margin_below_m,
                                      double margin_above_m, double step_m) {
  if (!(step_m > 0.0)) throw std::domain_error("extraction_window: step must be positive");
  const double lo = -(spec.hub_height_m + margin_below_m);
  const double hi = spec.rotor_radius_m() + margin_above_m;
  const auto n = static_cast<std::size_t>(std::lround((hi - lo) / step_m));
  std::vector<double> heights(n + 1);
  for (std::size_t i = 0; i < n; ++i) heights[i] = lo + static_cast<double>(i) * step_m;
  heights[n] = hi;  // end exactly at the declared bound
  return heights;
}

std::vector<ComplexSample> field_column_at_turbine(const ComplexFieldGrid& grid,
                                                   const TurbinePlacement& placement,
                                                   const TurbineSpec& spec,
                                                   const std::vector<double>& window,
                                                   const TerrainProfile& terrain) {
  if (grid.ranges_m.empty())
    throw std::out_of_range("field_column_at_turbine: empty field grid");
  const double spacing =
      grid.ranges_m.size() > 1 ? grid.ranges_m[1] - grid.ranges_m[0] : grid.ranges_m[0];
  if (placement.distance_m < grid.ranges_m.front() - 0.5 * spacing ||
      placement.distance_m > grid.ranges_m.back() + 0.5 * spacing) {
    std::ostringstream os;
    os << "turbine " << placement.id << " at " << placement.distance_m
       << " m lies outside the computed grid";
    throw std::out_of_range(os.str());
  }

  std::size_t ir = 0;
  double best = std::abs(grid.ranges_m[0] - placement.distance_m);
  for (std::size_t i = 1; i < grid.ranges_m.size(); ++i) {
    const double d = std::abs(grid.ranges_m[i] - placement.distance_m);
    if (d < best) {
      best = d;
      ir = i;
    }
  }

  const double datum = terrain_height_at(terrain, placement.distance_m) + spec.hub_height_m;
  std::vector<ComplexSample> column;
  column.reserve(window.size());
  for (double w : window) column.push_back(grid.sample(ir, datum + w));
  return column;
}

std::vector<TurbinePlacement> parse_turbine_table(const std::string& text) {
  std::vector<TurbinePlacement> rows;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    TurbinePlacement t;
    if (!(ls >> t.id)) continue;  // blank line
    if (!(ls >> t.distance_m >> t.azimuth_deg))
      throw ParseError(line_no, "turbine table",
                       "expected 'id distance_m azimuth_deg'");
    if (!(t.distance_m > 0.0))
      throw ParseError(line_no, "turbine table", "distance must be positive");
    rows.push_back(std::move(t));
  }
  return rows;
}

}  // namespace ppf
