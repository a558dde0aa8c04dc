#include "ppf/pseudo3d.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ppf {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double header_value(std::istringstream& is, const char* key, int line) {
  std::string k;
  double v = 0.0;
  if (!(is >> k >> v) || k != key)
    throw ParseError(line, "elevation grid header", std::string("expected '") + key + " <value>'");
  return v;
}

}  // namespace

ElevationGrid read_elevation_grid(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  const auto next_line = [&]() -> std::istringstream {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw ParseError(line_no + 1, "elevation grid", "unexpected end of file");
  };

  ElevationGrid g;
  {
    auto l = next_line();
    g.n_cols = static_cast<std::size_t>(header_value(l, "ncols", line_no));
  }
  {
    auto l = next_line();
    g.n_rows = static_cast<std::size_t>(header_value(l, "nrows", line_no));
  }
  {
    auto l = next_line();
    g.origin_x_m = header_value(l, "xllcorner", line_no);
  }
  {
    auto l = next_line();
    g.origin_y_m = header_value(l, "yllcorner", line_no);
  }
  {
    auto l = next_line();
    g.cell_size_m = header_value(l, "cellsize", line_no);
  }
  {
    auto l = next_line();
    g.nodata = header_value(l, "nodata_value", line_no);
  }
  if (g.n_cols < 2 || g.n_rows < 2)
    throw ParseError(line_no, "elevation grid header", "grid must be at least 2 x 2");
  if (!(g.cell_size_m > 0.0))
    throw ParseError(line_no, "elevation grid header", "cellsize must be positive");

  g.heights.reserve(g.n_rows * g.n_cols);
  for (std::size_t r = 0; r < g.n_rows; ++r) {
    auto l = next_line();
    for (std::size_t c = 0; c < g.n_cols; ++c) {
      double v = 0.0;
      if (!(l >> v))
        throw ParseError(line_no, "elevation grid row " + std::to_string(r),
                         "expected " + std::to_string(g.n_cols) + " values");
      g.heights.push_back(v);
    }
    double extra;
    if (l >> extra)
      throw ParseError(line_no, "elevation grid row " + std::to_string(r),
                       "more than " + std::to_string(g.n_cols) + " values");
  }
  return g;
}

std::string write_elevation_grid(const ElevationGrid& g) {
  std::ostringstream os;
  os << "ncols " << g.n_cols << "\n";
  os << "nrows " << g.n_rows << "\n";
  os << "xllcorner " << fmt_num(g.origin_x_m) << "\n";
  os << "yllcorner " << fmt_num(g.origin_y_m) << "\n";
  os << "cellsize " << fmt_num(g.cell_size_m) << "\n";
  os << "nodata_value " << fmt_num(g.nodata) << "\n";
  for (std::size_t r = 0; r < g.n_rows; ++r) {
    for (std::size_t c = 0; c < g.n_cols; ++c) {
      if (c) os << ' ';
      os << fmt_num(g.at(r, c));
    }
    os << '\n';
  }
  return os.str();
}

TerrainProfile sample_terrain_along_azimuth(const ElevationGrid& grid, double origin_x_m,
                                            double origin_y_m, double azimuth_deg,
                                            double max_range_m, double range_step_m) {
  if (!(range_step_m > 0.0))
    throw std::invalid_argument("sample_terrain_along_azimuth: range step must be positive");
  const double dx = std::sin(deg_to_rad(azimuth_deg));
  const double dy = std::cos(deg_to_rad(azimuth_deg));

  const auto fail = [&](double range, const char* what) {
    std::ostringstream os;
    os << "azimuth " << azimuth_deg << " deg: " << what << " at range " << range << " m";
    throw std::out_of_range(os.str());
  };

  TerrainProfile profile;
  const auto n_steps = static_cast<std::size_t>(std::floor(max_range_m / range_step_m + 1e-9));
  profile.points.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double s = static_cast<double>(k) * range_step_m;
    const double x = origin_x_m + s * dx;
    const double y = origin_y_m + s * dy;
    const double ux = (x - grid.origin_x_m) / grid.cell_size_m;
    const double uy = (y - grid.origin_y_m) / grid.cell_size_m;
    if (ux < 0.0 || uy < 0.0 || ux > static_cast<double>(grid.n_cols - 1) ||
        uy > static_cast<double>(grid.n_rows - 1))
      fail(s, "ray leaves the elevation grid");

    auto c0 = static_cast<std::size_t>(ux);
    auto r0 = static_cast<std::size_t>(uy);
    if (c0 >= grid.n_cols - 1) c0 = grid.n_cols - 2;
    if (r0 >= grid.n_rows - 1) r0 = grid.n_rows - 2;
    const double tx = ux - static_cast<double>(c0);
    const double ty = uy - static_cast<double>(r0);

    const double w00 = (1.0 - tx) * (1.0 - ty);
    const double w01 = tx * (1.0 - ty);
    const double w10 = (1.0 - tx) * ty;
    const double w11 = tx * ty;
    const double v00 = grid.at(r0, c0), v01 = grid.at(r0, c0 + 1);
    const double v10 = grid.at(r0 + 1, c0), v11 = grid.at(r0 + 1, c0 + 1);
    // nodata matters only where it would actually contribute
    if ((w00 > 0.0 && v00 == grid.nodata) || (w01 > 0.0 && v01 == grid.nodata) ||
        (w10 > 0.0 && v10 == grid.nodata) || (w11 > 0.0 && v11 == grid.nodata))
      fail(s, "nodata cell inside the sampling corridor");

    profile.points.push_back({s, w00 * v00 + w01 * v01 + w10 * v10 + w11 * v11});
  }
  return profile;
}

VolumeResult run_volume(const Scenario& scenario, const ElevationGrid& grid,
                        const AzimuthFan& fan, bool parallel) {
  {
    std::vector<std::string> issues;
    if (fan.azimuths_deg.empty()) issues.push_back("fan: at least one azimuth required");
    std::set<double> uniq(fan.azimuths_deg.begin(), fan.azimuths_deg.end());
    if (uniq.size() != fan.azimuths_deg.size())
      issues.push_back("fan: azimuths must be distinct");
    if (!(fan.range_step_m > 0.0)) issues.push_back("fan: range_step must be positive");
    if (!(fan.max_range_m > 0.0)) issues.push_back("fan: max_range must be positive");
    if (!issues.empty()) throw ValidationError(std::move(issues));
  }

  const int n = static_cast<int>(fan.azimuths_deg.size());
  std::vector<VolumeSlice> slices(n);
  std::vector<std::string> errors(n);
  std::vector<char> ok(n, 0);

  const auto run_one = [&](int i) {
    try {
      Scenario s = scenario;
      s.terrain = sample_terrain_along_azimuth(grid, fan.origin_x_m, fan.origin_y_m,
                                               fan.azimuths_deg[i], fan.max_range_m,
                                               fan.range_step_m);
      s.terrain.compositions = scenario.terrain.compositions;
      PeRunResult rr = run_pe(s);
      slices[i] = {fan.azimuths_deg[i], std::move(rr.ppf)};
      ok[i] = 1;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "azimuth " << fan.azimuths_deg[i] << " deg failed: " << e.what();
      errors[i] = os.str();
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    for (int i = 0; i < n; ++i) run_one(i);
  }

  VolumeResult out;
  for (int i = 0; i < n; ++i) {
    if (ok[i])
      out.slices.push_back(std::move(slices[i]));
    else
      out.errors.push_back(errors[i]);
  }
  return out;
}

std::vector<std::string> export_volume(const VolumeResult& volume, const std::string& out_dir,
                                       const std::string& digest) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<std::string> files;
  nlohmann::json manifest;
  manifest["scenario_digest"] = digest;
  manifest["partial"] = volume.partial();
  manifest["errors"] = volume.errors;
  manifest["azimuths_deg"] = nlohmann::json::array();
  manifest["files"] = nlohmann::json::array();

  for (const auto& slice : volume.slices) {
    char name[64];
    std::snprintf(name, sizeof(name), "az%+09.3f.grid.txt", slice.azimuth_deg);
    const fs::path path = fs::path(out_dir) / name;

    std::ofstream f(path);
    f << format_plot_grid(slice.ppf.heights_m, slice.ppf.ranges_m, slice.ppf.amplitude_db,
                          "amplitude_db");
    f.close();

    files.push_back(path.string());
    manifest["azimuths_deg"].push_back(slice.azimuth_deg);
    manifest["files"].push_back(name);

    if (manifest.find("window") == manifest.end()) {
      manifest["window"] = {{"heights_m", slice.ppf.heights_m},
                            {"ranges_m", slice.ppf.ranges_m}};
    }
  }

  const fs::path mpath = fs::path(out_dir) / "volume_manifest.json";
  manifest["files"].push_back("volume_manifest.json");
  std::ofstream mf(mpath);
  mf << manifest.dump(2) << '\n';
  mf.close();
  files.push_back(mpath.string());
  return files;
}

std::string format_plot_grid(const std::vector<double>& heights_m,
                             const std::vector<double>& ranges_m, const Grid& values,
                             const std::string& label) {
  std::ostringstream os;
  os << "# " << label << "; ranges_m:";
  for (double r : ranges_m) os << ' ' << fmt_num(r);
  os << '\n';
  for (std::size_t ih = 0; ih < heights_m.size(); ++ih) {
    os << fmt_num(heights_m[ih]);
    for (std::size_t ir = 0; ir < ranges_m.size(); ++ir)
      os << ' ' << fmt_num(values.at(ih, ir));
    os << '\n';
  }
  return os.str();
}

}  // namespace ppf
