#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ppf/pe_engine.hpp"
#include "ppf/scenario_io.hpp"

namespace ppf {

/// Local planar elevation raster. Row 0 starts at origin_y and rows grow
/// northward (+y); column 0 starts at origin_x and columns grow eastward (+x).
struct ElevationGrid {
  double origin_x_m = 0.0;
  double origin_y_m = 0.0;
  double cell_size_m = 0.0;
  double nodata = -9999.0;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;
  std::vector<double> heights;  // row-major

  double at(std::size_t row, std::size_t col) const { return heights[row * n_cols + col]; }
};

ElevationGrid read_elevation_grid(const std::string& text);
std::string write_elevation_grid(const ElevationGrid& grid);

/// Straight rays from one origin, azimuths in degrees clockwise from +y.
struct AzimuthFan {
  double origin_x_m = 0.0;
  double origin_y_m = 0.0;
  std::vector<double> azimuths_deg;  // distinct
  double max_range_m = 0.0;
  double range_step_m = 0.0;
};

/// Bilinear terrain samples along one azimuth ray at each range step.
/// Throws std::out_of_range naming the azimuth when the ray leaves the grid
/// or crosses nodata cells.
TerrainProfile sample_terrain_along_azimuth(const ElevationGrid& grid, double origin_x_m,
                                            double origin_y_m, double azimuth_deg,
                                            double max_range_m, double range_step_m);

struct VolumeSlice {
  double azimuth_deg = 0.0;
  PpfResult ppf;
};

struct VolumeResult {
  std::vector<VolumeSlice> slices;  // fan order, failed azimuths omitted
  std::vector<std::string> errors;  // one entry per failed azimuth
  bool partial() const { return !errors.empty(); }
};

/// Runs the 2D engine once per azimuth over the sampled terrain. Slices are
/// independent; `parallel` selects the OpenMP fan over the serial loop and
/// never changes results. Per-azimuth failures are collected, the rest of the
/// fan still runs.
VolumeResult run_volume(const Scenario& scenario, const ElevationGrid& grid,
                        const AzimuthFan& fan, bool parallel = true);

/// One amplitude plot grid per azimuth plus a manifest naming every file.
/// Returns the list of files written (manifest last).
std::vector<std::string> export_volume(const VolumeResult& volume, const std::string& out_dir,
                                       const std::string& digest);

/// Plot-ready delimited text: a '#' header line listing the ranges, then one
/// row per height (leading height value, one column per range).
std::string format_plot_grid(const std::vector<double>& heights_m,
                             const std::vector<double>& ranges_m, const Grid& values,
                             const std::string& label);

}  // namespace ppf
