// Benchmark comparing the fast kernels against their serial references:
// FFT-backed sine transform vs the naive O(N^2) reference, and the OpenMP
// grid/fan paths vs the serial loops.

#include <chrono>
#include <cstdio>
#include <random>

#include "naive_dst.hpp"
#include "ppf/fe_model.hpp"
#include "ppf/pseudo3d.hpp"
#include "ppf/sine_transform.hpp"

using namespace ppf;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn, int repeats = 1) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < repeats; ++i) fn();
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count() /
         repeats;
}

std::vector<std::complex<double>> random_column(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> col(n);
  for (auto& v : col) v = {dist(rng), dist(rng)};
  col[0] = 0.0;
  return col;
}

Scenario bench_scenario() {
  Scenario s;
  s.source.frequency_mhz = 2800.0;
  s.source.antenna_height_m = 15.0;
  s.output = {5.0, 200.0, 20.0, 60, 100};
  s.refractivity.profiles = {{0.0, {{0.0, 330.0}}}};
  s.terrain.compositions = {{0.0, 0, 15.0, 0.012}};
  s.pe.transform_size = 1024;
  s.pe.z_max_m = 512.0;
  s.pe.delta_r_m = 50.0;
  return s;
}

}  // namespace

int main() {
  std::printf("%-44s %12s %12s %8s\n", "kernel", "serial ms", "fast ms", "speedup");

  for (std::size_t n : {256u, 1024u, 4096u}) {
    auto col = random_column(n, 7);
    const int reps = n <= 256 ? 200 : (n <= 1024 ? 50 : 10);

    volatile double sink = 0.0;
    const double naive_ms = time_ms(
        [&] {
          auto out = naive_sine_transform(col);
          sink = sink + out[1].real();
        },
        reps);

    SineTransform t(n);
    const double fast_ms = time_ms(
        [&] {
          auto work = col;
          t.apply(work);
          sink = sink + work[1].real();
        },
        reps * 10);

    char label[64];
    std::snprintf(label, sizeof(label), "sine transform N=%zu (naive vs FFT)", n);
    std::printf("%-44s %12.3f %12.4f %7.1fx\n", label, naive_ms, fast_ms,
                naive_ms / fast_ms);
  }

  {
    const Scenario s = bench_scenario();
    const double serial_ms = time_ms([&] { run_fe(s, false); }, 3);
    const double parallel_ms = time_ms([&] { run_fe(s, true); }, 3);
    std::printf("%-44s %12.2f %12.2f %7.1fx\n", "flat-earth grid (serial vs OpenMP)",
                serial_ms, parallel_ms, serial_ms / parallel_ms);
  }

  {
    const Scenario s = bench_scenario();
    ElevationGrid grid;
    grid.n_rows = grid.n_cols = 120;
    grid.cell_size_m = 200.0;
    grid.heights.assign(grid.n_rows * grid.n_cols, 0.0);
    for (std::size_t r = 0; r < grid.n_rows; ++r)
      for (std::size_t c = 0; c < grid.n_cols; ++c)
        grid.heights[r * grid.n_cols + c] = 3.0 + 2e-3 * static_cast<double>(r * c);

    AzimuthFan fan;
    fan.origin_x_m = 12000.0;
    fan.origin_y_m = 1000.0;
    for (int i = 0; i < 8; ++i) fan.azimuths_deg.push_back(-14.0 + 4.0 * i);
    fan.max_range_m = s.output.max_range_m();
    fan.range_step_m = 200.0;

    const double serial_ms = time_ms([&] { run_volume(s, grid, fan, false); });
    const double parallel_ms = time_ms([&] { run_volume(s, grid, fan, true); });
    std::printf("%-44s %12.1f %12.1f %7.1fx\n", "pseudo-3D fan, 8 azimuths (serial vs OpenMP)",
                serial_ms, parallel_ms, serial_ms / parallel_ms);
  }

  return 0;
}
