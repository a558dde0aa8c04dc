#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ppf {

/// Type-I discrete sine transform over the interior bins of a vertical field
/// column. The column has `size` bins; bin 0 sits on the ground where the
/// sine basis vanishes, so the transform reads and writes bins 1..size-1 and
/// forces bin 0 to zero. The implicit bin at z_max is zero as well.
///
/// The transform is unnormalized and self-inverse up to round_trip_scale():
/// applying it twice multiplies the column by 2*size. The free-space
/// propagator's f_norm compensates exactly that factor.
///
/// Backed by FFTW (RODFT00) with per-instance plan and buffers; one instance
/// per marching run, instances are not shared across threads.
class SineTransform {
 public:
  explicit SineTransform(std::size_t size);
  ~SineTransform();

  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  std::size_t size() const { return size_; }
  double round_trip_scale() const { return 2.0 * static_cast<double>(size_); }

  void apply(std::vector<std::complex<double>>& column) const;

 private:
  std::size_t size_;
  double* buf_in_;
  double* buf_out_;
  void* plan_;  // fftw_plan
};

}  // namespace ppf
