#include "ppf/sine_transform.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ppf {

namespace {
// The FFTW planner is not thread-safe; plan creation and destruction are
// serialized. Execution on distinct plans/buffers needs no lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SineTransform::SineTransform(std::size_t size) : size_(size) {
  if (size < 4 || (size & (size - 1)) != 0)
    throw std::invalid_argument("transform size must be a power of two >= 4");
  const int n = static_cast<int>(size - 1);
  buf_in_ = fftw_alloc_real(n);
  buf_out_ = fftw_alloc_real(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_r2r_1d(n, buf_in_, buf_out_, FFTW_RODFT00, FFTW_ESTIMATE);
}

SineTransform::~SineTransform() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

void SineTransform::apply(std::vector<std::complex<double>>& column) const {
  if (column.size() != size_)
    throw std::invalid_argument("sine transform: column size mismatch");
  const std::size_t n = size_ - 1;
  const auto plan = static_cast<fftw_plan>(plan_);

  for (std::size_t j = 0; j < n; ++j) buf_in_[j] = column[j + 1].real();
  fftw_execute(plan);
  for (std::size_t j = 0; j < n; ++j)
    column[j + 1] = {buf_out_[j], column[j + 1].imag()};

  for (std::size_t j = 0; j < n; ++j) buf_in_[j] = column[j + 1].imag();
  fftw_execute(plan);
  for (std::size_t j = 0; j < n; ++j)
    column[j + 1] = {column[j + 1].real(), buf_out_[j]};

  column[0] = 0.0;
}

}  // namespace ppf
