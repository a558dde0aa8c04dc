#include <random>

#include "doctest.h"
#include "naive_dst.hpp"
#include "ppf/sine_transform.hpp"

using namespace ppf;

namespace {

std::vector<std::complex<double>> random_column(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> col(n);
  for (auto& v : col) v = {dist(rng), dist(rng)};
  col[0] = 0.0;
  return col;
}

double rel_err(const std::vector<std::complex<double>>& a,
               const std::vector<std::complex<double>>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("matches the naive serial reference") {
  for (std::size_t n : {8u, 64u, 256u}) {
    SineTransform t(n);
    auto col = random_column(n, 42 + static_cast<unsigned>(n));
    const auto expect = naive_sine_transform(col);
    t.apply(col);
    CHECK(rel_err(col, expect) < 1e-12);
  }
}

TEST_CASE("round trip scales by 2N") {
  const std::size_t n = 128;
  SineTransform t(n);
  const auto original = random_column(n, 9);
  auto col = original;
  t.apply(col);
  t.apply(col);
  for (auto& v : col) v /= t.round_trip_scale();
  CHECK(rel_err(col, original) < 1e-12);
}

TEST_CASE("ground bin is forced to zero") {
  const std::size_t n = 64;
  SineTransform t(n);
  auto col = random_column(n, 1);
  col[0] = {3.0, 4.0};
  t.apply(col);
  CHECK(col[0] == std::complex<double>(0.0, 0.0));
}

TEST_CASE("norm scaling of the unnormalized transform") {
  // The matrix is 2*S with S*S = (N/2) I, so ||apply(x)||^2 == 2N ||x||^2.
  const std::size_t n = 64;
  SineTransform t(n);
  auto col = random_column(n, 5);
  double before = 0.0;
  for (const auto& v : col) before += std::norm(v);
  t.apply(col);
  double after = 0.0;
  for (const auto& v : col) after += std::norm(v);
  CHECK(after == doctest::Approx(2.0 * n * before).epsilon(1e-12));
}

TEST_CASE("rejects invalid sizes") {
  CHECK_THROWS_AS(SineTransform(0), std::invalid_argument);
  CHECK_THROWS_AS(SineTransform(2), std::invalid_argument);
  CHECK_THROWS_AS(SineTransform(100), std::invalid_argument);
  SineTransform ok(4);
  std::vector<std::complex<double>> wrong(5);
  CHECK_THROWS_AS(ok.apply(wrong), std::invalid_argument);
}
