#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sobolev {

/// Square convolution kernel, taps row-major, centre at (size/2, size/2).
struct BlurKernel {
  std::size_t size = 1;
  double sigma = 0.0;
  std::vector<double> taps{1.0};

  double at(std::size_t row, std::size_t col) const { return taps[row * size + col]; }
  std::size_t radius() const noexcept { return size / 2; }
};

/// Same taps as MATLAB's fspecial('gaussian', size, sigma): the Gaussian
/// exp(-(x^2 + y^2) / (2 sigma^2)) sampled on centred integer offsets and
/// divided by its sum. Taps below eps * max are zeroed first, as fspecial does.
inline BlurKernel gaussian_kernel(std::size_t size, double sigma) {
  if (size == 0 || size % 2 == 0) throw std::invalid_argument("kernel size must be odd and positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("kernel sigma must be positive");
  BlurKernel k;
  k.size = size;
  k.sigma = sigma;
  k.taps.assign(size * size, 0.0);
  const double half = static_cast<double>(size - 1) / 2.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double y = static_cast<double>(r) - half;
      const double x = static_cast<double>(c) - half;
      const double v = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      k.taps[r * size + c] = v;
    }
  }
  // The unnormalized peak is exactly 1 (centre offset 0).
  for (double& v : k.taps) {
    if (v < std::numeric_limits<double>::epsilon()) v = 0.0;
    sum += v;
  }
  for (double& v : k.taps) v /= sum;
  return k;
}

}  // namespace sobolev
