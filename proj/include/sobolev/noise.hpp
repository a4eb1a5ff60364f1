#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sobolev/fft.hpp"
#include "sobolev/image.hpp"
#include "sobolev/rng.hpp"

namespace sobolev {

enum class NoiseKind { gaussian_white, lowpass_gaussian };

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "gaussian_white" || s == "white") return NoiseKind::gaussian_white;
  if (s == "lowpass_gaussian" || s == "lowpass") return NoiseKind::lowpass_gaussian;
  throw std::invalid_argument("unknown noise kind '" + std::string(s) + "'");
}

inline const char* to_string(NoiseKind k) {
  return k == NoiseKind::gaussian_white ? "gaussian_white" : "lowpass_gaussian";
}

struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian_white;
  double sigma = 0.0;
  double cutoff = 0.05;  ///< normalized frequency (cycles/pixel), lowpass only
  std::uint64_t seed = 0;

  void validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise sigma must be >= 0");
    if (kind == NoiseKind::lowpass_gaussian && !(cutoff > 0.0 && cutoff <= 0.5)) {
      throw std::invalid_argument("lowpass cutoff must lie in (0, 0.5]");
    }
  }
};

/// The noise field alone (same shape as the target image).
///
/// gaussian_white: i.i.d. N(0, sigma^2) in row-major order from NormalSampler(seed).
/// lowpass_gaussian: white N(0,1) field from the same sampler, filtered in the
/// DFT domain by exp(-nu^2 / (2 cutoff^2)) with nu the radial frequency in
/// cycles/pixel, then rescaled so its sample standard deviation is sigma.
inline Image make_noise(std::size_t width, std::size_t height, const NoiseSpec& spec) {
  spec.validate();
  Image noise(width, height, 0.0);
  if (spec.sigma == 0.0) return noise;
  NormalSampler normal(spec.seed);
  const double amplitude = spec.kind == NoiseKind::gaussian_white ? spec.sigma : 1.0;
  for (double& v : noise.pixels()) v = amplitude * normal();
  if (spec.kind == NoiseKind::gaussian_white) return noise;

  fft::HalfSpectrum spec_f = fft::forward_dft(noise);
  const double two_c2 = 2.0 * spec.cutoff * spec.cutoff;
  for (std::size_t r = 0; r < height; ++r) {
    const double fy = static_cast<double>(fft::signed_frequency(r, height)) / static_cast<double>(height);
    for (std::size_t c = 0; c < spec_f.cols(); ++c) {
      const double fx = static_cast<double>(c) / static_cast<double>(width);
      spec_f(r, c) *= std::exp(-(fx * fx + fy * fy) / two_c2);
    }
  }
  Image filtered = fft::inverse_dft(spec_f);
  const double mean = filtered.mean();
  double var = 0.0;
  for (double v : filtered.pixels()) var += (v - mean) * (v - mean);
  const double stddev = std::sqrt(var / static_cast<double>(filtered.size()));
  if (stddev > 0.0) filtered *= spec.sigma / stddev;
  return filtered;
}

/// Additive noise, no clipping. Identical spec (seed included) gives
/// bitwise-identical output.
inline Image add_noise(const Image& img, const NoiseSpec& spec) {
  return img + make_noise(img.width(), img.height(), spec);
}

}  // namespace sobolev
