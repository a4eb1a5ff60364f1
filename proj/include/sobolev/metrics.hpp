#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sobolev/image.hpp"

namespace sobolev {

/// A PSNR value in dB. `exact` marks a zero reconstruction error, in which
/// case `db` holds +infinity in memory; writers print "exact" instead.
struct Psnr {
  double db = 0.0;
  bool exact = false;

  friend bool operator<(const Psnr& a, const Psnr& b) { return a.db < b.db; }
};

inline double l2_error(const Image& restored, const Image& truth) {
  require_same_shape(restored, truth, "l2_error");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = restored[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace detail {
inline double peak(const Image& truth) {
  const double m = truth.max();
  if (!(m > 0.0)) throw std::invalid_argument("PSNR needs a truth image with a positive peak");
  return m;
}
}  // namespace detail

/// 20 log10(N M / ||restored - truth||_2^2), with N the pixel count and M the
/// peak of the truth. The squared norm in the denominator is intentional.
inline Psnr paper_psnr(const Image& restored, const Image& truth) {
  const double e = l2_error(restored, truth);
  const double peak = detail::peak(truth);
  if (e == 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double n = static_cast<double>(truth.size());
  return {20.0 * std::log10(n * peak / (e * e)), false};
}

/// Conventional 10 log10(M^2 / MSE).
inline Psnr standard_psnr(const Image& restored, const Image& truth) {
  const double e = l2_error(restored, truth);
  const double peak = detail::peak(truth);
  if (e == 0.0) return {std::numeric_limits<double>::infinity(), true};
  const double mse = e * e / static_cast<double>(truth.size());
  return {10.0 * std::log10(peak * peak / mse), false};
}

struct Metrics {
  Psnr paper_psnr;
  Psnr standard_psnr;
  double l2_error = 0.0;
};

inline Metrics compute_metrics(const Image& restored, const Image& truth) {
  return {paper_psnr(restored, truth), standard_psnr(restored, truth), l2_error(restored, truth)};
}

}  // namespace sobolev
