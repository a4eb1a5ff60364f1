#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sobolev/gradient.hpp"

namespace sobolev {

/// sign(x) * max(|x| - t, 0): the proximal map of t|.|.
inline double soft_threshold(double x, double t) {
  const double mag = std::abs(x) - t;
  return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

/// Componentwise soft threshold of both gradient components (anisotropic TV).
inline GradientField shrink(const GradientField& field, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("shrink threshold must be >= 0");
  GradientField out = field;
  for (double& v : out.dx.pixels()) v = soft_threshold(v, threshold);
  for (double& v : out.dy.pixels()) v = soft_threshold(v, threshold);
  return out;
}

/// Pixelwise shrinkage of the vector (dx, dy) (isotropic TV variant).
inline GradientField shrink_isotropic(const GradientField& field, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("shrink threshold must be >= 0");
  GradientField out = field;
  for (std::size_t i = 0; i < out.dx.size(); ++i) {
    const double mag = std::hypot(out.dx[i], out.dy[i]);
    const double scale = mag > threshold ? (mag - threshold) / mag : 0.0;
    out.dx[i] *= scale;
    out.dy[i] *= scale;
  }
  return out;
}

}  // namespace sobolev
