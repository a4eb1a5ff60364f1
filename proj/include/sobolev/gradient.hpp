#pragma once

#include <cmath>
#include <cstddef>

#include "sobolev/image.hpp"

namespace sobolev {

/// Discrete gradient D u = [Dx u; Dy u], periodic forward differences.
struct GradientField {
  Image dx;  ///< u(r, c+1) - u(r, c), column index wrapping
  Image dy;  ///< u(r+1, c) - u(r, c), row index wrapping

  std::size_t width() const noexcept { return dx.width(); }
  std::size_t height() const noexcept { return dx.height(); }

  GradientField& operator+=(const GradientField& o) {
    dx += o.dx;
    dy += o.dy;
    return *this;
  }
  GradientField& operator-=(const GradientField& o) {
    dx -= o.dx;
    dy -= o.dy;
    return *this;
  }
  friend GradientField operator+(GradientField a, const GradientField& b) { return a += b; }
  friend GradientField operator-(GradientField a, const GradientField& b) { return a -= b; }
};

inline GradientField zero_field(std::size_t width, std::size_t height) {
  return {Image(width, height, 0.0), Image(width, height, 0.0)};
}

inline double dot(const GradientField& a, const GradientField& b) {
  return dot(a.dx, b.dx) + dot(a.dy, b.dy);
}

inline double l2_norm(const GradientField& g) {
  return std::sqrt(squared_norm(g.dx) + squared_norm(g.dy));
}

inline double l1_norm(const GradientField& g) {
  double acc = 0.0;
  for (double v : g.dx.pixels()) acc += std::abs(v);
  for (double v : g.dy.pixels()) acc += std::abs(v);
  return acc;
}

/// sum over pixels of sqrt(dx^2 + dy^2).
inline double isotropic_norm(const GradientField& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.dx.size(); ++i) acc += std::hypot(g.dx[i], g.dy[i]);
  return acc;
}

inline GradientField grad(const Image& u) {
  const std::size_t w = u.width();
  const std::size_t h = u.height();
  GradientField g = zero_field(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rn = r + 1 == h ? 0 : r + 1;
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t cn = c + 1 == w ? 0 : c + 1;
      g.dx(r, c) = u(r, cn) - u(r, c);
      g.dy(r, c) = u(rn, c) - u(r, c);
    }
  }
  return g;
}

/// div = -D^T (backward differences), so <D u, g> = -<u, div g> and
/// -div(grad u) is the periodic 5-point Laplacian.
inline Image div(const GradientField& g) {
  require_same_shape(g.dx, g.dy, "div");
  const std::size_t w = g.width();
  const std::size_t h = g.height();
  Image out(w, h, 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rp = r == 0 ? h - 1 : r - 1;
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t cp = c == 0 ? w - 1 : c - 1;
      out(r, c) = (g.dx(r, c) - g.dx(r, cp)) + (g.dy(r, c) - g.dy(rp, c));
    }
  }
  return out;
}

}  // namespace sobolev
