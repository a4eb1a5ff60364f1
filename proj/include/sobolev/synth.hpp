#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sobolev/image.hpp"

namespace sobolev {

enum class SynthName { square, circles, shape };

inline SynthName parse_synth_name(std::string_view name) {
  if (name == "square") return SynthName::square;
  if (name == "circles") return SynthName::circles;
  if (name == "shape") return SynthName::shape;
  throw std::invalid_argument("unknown synthetic image '" + std::string(name) + "'");
}

inline const char* to_string(SynthName name) {
  switch (name) {
    case SynthName::square: return "square";
    case SynthName::circles: return "circles";
    case SynthName::shape: return "shape";
  }
  return "?";
}

inline constexpr std::size_t kMinSynthSize = 16;

namespace detail {

struct Disk {
  double cx, cy, radius, value;  // centre in [0,1]^2, radius as fraction of min(width, height)
};

// Pixel centres are sampled at ((col + 0.5) / width, (row + 0.5) / height).
inline void paint_disk(Image& img, const Disk& d) {
  const double w = static_cast<double>(img.width());
  const double h = static_cast<double>(img.height());
  const double r = d.radius * std::min(w, h);
  for (std::size_t row = 0; row < img.height(); ++row) {
    for (std::size_t col = 0; col < img.width(); ++col) {
      const double dx = (static_cast<double>(col) + 0.5) - d.cx * w;
      const double dy = (static_cast<double>(row) + 0.5) - d.cy * h;
      if (dx * dx + dy * dy <= r * r) img(row, col) = d.value;
    }
  }
}

struct Point {
  double x, y;
};

// Convex polygon in normalized coordinates, either winding.
template <std::size_t N>
void paint_convex_polygon(Image& img, const std::array<Point, N>& poly, double value) {
  for (std::size_t row = 0; row < img.height(); ++row) {
    for (std::size_t col = 0; col < img.width(); ++col) {
      const double px = (static_cast<double>(col) + 0.5) / static_cast<double>(img.width());
      const double py = (static_cast<double>(row) + 0.5) / static_cast<double>(img.height());
      bool any_positive = false;
      bool any_negative = false;
      for (std::size_t i = 0; i < N; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % N];
        const double cross = (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
        any_positive = any_positive || cross > 0.0;
        any_negative = any_negative || cross < 0.0;
      }
      if (!(any_positive && any_negative)) img(row, col) = value;
    }
  }
}

}  // namespace detail

/// Deterministic piecewise-constant test images with values in [0, 1].
///
/// square:  white (1) background, centred black (0) square of side floor(width/3);
///          top-left corner at ((height-side)/2, (width-side)/2), integer division.
/// circles: black background with four overlapping disks of levels 1, 0.7, 0.45, 1.
/// shape:   grey (0.2) background with a rectangle, a triangle, a disk and a
///          black diamond.
/// The geometry below is frozen; changing it invalidates stored fixtures.
inline Image synth_image(SynthName name, std::size_t width, std::size_t height) {
  if (width < kMinSynthSize || height < kMinSynthSize) {
    throw DimensionError("synthetic images need width and height >= 16");
  }
  switch (name) {
    case SynthName::square: {
      Image img(width, height, 1.0);
      const std::size_t side = width / 3;
      const std::size_t rows = std::min(side, height);
      const std::size_t top = (height - rows) / 2;
      const std::size_t left = (width - side) / 2;
      for (std::size_t r = top; r < top + rows; ++r) {
        for (std::size_t c = left; c < left + side; ++c) img(r, c) = 0.0;
      }
      return img;
    }
    case SynthName::circles: {
      Image img(width, height, 0.0);
      detail::paint_disk(img, {0.30, 0.30, 0.18, 1.0});
      detail::paint_disk(img, {0.70, 0.32, 0.14, 0.7});
      detail::paint_disk(img, {0.50, 0.72, 0.20, 0.45});
      detail::paint_disk(img, {0.78, 0.78, 0.08, 1.0});
      return img;
    }
    case SynthName::shape: {
      Image img(width, height, 0.2);
      detail::paint_convex_polygon<4>(
          img, {{{0.12, 0.15}, {0.12, 0.55}, {0.45, 0.55}, {0.45, 0.15}}}, 0.9);
      detail::paint_convex_polygon<3>(img, {{{0.55, 0.15}, {0.72, 0.50}, {0.90, 0.15}}}, 0.6);
      detail::paint_disk(img, {0.32, 0.76, 0.15, 1.0});
      detail::paint_convex_polygon<4>(
          img, {{{0.75, 0.62}, {0.62, 0.75}, {0.75, 0.88}, {0.88, 0.75}}}, 0.0);
      return img;
    }
  }
  throw std::invalid_argument("unknown synthetic image");
}

}  // namespace sobolev
