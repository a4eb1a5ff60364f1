#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sobolev/fft.hpp"
#include "sobolev/frequency.hpp"
#include "sobolev/image.hpp"
#include "sobolev/multiplier.hpp"

namespace sobolev {

namespace detail {

inline void check_pde_order(int s) {
  if (s != 1 && s != 2) throw std::invalid_argument("PDE norms support s in {1, 2}");
}

// Neumann forward differences along columns (x): width-1 entries per row.
inline std::vector<double> neumann_dx(const std::vector<double>& u, std::size_t w, std::size_t h,
                                      double inv_h) {
  std::vector<double> out;
  if (w < 2) return out;
  out.reserve((w - 1) * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c + 1 < w; ++c) out.push_back((u[r * w + c + 1] - u[r * w + c]) * inv_h);
  }
  return out;
}

// Neumann forward differences along rows (y): height-1 rows of width entries.
inline std::vector<double> neumann_dy(const std::vector<double>& u, std::size_t w, std::size_t h,
                                      double inv_h) {
  std::vector<double> out;
  if (h < 2) return out;
  out.reserve(w * (h - 1));
  for (std::size_t r = 0; r + 1 < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out.push_back((u[(r + 1) * w + c] - u[r * w + c]) * inv_h);
  }
  return out;
}

// Transpose of neumann_dx: maps (w-1) x h differences back to w x h.
inline std::vector<double> neumann_dx_t(const std::vector<double>& g, std::size_t w, std::size_t h,
                                        double inv_h) {
  std::vector<double> out(w * h, 0.0);
  if (w < 2) return out;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c + 1 < w; ++c) {
      const double v = g[r * (w - 1) + c] * inv_h;
      out[r * w + c + 1] += v;
      out[r * w + c] -= v;
    }
  }
  return out;
}

inline std::vector<double> neumann_dy_t(const std::vector<double>& g, std::size_t w, std::size_t h,
                                        double inv_h) {
  std::vector<double> out(w * h, 0.0);
  if (h < 2) return out;
  for (std::size_t r = 0; r + 1 < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double v = g[r * w + c] * inv_h;
      out[(r + 1) * w + c] += v;
      out[r * w + c] -= v;
    }
  }
  return out;
}

inline double sum_sq(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

}  // namespace detail

/// W^{s,2} norm from its definition: sqrt(sum_{|alpha| <= s} ||D^alpha f||^2),
/// every derivative a Neumann finite difference (no transform involved).
/// Second derivatives along one axis are D^T D of the first-difference
/// operator; the mixed term is Dy Dx.
inline double pde_norm(const Image& img, int s, double spacing = 1.0) {
  detail::check_pde_order(s);
  if (!(spacing > 0.0)) throw std::invalid_argument("pixel spacing must be positive");
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const double inv_h = 1.0 / spacing;
  const std::vector<double>& u = img.vector();

  double acc = detail::sum_sq(u);
  const std::vector<double> dx = detail::neumann_dx(u, w, h, inv_h);
  const std::vector<double> dy = detail::neumann_dy(u, w, h, inv_h);
  acc += detail::sum_sq(dx) + detail::sum_sq(dy);
  if (s == 2) {
    acc += detail::sum_sq(detail::neumann_dx_t(dx, w, h, inv_h));
    acc += detail::sum_sq(detail::neumann_dy_t(dy, w, h, inv_h));
    if (w >= 2) acc += detail::sum_sq(detail::neumann_dy(dx, w - 1, h, inv_h));
  }
  return std::sqrt(acc);
}

/// ||f||_{H^{-s}} through the Neumann problem L^s u = f:
/// solve by DCT diagonalization of L^s = sum_{|alpha|<=s} (-1)^{|alpha|} D^{2 alpha},
/// then return sqrt(<u, f>).
inline double pde_dual_norm(const Image& img, int s, double spacing = 1.0) {
  detail::check_pde_order(s);
  const FrequencyGrid grid = make_frequency_grid(Basis::dct_neumann, img.width(), img.height(), spacing);
  Image coeffs = fft::forward_dct(img);
  for (std::size_t r = 0; r < grid.height; ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      coeffs(r, c) /= detail::pde_symbol(s, grid.row_sq[r], grid.col_sq[c]);
    }
  }
  const Image u = fft::inverse_dct(coeffs);
  const double inner = dot(u, img);
  return std::sqrt(inner > 0.0 ? inner : 0.0);
}

}  // namespace sobolev
