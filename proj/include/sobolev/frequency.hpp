#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sobolev/fft.hpp"

namespace sobolev {

/// Transform basis in which a Sobolev weight is diagonal.
enum class Basis {
  dft_periodic,  ///< periodic boundary, real DFT, continuum symbol |xi|^2
  dct_neumann,   ///< zero-Neumann boundary, DCT-II, discrete Laplacian eigenvalues
  pde_integer,   ///< DCT basis with the W^{k,2} operator sum_{|a|<=k} D^{2a} (integer orders)
};

inline Basis parse_basis(std::string_view s) {
  if (s == "dft_periodic" || s == "dft") return Basis::dft_periodic;
  if (s == "dct_neumann" || s == "dct") return Basis::dct_neumann;
  if (s == "pde_integer" || s == "pde") return Basis::pde_integer;
  throw std::invalid_argument("unknown basis '" + std::string(s) + "'");
}

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::dft_periodic: return "dft_periodic";
    case Basis::dct_neumann: return "dct_neumann";
    case Basis::pde_integer: return "pde_integer";
  }
  return "?";
}

/// Per-coefficient |xi|^2 on a grid of the given basis.
///
/// Layout follows the transform: for dft_periodic the half spectrum
/// (height rows, width/2+1 columns) with row index mapped to a signed
/// frequency; for the DCT-based bases the full height x width grid.
///
/// dft_periodic: |xi|^2 = (2 pi k / (m h))^2 + (2 pi l / (n h))^2
/// dct_*:        |xi|^2 = (2 - 2 cos(pi k / m)) / h^2 + (2 - 2 cos(pi l / n)) / h^2
/// with h the pixel spacing (1 unless an experiment pins another value).
struct FrequencyGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  Basis basis = Basis::dft_periodic;
  double spacing = 1.0;
  std::vector<double> row_sq;  ///< per-row axis contribution, size height
  std::vector<double> col_sq;  ///< per-column axis contribution, size cols()
  std::vector<double> xi_sq;   ///< row_sq[r] + col_sq[c], row-major

  std::size_t cols() const noexcept {
    return basis == Basis::dft_periodic ? fft::half_columns(width) : width;
  }
};

inline FrequencyGrid make_frequency_grid(Basis basis, std::size_t width, std::size_t height,
                                         double spacing = 1.0) {
  if (width == 0 || height == 0) throw DimensionError("frequency grid needs positive dimensions");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("pixel spacing must be positive");
  }
  FrequencyGrid grid;
  grid.width = width;
  grid.height = height;
  grid.basis = basis;
  grid.spacing = spacing;
  const double inv_h2 = 1.0 / (spacing * spacing);

  auto periodic = [&](std::size_t index, std::size_t n) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(fft::signed_frequency(index, n)) /
                      static_cast<double>(n);
    return xi * xi * inv_h2;
  };
  auto neumann = [&](std::size_t index, std::size_t n) {
    return (2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(index) / static_cast<double>(n))) *
           inv_h2;
  };

  grid.row_sq.resize(height);
  grid.col_sq.resize(grid.cols());
  for (std::size_t r = 0; r < height; ++r) {
    grid.row_sq[r] = basis == Basis::dft_periodic ? periodic(r, height) : neumann(r, height);
  }
  for (std::size_t c = 0; c < grid.cols(); ++c) {
    grid.col_sq[c] = basis == Basis::dft_periodic ? periodic(c, width) : neumann(c, width);
  }
  grid.xi_sq.resize(height * grid.cols());
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      grid.xi_sq[r * grid.cols() + c] = grid.row_sq[r] + grid.col_sq[c];
    }
  }
  return grid;
}

}  // namespace sobolev
