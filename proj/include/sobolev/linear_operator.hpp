#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/fft.hpp"
#include "sobolev/frequency.hpp"
#include "sobolev/image.hpp"
#include "sobolev/kernel.hpp"

namespace sobolev {

enum class OperatorKind { identity, periodic_convolution, spectral_symbol };

/// Degradation operator A, diagonal in the periodic DFT basis.
///
/// The symbol is stored on the half spectrum (height x width/2+1) and acts on
/// orthonormal coefficients, so apply(u) = IDFT(symbol * DFT(u)).
class LinearOperator {
 public:
  static LinearOperator identity(std::size_t width, std::size_t height) {
    return LinearOperator(OperatorKind::identity, width, height, {});
  }

  /// Circular convolution with `kernel`. The kernel is wrapped into the image
  /// grid with its centre tap at (0, 0), so the symbol of a symmetric kernel is real.
  static LinearOperator convolution(const BlurKernel& kernel, std::size_t width, std::size_t height) {
    Image padded(width, height, 0.0);
    const long c = static_cast<long>(kernel.radius());
    const long h = static_cast<long>(height);
    const long w = static_cast<long>(width);
    for (std::size_t r = 0; r < kernel.size; ++r) {
      for (std::size_t q = 0; q < kernel.size; ++q) {
        const long rr = ((static_cast<long>(r) - c) % h + h) % h;
        const long cc = ((static_cast<long>(q) - c) % w + w) % w;
        padded(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) += kernel.at(r, q);
      }
    }
    fft::HalfSpectrum spec = fft::forward_dft(padded);
    // Convolution theorem with orthonormal transforms carries a sqrt(N).
    const double scale = std::sqrt(static_cast<double>(width * height));
    std::vector<fft::Complex> symbol(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) symbol[i] = spec[i] * scale;
    return LinearOperator(OperatorKind::periodic_convolution, width, height, std::move(symbol));
  }

  /// Synthetic smoothing operator with symbol <xi>^{-alpha} = (1 + |xi|^2)^{-alpha/2}.
  static LinearOperator smoothing_symbol(double alpha, std::size_t width, std::size_t height,
                                         double spacing = 1.0) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("smoothing order must be finite");
    const FrequencyGrid grid = make_frequency_grid(Basis::dft_periodic, width, height, spacing);
    std::vector<fft::Complex> symbol(grid.xi_sq.size());
    for (std::size_t i = 0; i < symbol.size(); ++i) {
      symbol[i] = std::pow(1.0 + grid.xi_sq[i], -0.5 * alpha);
    }
    return LinearOperator(OperatorKind::spectral_symbol, width, height, std::move(symbol));
  }

  OperatorKind kind() const noexcept { return kind_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool is_identity() const noexcept { return kind_ == OperatorKind::identity; }

  /// Symbol at half-spectrum index i (1 for the identity).
  fft::Complex symbol(std::size_t i) const { return is_identity() ? fft::Complex(1.0) : symbol_[i]; }
  const std::vector<fft::Complex>& symbol_values() const noexcept { return symbol_; }

  void check(const Image& img, const char* what) const {
    if (img.width() != width_ || img.height() != height_) {
      throw DimensionError(std::string(what) + ": operator is " + std::to_string(width_) + "x" +
                           std::to_string(height_) + ", image is " + std::to_string(img.width()) +
                           "x" + std::to_string(img.height()));
    }
  }

  /// max |symbol|^2 (1 for the identity).
  double max_gain_sq() const {
    if (is_identity()) return 1.0;
    double m = 0.0;
    for (const auto& a : symbol_) m = std::max(m, std::norm(a));
    return m;
  }

 private:
  LinearOperator(OperatorKind kind, std::size_t width, std::size_t height, std::vector<fft::Complex> symbol)
      : kind_(kind), width_(width), height_(height), symbol_(std::move(symbol)) {
    if (width == 0 || height == 0) throw DimensionError("operator dimensions must be positive");
  }

  OperatorKind kind_;
  std::size_t width_;
  std::size_t height_;
  std::vector<fft::Complex> symbol_;
};

inline Image apply(const LinearOperator& op, const Image& img) {
  op.check(img, "apply");
  if (op.is_identity()) return img;
  fft::HalfSpectrum spec = fft::forward_dft(img);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= op.symbol(i);
  return fft::inverse_dft(spec);
}

inline Image apply_adjoint(const LinearOperator& op, const Image& img) {
  op.check(img, "apply_adjoint");
  if (op.is_identity()) return img;
  fft::HalfSpectrum spec = fft::forward_dft(img);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(op.symbol(i));
  return fft::inverse_dft(spec);
}

}  // namespace sobolev
