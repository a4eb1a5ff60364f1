#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sobolev/fft.hpp"
#include "sobolev/frequency.hpp"
#include "sobolev/image.hpp"

namespace sobolev {

enum class Variant {
  inhomogeneous,  ///< weight (1 + |xi|^2)^{s/2}
  homogeneous,    ///< weight |xi|^s, DC handled by DcPolicy
};

/// What a negative-order homogeneous weight does at xi = 0.
enum class DcPolicy {
  project,  ///< DC weight 0: measure the zero-mean part
  reject,   ///< DC weight 0, and inputs with nonzero mean raise NonZeroMeanError
};

inline Variant parse_variant(std::string_view s) {
  if (s == "inhomogeneous" || s == "H") return Variant::inhomogeneous;
  if (s == "homogeneous" || s == "Hdot") return Variant::homogeneous;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

inline const char* to_string(Variant v) {
  return v == Variant::inhomogeneous ? "inhomogeneous" : "homogeneous";
}

inline DcPolicy parse_dc_policy(std::string_view s) {
  if (s == "project") return DcPolicy::project;
  if (s == "reject") return DcPolicy::reject;
  throw std::invalid_argument("unknown DC policy '" + std::string(s) + "'");
}

inline const char* to_string(DcPolicy p) { return p == DcPolicy::project ? "project" : "reject"; }

struct SobolevParams {
  double s = 0.0;
  Variant variant = Variant::inhomogeneous;
  Basis basis = Basis::dft_periodic;
  double spacing = 1.0;
  DcPolicy dc_policy = DcPolicy::project;

  void validate() const {
    if (!std::isfinite(s)) throw std::invalid_argument("Sobolev order must be finite");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
      throw std::invalid_argument("pixel spacing must be positive");
    }
    if (basis == Basis::pde_integer) {
      if (s != std::round(s) || std::abs(s) > 2.0) {
        throw std::invalid_argument("pde_integer basis supports s in {-2, -1, 0, 1, 2}");
      }
      if (variant != Variant::inhomogeneous) {
        throw std::invalid_argument("pde_integer basis has no homogeneous variant");
      }
    }
  }

  bool needs_mean_check() const noexcept {
    return variant == Variant::homogeneous && s < 0.0 && dc_policy == DcPolicy::reject;
  }
};

/// Diagonal representation of P_s in a transform basis. One real weight per
/// stored transform coefficient, laid out like the basis' FrequencyGrid.
class SpectralMultiplier {
 public:
  SpectralMultiplier() = default;
  SpectralMultiplier(SobolevParams params, std::size_t width, std::size_t height,
                     std::vector<double> weights)
      : params_(params), width_(width), height_(height), weights_(std::move(weights)) {}

  const SobolevParams& params() const noexcept { return params_; }
  Basis basis() const noexcept { return params_.basis; }
  double s() const noexcept { return params_.s; }
  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t cols() const noexcept {
    return params_.basis == Basis::dft_periodic ? fft::half_columns(width_) : width_;
  }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  double at(std::size_t row, std::size_t col) const { return weights_[row * cols() + col]; }

  bool matches(const Image& img) const noexcept {
    return img.width() == width_ && img.height() == height_;
  }

  /// Coefficient-wise square, i.e. the multiplier of P_s^T P_s.
  SpectralMultiplier squared() const {
    std::vector<double> w2(weights_.size());
    for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = weights_[i] * weights_[i];
    SobolevParams p = params_;
    p.s = 2.0 * params_.s;
    return SpectralMultiplier(p, width_, height_, std::move(w2));
  }

  double max_weight() const noexcept {
    double m = 0.0;
    for (double w : weights_) m = w > m ? w : m;
    return m;
  }

 private:
  SobolevParams params_;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> weights_;
};

namespace detail {

// Symbol of sum_{|alpha| <= order} (-1)^{|alpha|} D^{2 alpha} in two dimensions,
// given the per-axis Neumann eigenvalues.
inline double pde_symbol(int order, double lr, double lc) {
  switch (order) {
    case 0: return 1.0;
    case 1: return 1.0 + lr + lc;
    case 2: return 1.0 + lr + lc + lr * lr + lr * lc + lc * lc;
    default: throw std::invalid_argument("pde symbol order must be 0, 1 or 2");
  }
}

}  // namespace detail

inline SpectralMultiplier make_multiplier(const SobolevParams& params, std::size_t width,
                                          std::size_t height) {
  params.validate();
  const FrequencyGrid grid = make_frequency_grid(params.basis, width, height, params.spacing);
  std::vector<double> weights(grid.xi_sq.size());
  const double s = params.s;

  if (params.basis == Basis::pde_integer) {
    const int order = static_cast<int>(std::abs(std::lround(s)));
    const double exponent = s > 0 ? 0.5 : (s < 0 ? -0.5 : 0.0);
    for (std::size_t r = 0; r < grid.height; ++r) {
      for (std::size_t c = 0; c < grid.cols(); ++c) {
        weights[r * grid.cols() + c] =
            std::pow(detail::pde_symbol(order, grid.row_sq[r], grid.col_sq[c]), exponent);
      }
    }
  } else if (params.variant == Variant::inhomogeneous) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] = std::pow(1.0 + grid.xi_sq[i], 0.5 * s);
    }
  } else {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double x = grid.xi_sq[i];
      if (x > 0.0) {
        weights[i] = std::pow(x, 0.5 * s);
      } else {
        // |xi|^s at the origin: 1 for s = 0, 0 for s > 0, singular (set to 0) for s < 0.
        weights[i] = s == 0.0 ? 1.0 : 0.0;
      }
    }
  }
  return SpectralMultiplier(params, width, height, std::move(weights));
}

namespace detail {

inline void check_multiplier_shape(const Image& img, const SpectralMultiplier& mult,
                                   const char* what) {
  if (!mult.matches(img)) {
    throw DimensionError(std::string(what) + ": multiplier built for " +
                         std::to_string(mult.width()) + "x" + std::to_string(mult.height()) +
                         ", image is " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()));
  }
}

inline void check_mean(const Image& img, const SobolevParams& params) {
  if (!params.needs_mean_check()) return;
  double sum = 0.0;
  for (double v : img.pixels()) sum += v;
  const double dc = std::abs(sum) / std::sqrt(static_cast<double>(img.size()));
  if (dc > 1e-12 * l2_norm(img)) {
    throw NonZeroMeanError("homogeneous norm of negative order is undefined for nonzero-mean input");
  }
}

}  // namespace detail

/// P_s f: forward transform, scale each coefficient by its weight, invert.
inline Image apply_ps(const Image& img, const SpectralMultiplier& mult) {
  detail::check_multiplier_shape(img, mult, "apply_ps");
  detail::check_mean(img, mult.params());
  if (mult.basis() == Basis::dft_periodic) {
    fft::HalfSpectrum spec = fft::forward_dft(img);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mult[i];
    return fft::inverse_dft(spec);
  }
  Image coeffs = fft::forward_dct(img);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= mult[i];
  return fft::inverse_dct(coeffs);
}

/// ||P_s f||_2 via Plancherel (no inverse transform). s = 0 gives the
/// Euclidean norm of the pixel values.
inline double hs_norm(const Image& img, const SpectralMultiplier& mult) {
  detail::check_multiplier_shape(img, mult, "hs_norm");
  detail::check_mean(img, mult.params());
  double acc = 0.0;
  if (mult.basis() == Basis::dft_periodic) {
    const fft::HalfSpectrum spec = fft::forward_dft(img);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      acc += spec.multiplicity(i) * mult[i] * mult[i] * std::norm(spec[i]);
    }
  } else {
    const Image coeffs = fft::forward_dct(img);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      acc += mult[i] * mult[i] * coeffs[i] * coeffs[i];
    }
  }
  return std::sqrt(acc);
}

inline double hs_norm(const Image& img, const SobolevParams& params) {
  return hs_norm(img, make_multiplier(params, img.width(), img.height()));
}

}  // namespace sobolev
