#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "sobolev/image.hpp"

namespace sobolev::fft {

using Complex = std::complex<double>;

inline std::size_t half_columns(std::size_t width) noexcept { return width / 2 + 1; }

/// How many full-spectrum coefficients a half-spectrum column stands for:
/// column 0 (and column width/2 for even widths) is its own mirror.
inline double column_multiplicity(std::size_t col, std::size_t width) noexcept {
  return (col == 0 || (width % 2 == 0 && col == width / 2)) ? 1.0 : 2.0;
}

/// Map a storage index in [0, n) to its signed frequency in [-ceil(n/2)+1, floor(n/2)].
inline long signed_frequency(std::size_t index, std::size_t n) noexcept {
  return index <= n / 2 ? static_cast<long>(index)
                        : static_cast<long>(index) - static_cast<long>(n);
}

/// Conjugate-symmetric (real-to-complex) spectrum of a real image:
/// height rows by width/2+1 columns, orthonormal scaling.
class HalfSpectrum {
 public:
  HalfSpectrum() = default;
  HalfSpectrum(std::size_t width, std::size_t height)
      : width_(width), height_(height), coeffs_(height * half_columns(width)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t cols() const noexcept { return half_columns(width_); }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator()(std::size_t row, std::size_t col) { return coeffs_[row * cols() + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return coeffs_[row * cols() + col];
  }

  Complex* data() noexcept { return coeffs_.data(); }
  const Complex* data() const noexcept { return coeffs_.data(); }

  double multiplicity(std::size_t index) const noexcept {
    return column_multiplicity(index % cols(), width_);
  }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Complex> coeffs_;
};

namespace detail {

enum class PlanKind { r2c, c2r, dct_forward, dct_inverse };

// FFTW planning is not thread-safe; execution through the new-array interface
// is. Plans are created once per (kind, height, width) under the mutex and
// then shared. FFTW_UNALIGNED lets any std::vector buffer be used at execute.
class PlanRegistry {
 public:
  static PlanRegistry& instance() {
    static PlanRegistry registry;
    return registry;
  }

  PlanRegistry(const PlanRegistry&) = delete;
  PlanRegistry& operator=(const PlanRegistry&) = delete;

  ~PlanRegistry() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(PlanKind kind, std::size_t height, std::size_t width) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(static_cast<int>(kind), height, width);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int n0 = static_cast<int>(height);
    const int n1 = static_cast<int>(width);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const std::size_t real_len = height * width;
    const std::size_t complex_len = height * half_columns(width);
    double* real_buf = fftw_alloc_real(real_len);
    fftw_complex* complex_buf = fftw_alloc_complex(complex_len);
    double* real_out = fftw_alloc_real(real_len);

    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::r2c:
        plan = fftw_plan_dft_r2c_2d(n0, n1, real_buf, complex_buf, flags);
        break;
      case PlanKind::c2r:
        plan = fftw_plan_dft_c2r_2d(n0, n1, complex_buf, real_buf, flags);
        break;
      case PlanKind::dct_forward:
        plan = fftw_plan_r2r_2d(n0, n1, real_buf, real_out, FFTW_REDFT10, FFTW_REDFT10, flags);
        break;
      case PlanKind::dct_inverse:
        plan = fftw_plan_r2r_2d(n0, n1, real_buf, real_out, FFTW_REDFT01, FFTW_REDFT01, flags);
        break;
    }
    fftw_free(real_buf);
    fftw_free(complex_buf);
    fftw_free(real_out);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanRegistry() = default;

  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, std::size_t>, fftw_plan> plans_;
};

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Orthonormal DCT-II scale relative to FFTW's REDFT10 (which carries a factor 2).
inline double dct_scale(std::size_t k, std::size_t n) {
  const double nn = static_cast<double>(n);
  return 0.5 * (k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn));
}

}  // namespace detail

/// Orthonormal 2-D real DFT: sum |f|^2 == sum multiplicity * |F|^2.
inline HalfSpectrum forward_dft(const Image& img) {
  HalfSpectrum out(img.width(), img.height());
  std::vector<double> in(img.vector());
  fftw_plan plan = detail::PlanRegistry::instance().get(detail::PlanKind::r2c, img.height(), img.width());
  fftw_execute_dft_r2c(plan, in.data(), detail::as_fftw(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale;
  return out;
}

inline Image inverse_dft(const HalfSpectrum& spec) {
  // c2r overwrites its input, so work on a copy.
  HalfSpectrum work = spec;
  std::vector<double> out(spec.width() * spec.height());
  fftw_plan plan = detail::PlanRegistry::instance().get(detail::PlanKind::c2r, spec.height(), spec.width());
  fftw_execute_dft_c2r(plan, detail::as_fftw(work.data()), out.data());
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
  for (double& v : out) v *= scale;
  return Image(spec.width(), spec.height(), std::move(out));
}

/// Orthonormal 2-D DCT-II. Coefficient (k, l) is stored at row k, column l.
inline Image forward_dct(const Image& img) {
  std::vector<double> in(img.vector());
  std::vector<double> out(img.size());
  fftw_plan plan =
      detail::PlanRegistry::instance().get(detail::PlanKind::dct_forward, img.height(), img.width());
  fftw_execute_r2r(plan, in.data(), out.data());
  for (std::size_t r = 0; r < img.height(); ++r) {
    const double sr = detail::dct_scale(r, img.height());
    for (std::size_t c = 0; c < img.width(); ++c) {
      out[r * img.width() + c] *= sr * detail::dct_scale(c, img.width());
    }
  }
  return Image(img.width(), img.height(), std::move(out));
}

/// Inverse of forward_dct (orthonormal DCT-III).
inline Image inverse_dct(const Image& coeffs) {
  const std::size_t h = coeffs.height();
  const std::size_t w = coeffs.width();
  std::vector<double> in(coeffs.vector());
  // REDFT01(REDFT10(x)) = 2n x per axis.
  const double norm = 1.0 / (4.0 * static_cast<double>(h) * static_cast<double>(w));
  for (std::size_t r = 0; r < h; ++r) {
    const double sr = detail::dct_scale(r, h);
    for (std::size_t c = 0; c < w; ++c) in[r * w + c] *= norm / (sr * detail::dct_scale(c, w));
  }
  std::vector<double> out(coeffs.size());
  fftw_plan plan = detail::PlanRegistry::instance().get(detail::PlanKind::dct_inverse, h, w);
  fftw_execute_r2r(plan, in.data(), out.data());
  return Image(w, h, std::move(out));
}

}  // namespace sobolev::fft
