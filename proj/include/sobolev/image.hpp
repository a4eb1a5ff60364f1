#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/error.hpp"

namespace sobolev {

/// Dense grayscale image, row-major: pixel (row, col) lives at row * width + col.
class Image {
 public:
  Image() = default;

  Image(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

  Image(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != checked_size(width, height)) {
      throw DimensionError("image data length does not match width*height");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }
  const std::vector<double>& vector() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool all_finite() const noexcept {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double mean() const noexcept {
    if (data_.empty()) return 0.0;
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
  }

  double max() const noexcept {
    double m = data_.empty() ? 0.0 : data_.front();
    for (double v : data_) m = v > m ? v : m;
    return m;
  }

  Image& operator+=(const Image& rhs) {
    require_same(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }
  Image& operator-=(const Image& rhs) {
    require_same(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }
  Image& operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
  }
  Image& operator+=(double c) {
    for (double& v : data_) v += c;
    return *this;
  }

  friend Image operator+(Image a, const Image& b) { return a += b; }
  friend Image operator-(Image a, const Image& b) { return a -= b; }
  friend Image operator*(double c, Image a) { return a *= c; }
  friend bool operator==(const Image&, const Image&) = default;

 private:
  static std::size_t checked_size(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) throw DimensionError("image dimensions must be positive");
    return width * height;
  }

  void require_same(const Image& rhs) const {
    if (!same_shape(rhs)) throw DimensionError("image shapes differ");
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

inline void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": image shapes differ (" + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                         "x" + std::to_string(b.height()) + ")");
  }
}

inline double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double squared_norm(const Image& a) {
  double acc = 0.0;
  for (double v : a.pixels()) acc += v * v;
  return acc;
}

inline double l2_norm(const Image& a) { return std::sqrt(squared_norm(a)); }

}  // namespace sobolev
