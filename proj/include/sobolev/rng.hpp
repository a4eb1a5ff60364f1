#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sobolev {

/// Standard normal sampler with output fixed across platforms.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the C++
/// standard. Gaussian variates come from the polar-free Box-Muller transform
/// applied to pairs of 53-bit uniforms; both outputs of each pair are used
/// (cosine branch first). std::normal_distribution is avoided because its
/// algorithm differs between standard library implementations.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open_closed();
    const double u2 = uniform_open_closed();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // (0, 1]: never zero, so log(u1) is finite.
  double uniform_open_closed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sobolev
