#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sobolev/fft.hpp"
#include "sobolev/image.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/multiplier.hpp"
#include "sobolev/objective.hpp"

namespace sobolev {

struct GdParams {
  double step = 1.0;
  std::size_t iterations = 100;
  SobolevParams s_params;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("GD step must be positive");
    s_params.validate();
  }
};

struct GdResult {
  Image u;
  std::vector<double> objective;  ///< Phi at iterates 0..iterations
  bool monotone = true;           ///< false if Phi ever increased
  double lipschitz = 0.0;         ///< L = max |a|^2 w^2; the step is stable iff step * L < 2
  double step = 0.0;

  bool stable() const noexcept { return step * lipschitz < 2.0; }
};

/// Called with (iteration, iterate) every `checkpoint_every` iterations.
using Checkpoint = std::function<void(std::size_t, const Image&)>;

/// Fixed-step gradient descent u <- u - step * A^T P_s^T P_s (A u - f).
///
/// Runs exactly `iterations` steps and never aborts on divergence; a
/// non-monotone objective is only flagged in the result. In the DFT basis
/// the whole iteration runs on the half spectrum (one transform in, one out).
inline GdResult gradient_descent(const Image& init, const LinearOperator& op, const Image& data,
                                 const GdParams& params, const Checkpoint& checkpoint = {},
                                 std::size_t checkpoint_every = 0) {
  params.validate();
  op.check(init, "gradient_descent");
  require_same_shape(init, data, "gradient_descent");
  const SpectralMultiplier mult = make_multiplier(params.s_params, init.width(), init.height());

  GdResult result;
  result.lipschitz = lipschitz_constant(op, mult);
  result.step = params.step;
  result.objective.reserve(params.iterations + 1);
  auto record = [&](double phi) {
    if (!result.objective.empty() && phi > result.objective.back()) result.monotone = false;
    result.objective.push_back(phi);
  };
  const bool want_checkpoints = checkpoint && checkpoint_every > 0;

  if (mult.basis() == Basis::dft_periodic) {
    fft::HalfSpectrum u_hat = fft::forward_dft(init);
    const fft::HalfSpectrum f_hat = fft::forward_dft(data);
    std::vector<fft::Complex> gain(u_hat.size());
    for (std::size_t i = 0; i < gain.size(); ++i) gain[i] = std::conj(op.symbol(i)) * (mult[i] * mult[i]);
    fft::HalfSpectrum r(u_hat.width(), u_hat.height());
    for (std::size_t it = 0; it <= params.iterations; ++it) {
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = op.symbol(i) * u_hat[i] - f_hat[i];
      detail::check_spectral_mean(r, mult.params());
      record(0.5 * detail::weighted_energy(r, mult));
      if (it == params.iterations) break;
      for (std::size_t i = 0; i < r.size(); ++i) u_hat[i] -= params.step * gain[i] * r[i];
      if (want_checkpoints && (it + 1) % checkpoint_every == 0) checkpoint(it + 1, fft::inverse_dft(u_hat));
    }
    result.u = params.iterations == 0 ? init : fft::inverse_dft(u_hat);
    return result;
  }

  Image u = init;
  for (std::size_t it = 0; it <= params.iterations; ++it) {
    record(objective(u, op, data, mult));
    if (it == params.iterations) break;
    Image g = objective_gradient(u, op, data, mult);
    g *= params.step;
    u -= g;
    if (want_checkpoints && (it + 1) % checkpoint_every == 0) checkpoint(it + 1, u);
  }
  result.u = std::move(u);
  return result;
}

}  // namespace sobolev
