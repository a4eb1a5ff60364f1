#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "sobolev/error.hpp"
#include "sobolev/fft.hpp"
#include "sobolev/image.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/multiplier.hpp"

namespace sobolev {

namespace detail {

// Residual spectrum a*U - F on the half spectrum.
inline fft::HalfSpectrum residual_spectrum(const LinearOperator& op, const fft::HalfSpectrum& u_hat,
                                           const fft::HalfSpectrum& f_hat) {
  fft::HalfSpectrum r(u_hat.width(), u_hat.height());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = op.symbol(i) * u_hat[i] - f_hat[i];
  return r;
}

inline double weighted_energy(const fft::HalfSpectrum& r, const SpectralMultiplier& mult) {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) acc += r.multiplicity(i) * mult[i] * mult[i] * std::norm(r[i]);
  return acc;
}

inline void check_spectral_mean(const fft::HalfSpectrum& r, const SobolevParams& params) {
  if (!params.needs_mean_check()) return;
  double energy = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) energy += r.multiplicity(i) * std::norm(r[i]);
  if (std::abs(r[0]) > 1e-12 * std::sqrt(energy)) {
    throw NonZeroMeanError("homogeneous norm of negative order is undefined for nonzero-mean residual");
  }
}

}  // namespace detail

/// Phi(u) = 1/2 ||P_s (A u - f)||^2.
inline double objective(const Image& u, const LinearOperator& op, const Image& data,
                        const SpectralMultiplier& mult) {
  op.check(u, "objective");
  require_same_shape(u, data, "objective");
  if (mult.basis() == Basis::dft_periodic) {
    if (!mult.matches(u)) throw DimensionError("objective: multiplier shape mismatch");
    const fft::HalfSpectrum r = detail::residual_spectrum(op, fft::forward_dft(u), fft::forward_dft(data));
    detail::check_spectral_mean(r, mult.params());
    return 0.5 * detail::weighted_energy(r, mult);
  }
  const double n = hs_norm(apply(op, u) - data, mult);
  return 0.5 * n * n;
}

inline double objective(const Image& u, const LinearOperator& op, const Image& data,
                        const SobolevParams& params) {
  return objective(u, op, data, make_multiplier(params, u.width(), u.height()));
}

/// grad Phi(u) = A^T P_s^T P_s (A u - f). In the DFT basis this is a single
/// spectral multiply of the residual by conj(a) w^2.
inline Image objective_gradient(const Image& u, const LinearOperator& op, const Image& data,
                                const SpectralMultiplier& mult) {
  op.check(u, "objective_gradient");
  require_same_shape(u, data, "objective_gradient");
  if (!mult.matches(u)) throw DimensionError("objective_gradient: multiplier shape mismatch");
  if (mult.basis() == Basis::dft_periodic) {
    fft::HalfSpectrum r = detail::residual_spectrum(op, fft::forward_dft(u), fft::forward_dft(data));
    detail::check_spectral_mean(r, mult.params());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= std::conj(op.symbol(i)) * (mult[i] * mult[i]);
    return fft::inverse_dft(r);
  }
  const Image residual = apply(op, u) - data;
  detail::check_mean(residual, mult.params());
  return apply_adjoint(op, apply_ps(residual, mult.squared()));
}

inline Image objective_gradient(const Image& u, const LinearOperator& op, const Image& data,
                                const SobolevParams& params) {
  return objective_gradient(u, op, data, make_multiplier(params, u.width(), u.height()));
}

/// Lipschitz constant of grad Phi: exact max |a|^2 w^2 in the DFT basis,
/// the bound max|a|^2 * max w^2 otherwise.
inline double lipschitz_constant(const LinearOperator& op, const SpectralMultiplier& mult) {
  if (mult.basis() != Basis::dft_periodic) {
    const double wmax = mult.max_weight();
    return op.max_gain_sq() * wmax * wmax;
  }
  double l = 0.0;
  for (std::size_t i = 0; i < mult.weights().size(); ++i) {
    l = std::max(l, std::norm(op.symbol(i)) * mult[i] * mult[i]);
  }
  return l;
}

}  // namespace sobolev
