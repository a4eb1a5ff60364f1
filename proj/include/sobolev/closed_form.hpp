#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "sobolev/error.hpp"
#include "sobolev/fft.hpp"
#include "sobolev/image.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/multiplier.hpp"

namespace sobolev {

namespace detail {
inline void require_periodic(const SpectralMultiplier& mult, const char* what) {
  if (mult.basis() != Basis::dft_periodic) {
    throw std::invalid_argument(std::string(what) +
                                " needs a dft_periodic multiplier (operators are DFT-diagonal)");
  }
}
}  // namespace detail

/// Minimizer of 1/2 ||P_s (A u - f)||^2 + ridge/2 ||u||^2, coefficient-wise:
///   u_hat = conj(a) w^2 f_hat / (|a|^2 w^2 + ridge).
/// With ridge = 0 every |a w| must exceed 1e-14, otherwise IllPosedError.
inline Image closed_form_inverse(const LinearOperator& op, const SpectralMultiplier& mult,
                                 const Image& data, double ridge = 0.0) {
  op.check(data, "closed_form_inverse");
  detail::require_periodic(mult, "closed_form_inverse");
  if (!mult.matches(data)) throw DimensionError("closed_form_inverse: multiplier shape mismatch");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw std::invalid_argument("ridge must be >= 0");

  if (op.is_identity() && ridge == 0.0) {
    // u = f exactly; only the well-posedness check remains.
    for (std::size_t i = 0; i < mult.weights().size(); ++i) {
      if (mult[i] <= 1e-14) {
        throw IllPosedError("closed_form_inverse: ill-posed without regularization (zero weight at coefficient " +
                            std::to_string(i) + "); pass ridge > 0");
      }
    }
    return data;
  }
  fft::HalfSpectrum spec = fft::forward_dft(data);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const fft::Complex a = op.symbol(i);
    const double w2 = mult[i] * mult[i];
    if (ridge == 0.0 && std::abs(a) * mult[i] <= 1e-14) {
      throw IllPosedError("closed_form_inverse: ill-posed without regularization (zero symbol at coefficient " +
                          std::to_string(i) + "); pass ridge > 0");
    }
    spec[i] = std::conj(a) * w2 * spec[i] / (std::norm(a) * w2 + ridge);
  }
  return fft::inverse_dft(spec);
}

}  // namespace sobolev
