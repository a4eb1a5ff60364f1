#pragma once

#include <stdexcept>

#include "sobolev/image.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/multiplier.hpp"

namespace sobolev {

enum class FlowKind {
  l2_flow_of_l2,   ///< u - dt A^T (A u - f)
  h1_flow_of_l2,   ///< u - dt (I - Lap)^{-1} A^T (A u - f)
  l2_flow_of_hm1,  ///< u - dt A^T (I - Lap)^{-1} (A u - f)
};

/// (I - Lap)^{-1} on the periodic grid, as the s = -2 inhomogeneous multiplier.
inline Image inverse_helmholtz(const Image& img, double spacing = 1.0) {
  SobolevParams p;
  p.s = -2.0;
  p.spacing = spacing;
  return apply_ps(img, make_multiplier(p, img.width(), img.height()));
}

/// One explicit step of the chosen gradient flow. The two Sobolev flows are
/// evaluated with different operator orderings; they coincide only because
/// A and (I - Lap)^{-1} are both diagonal in the Fourier basis.
inline Image flow_step(const Image& u, FlowKind kind, const LinearOperator& op, const Image& data,
                       double step, double spacing = 1.0) {
  op.check(u, "flow_step");
  require_same_shape(u, data, "flow_step");
  const Image residual = apply(op, u) - data;
  Image g;
  switch (kind) {
    case FlowKind::l2_flow_of_l2:
      g = apply_adjoint(op, residual);
      break;
    case FlowKind::h1_flow_of_l2:
      g = inverse_helmholtz(apply_adjoint(op, residual), spacing);
      break;
    case FlowKind::l2_flow_of_hm1:
      g = apply_adjoint(op, inverse_helmholtz(residual, spacing));
      break;
    default:
      throw std::invalid_argument("unknown flow kind");
  }
  g *= step;
  return u - g;
}

}  // namespace sobolev
