#pragma once

#include <stdexcept>

namespace sobolev {

/// Raised when two images (or an image and an operator) disagree on shape.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A spectral inversion hit a zero coefficient with no regularization.
struct IllPosedError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Negative-order homogeneous norm requested on an input with nonzero mean
/// under the `reject` DC policy.
struct NonZeroMeanError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sobolev
