#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sobolev/fft.hpp"
#include "sobolev/gradient.hpp"
#include "sobolev/image.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/multiplier.hpp"
#include "sobolev/objective.hpp"
#include "sobolev/shrink.hpp"

namespace sobolev {

struct AdmmParams {
  double lambda = 10.0;  ///< fidelity weight
  double mu = 1.0;       ///< TV weight
  double rho = 50.0;     ///< penalty
  std::size_t iterations = 500;
  double tol = 0.0;  ///< stop when ||Du - d|| / ||Du0|| < tol; 0 disables
  bool isotropic = false;

  void validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(lambda)) throw std::invalid_argument("ADMM lambda must be positive");
    if (!positive(mu)) throw std::invalid_argument("ADMM mu must be positive");
    if (!positive(rho)) throw std::invalid_argument("ADMM rho must be positive");
    if (!(tol >= 0.0)) throw std::invalid_argument("ADMM tol must be >= 0");
  }
};

struct AdmmState {
  Image u;
  GradientField d;
  GradientField v;  ///< scaled dual
  std::vector<double> primal_residuals;  ///< ||Du_k - d_k|| per iteration
  std::vector<double> objective_values;  ///< lambda/2 ||P(Au-f)||^2 + mu TV(u) per iteration

  std::size_t iterations() const noexcept { return primal_residuals.size(); }
};

/// Scaled-form ADMM for min_u lambda/2 ||P_s(Au - f)||^2 + mu TV(u) with the
/// splitting d = Du. The u-subproblem is solved exactly in the Fourier basis,
/// so the multiplier must use the dft_periodic basis.
class AdmmSolver {
 public:
  AdmmSolver(const Image& data, const LinearOperator& op, const SobolevParams& s_params,
             const AdmmParams& params, const Image& init = Image())
      : op_(op), params_(params), s_params_(s_params) {
    params_.validate();
    s_params_.validate();
    if (s_params_.basis != Basis::dft_periodic) {
      throw std::invalid_argument("ADMM requires the dft_periodic basis");
    }
    op_.check(data, "admm");
    mult_ = make_multiplier(s_params_, data.width(), data.height());
    f_hat_ = fft::forward_dft(data);

    const std::size_t w = data.width(), h = data.height();
    const std::size_t cols = fft::half_columns(w);
    num_.resize(f_hat_.size());
    den_.resize(f_hat_.size());
    for (std::size_t r = 0; r < h; ++r) {
      const double lr = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / h);
      for (std::size_t c = 0; c < cols; ++c) {
        const double lc = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(c) / w);
        const std::size_t i = r * cols + c;
        const double w2 = mult_[i] * mult_[i];
        const fft::Complex a = op_.symbol(i);
        num_[i] = params_.lambda * std::conj(a) * w2 * f_hat_[i];
        den_[i] = params_.lambda * std::norm(a) * w2 + params_.rho * (lr + lc);
      }
    }

    if (init.empty()) {
      state_.u = op_.is_identity() ? data : apply_adjoint(op_, data);
    } else {
      require_same_shape(init, data, "admm init");
      state_.u = init;
    }
    state_.d = grad(state_.u);
    state_.v = zero_field(w, h);
    const double du0 = l2_norm(state_.d);
    reference_ = du0 > 0.0 ? du0 : 1.0;
  }

  /// One full (u, d, v) update.
  void step() {
    GradientField target = state_.d - state_.v;
    Image rhs_img = div(target);
    rhs_img *= -1.0;  // D^T = -div
    fft::HalfSpectrum u_hat = fft::forward_dft(rhs_img);
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
      const fft::Complex rhs = num_[i] + params_.rho * u_hat[i];
      // Only the DC term can be singular (zero weight, zero Laplacian); keep the data mean there.
      u_hat[i] = den_[i] > 0.0 ? rhs / den_[i] : f_hat_[i];
    }
    state_.u = fft::inverse_dft(u_hat);

    const GradientField du = grad(state_.u);
    GradientField z = du + state_.v;
    const double t = params_.mu / params_.rho;
    state_.d = params_.isotropic ? shrink_isotropic(z, t) : shrink(z, t);
    const GradientField gap = du - state_.d;
    state_.v += gap;

    state_.primal_residuals.push_back(l2_norm(gap));
    fft::HalfSpectrum r(u_hat.width(), u_hat.height());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = op_.symbol(i) * u_hat[i] - f_hat_[i];
    const double tv = params_.isotropic ? isotropic_norm(du) : l1_norm(du);
    state_.objective_values.push_back(0.5 * params_.lambda * detail::weighted_energy(r, mult_) +
                                      params_.mu * tv);
  }

  double relative_residual() const {
    return state_.primal_residuals.empty() ? INFINITY : state_.primal_residuals.back() / reference_;
  }

  bool converged() const { return params_.tol > 0.0 && relative_residual() < params_.tol; }

  /// Iterates until the iteration budget or the tolerance is reached.
  const AdmmState& run(const std::function<void(std::size_t, const Image&)>& checkpoint = {},
                       std::size_t checkpoint_every = 0) {
    while (state_.iterations() < params_.iterations) {
      step();
      if (checkpoint && checkpoint_every > 0 && state_.iterations() % checkpoint_every == 0) {
        checkpoint(state_.iterations(), state_.u);
      }
      if (converged()) break;
    }
    return state_;
  }

  const AdmmState& state() const noexcept { return state_; }
  AdmmState& state() noexcept { return state_; }
  const AdmmParams& params() const noexcept { return params_; }

 private:
  LinearOperator op_;
  AdmmParams params_;
  SobolevParams s_params_;
  SpectralMultiplier mult_;
  fft::HalfSpectrum f_hat_;
  std::vector<fft::Complex> num_;
  std::vector<double> den_;
  AdmmState state_;
  double reference_ = 1.0;
};

inline AdmmState admm_solve(const Image& data, const LinearOperator& op, const SobolevParams& s_params,
                            const AdmmParams& params, const Image& init = Image()) {
  AdmmSolver solver(data, op, s_params, params, init);
  solver.run();
  return solver.state();
}

}  // namespace sobolev
