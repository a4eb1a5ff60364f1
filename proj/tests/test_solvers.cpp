#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sobolev/sobolev.hpp"

using namespace sobolev;

namespace {

SobolevParams params(double s, Variant variant = Variant::inhomogeneous, Basis basis = Basis::dft_periodic) {
  SobolevParams p;
  p.s = s;
  p.variant = variant;
  p.basis = basis;
  return p;
}

LinearOperator small_blur(std::size_t w, std::size_t h) { return LinearOperator::convolution(gaussian_kernel(3, 0.9), w, h); }

}  // namespace

TEST(Objective, ZeroAtExactFit) {
  const Image u = oracle::random_image(8, 8, 1);
  const LinearOperator a = small_blur(8, 8);
  EXPECT_NEAR(objective(u, a, apply(a, u), params(-1.0)), 0.0, 1e-28);
}

TEST(Objective, ZeroOrderIsHalfSquaredResidual) {
  const Image u = oracle::random_image(9, 7, 2), f = oracle::random_image(9, 7, 3);
  const LinearOperator a = small_blur(9, 7);
  const double ref = 0.5 * squared_norm(apply(a, u) - f);
  EXPECT_NEAR(objective(u, a, f, params(0.0)), ref, 1e-12 * ref);
}

TEST(Objective, MatchesNaiveSpectralSum) {
  const Image u = oracle::random_image(8, 8, 4), f = oracle::random_image(8, 8, 5);
  const LinearOperator a = small_blur(8, 8);
  const auto r = oracle::naive_dft(oracle::circular_convolve(u, gaussian_kernel(3, 0.9)) - f);
  double ref = 0.0;
  for (std::size_t k = 0; k < 8; ++k)
    for (std::size_t l = 0; l < 8; ++l) ref += std::pow(1.0 + oracle::periodic_xi_sq(k, l, 8, 8), -1.0) * std::norm(r[k * 8 + l]);
  ref *= 0.5;
  EXPECT_NEAR(objective(u, a, f, params(-1.0)), ref, 1e-10 * ref);
}

TEST(Objective, GradientAtMinimizerVanishes) {
  const Image f = oracle::random_image(10, 10, 6);
  const LinearOperator a = small_blur(10, 10);
  const auto mult = make_multiplier(params(-0.5), 10, 10);
  const Image u = closed_form_inverse(a, mult, f);
  EXPECT_LT(l2_norm(objective_gradient(u, a, f, mult)), 1e-10 * l2_norm(f));
}

TEST(Objective, IdentityZeroOrderGradient) {
  const Image u = oracle::random_image(6, 6, 7), f = oracle::random_image(6, 6, 8);
  EXPECT_LT(oracle::rel_diff(objective_gradient(u, LinearOperator::identity(6, 6), f, params(0.0)), u - f), 1e-14);
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  const double h = 1e-5;
  std::uint64_t seed = 10;
  for (Basis basis : {Basis::dft_periodic, Basis::dct_neumann}) {
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      for (int which = 0; which < 3; ++which) {
        const LinearOperator a = which == 0   ? LinearOperator::identity(8, 8)
                                 : which == 1 ? small_blur(8, 8)
                                              : LinearOperator::smoothing_symbol(1.0, 8, 8);
        const Image u = oracle::random_image(8, 8, ++seed), f = oracle::random_image(8, 8, ++seed);
        const Image dir = oracle::random_image(8, 8, ++seed);
        const auto p = params(s, Variant::inhomogeneous, basis);
        const double fd = (objective(u + h * dir, a, f, p) - objective(u - h * dir, a, f, p)) / (2.0 * h);
        const double an = dot(objective_gradient(u, a, f, p), dir);
        EXPECT_NEAR(fd, an, 1e-5 * std::abs(an)) << to_string(basis) << " s=" << s << " op=" << which;
      }
    }
  }
}

TEST(Objective, HomogeneousGradientMatchesFiniteDifferences) {
  const Image u = oracle::random_image(8, 8, 40), f = oracle::random_image(8, 8, 41), dir = oracle::random_image(8, 8, 42);
  const LinearOperator a = small_blur(8, 8);
  for (double s : {-1.0, 1.0, 2.0}) {
    const auto p = params(s, Variant::homogeneous);
    const double h = 1e-5;
    const double fd = (objective(u + h * dir, a, f, p) - objective(u - h * dir, a, f, p)) / (2.0 * h);
    const double an = dot(objective_gradient(u, a, f, p), dir);
    EXPECT_NEAR(fd, an, 1e-5 * std::abs(an)) << s;
  }
}

TEST(Objective, RejectPolicyOnResidual) {
  SobolevParams p = params(-1.0, Variant::homogeneous);
  p.dc_policy = DcPolicy::reject;
  const Image u(8, 8, 0.0), f(8, 8, 1.0);
  EXPECT_THROW(objective(u, LinearOperator::identity(8, 8), f, p), NonZeroMeanError);
  EXPECT_THROW(objective_gradient(u, LinearOperator::identity(8, 8), f, p), NonZeroMeanError);
}

TEST(GradientDescent, ZeroIterationsReturnsInit) {
  const Image init = oracle::random_image(8, 8, 50), f = oracle::random_image(8, 8, 51);
  GdParams gp;
  gp.iterations = 0;
  const GdResult r = gradient_descent(init, small_blur(8, 8), f, gp);
  EXPECT_EQ(r.u, init);
  EXPECT_EQ(r.objective.size(), 1u);
}

TEST(GradientDescent, MonotoneBelowInverseLipschitz) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (double s : {-1.0, 0.0, 1.0}) {
      const Image f = oracle::random_image(16, 12, 60 + seed);
      const LinearOperator a = small_blur(16, 12);
      GdParams gp;
      gp.s_params = params(s);
      gp.iterations = 200;
      const double l = lipschitz_constant(a, make_multiplier(gp.s_params, 16, 12));
      gp.step = 0.99 / l;
      const GdResult r = gradient_descent(Image(16, 12), a, f, gp);
      ASSERT_EQ(r.objective.size(), 201u);
      EXPECT_TRUE(r.monotone);
      EXPECT_TRUE(r.stable());
      for (std::size_t i = 1; i < r.objective.size(); ++i) EXPECT_LE(r.objective[i], r.objective[i - 1]);
    }
  }
}

TEST(GradientDescent, LipschitzIsExactMaxGain) {
  const LinearOperator a = small_blur(10, 10);
  const auto mult = make_multiplier(params(1.0), 10, 10);
  // Power iteration on the Hessian A^T P^2 A.
  Image x = oracle::random_image(10, 10, 70);
  double est = 0.0;
  for (int i = 0; i < 500; ++i) {
    Image y = apply_adjoint(a, apply_ps(apply(a, x), mult.squared()));
    est = l2_norm(y) / l2_norm(x);
    x = y;
    x *= 1.0 / l2_norm(x);
  }
  EXPECT_NEAR(lipschitz_constant(a, mult), est, 1e-6 * est);
}

TEST(GradientDescent, DivergenceIsFlaggedNotAborted) {
  const Image f = oracle::random_image(8, 8, 71);
  GdParams gp;
  gp.s_params = params(1.0);
  gp.step = 10.0;
  gp.iterations = 20;
  const GdResult r = gradient_descent(Image(8, 8), LinearOperator::identity(8, 8), f, gp);
  EXPECT_EQ(r.objective.size(), 21u);
  EXPECT_FALSE(r.monotone);
  EXPECT_FALSE(r.stable());
}

TEST(GradientDescent, SpectralPathMatchesExplicitIteration) {
  const Image f = oracle::random_image(12, 10, 72), init = oracle::random_image(12, 10, 73);
  const LinearOperator a = small_blur(12, 10);
  GdParams gp;
  gp.s_params = params(-0.5);
  gp.step = 0.8;
  gp.iterations = 15;
  Image u = init;
  for (int i = 0; i < 15; ++i) u -= 0.8 * objective_gradient(u, a, f, gp.s_params);
  const GdResult r = gradient_descent(init, a, f, gp);
  EXPECT_LT(oracle::rel_diff(r.u, u), 1e-12);
  EXPECT_NEAR(r.objective.back(), objective(u, a, f, gp.s_params), 1e-12 * r.objective.front());
}

TEST(GradientDescent, DctBasisRuns) {
  const Image f = oracle::random_image(12, 10, 74);
  GdParams gp;
  gp.s_params = params(-1.0, Variant::inhomogeneous, Basis::dct_neumann);
  gp.iterations = 30;
  const GdResult r = gradient_descent(Image(12, 10), small_blur(12, 10), f, gp);
  EXPECT_TRUE(r.monotone);
  EXPECT_LT(r.objective.back(), r.objective.front());
}

TEST(GradientDescent, CheckpointCadence) {
  const Image f = oracle::random_image(8, 8, 75);
  GdParams gp;
  gp.iterations = 10;
  std::vector<std::size_t> seen;
  gradient_descent(Image(8, 8), LinearOperator::identity(8, 8), f, gp,
                   [&](std::size_t it, const Image&) { seen.push_back(it); }, 4);
  EXPECT_EQ(seen, (std::vector<std::size_t>{4, 8}));
}

TEST(GradientDescent, SingleModeStepIsExactMultiplier) {
  const std::size_t n = 16;
  for (double s : {-1.0, 1.0}) {
    const auto mult = make_multiplier(params(s), n, n);
    GdParams gp;
    gp.s_params = params(s);
    gp.step = 0.1;
    gp.iterations = 1;
    double prev_gain = 0.0;
    for (std::size_t k : {1u, 3u, 6u}) {
      const Image mode = oracle::cosine_mode(n, n, k, 0);
      const GdResult r = gradient_descent(Image(n, n), LinearOperator::identity(n, n), mode, gp);
      const double w = mult.at(k, 0);
      EXPECT_LT(oracle::rel_diff(r.u, 0.1 * w * w * mode), 1e-12);
      const double gain = w * w;
      if (prev_gain > 0.0) {
        if (s > 0) EXPECT_GT(gain, prev_gain);
        else EXPECT_LT(gain, prev_gain);
      }
      prev_gain = gain;
    }
  }
}

TEST(GradientDescent, StrongNormDecaysObjectiveFaster) {
  const Image truth = synth_image(SynthName::square, 100, 100);
  const LinearOperator a = LinearOperator::convolution(gaussian_kernel(15, 1.0), 100, 100);
  const Image data = apply(a, truth);
  auto fraction = [&](double s) {
    GdParams gp;
    gp.s_params = params(s);
    gp.step = 1.0;
    gp.iterations = 100;
    const GdResult r = gradient_descent(Image(100, 100), a, data, gp);
    EXPECT_TRUE(r.monotone);
    return r.objective.back() / r.objective.front();
  };
  EXPECT_LT(fraction(1.0), fraction(-1.0));
}

TEST(Flow, StationaryPointIsFixed) {
  const Image u = oracle::random_image(8, 8, 80);
  const LinearOperator a = small_blur(8, 8);
  const Image f = apply(a, u);
  for (FlowKind k : {FlowKind::l2_flow_of_l2, FlowKind::h1_flow_of_l2, FlowKind::l2_flow_of_hm1}) {
    EXPECT_LT(oracle::rel_diff(flow_step(u, k, a, f, 0.5), u), 1e-14);
  }
}

TEST(Flow, SobolevFlowsCoincideForSpectralOperator) {
  const Image f = oracle::random_image(20, 16, 81);
  for (const LinearOperator& a : {small_blur(20, 16), LinearOperator::smoothing_symbol(2.0, 20, 16)}) {
    Image u1(20, 16), u2(20, 16);
    for (int step = 0; step < 50; ++step) {
      u1 = flow_step(u1, FlowKind::h1_flow_of_l2, a, f, 0.7);
      u2 = flow_step(u2, FlowKind::l2_flow_of_hm1, a, f, 0.7);
      double worst = 0.0;
      for (std::size_t i = 0; i < u1.size(); ++i) worst = std::max(worst, std::abs(u1[i] - u2[i]));
      ASSERT_LE(worst, 1e-12) << step;
    }
  }
}

TEST(Flow, L2FlowIsOneGradientStep) {
  const Image u = oracle::random_image(9, 9, 82), f = oracle::random_image(9, 9, 83);
  const LinearOperator a = small_blur(9, 9);
  GdParams gp;
  gp.step = 0.3;
  gp.iterations = 1;
  EXPECT_LT(oracle::rel_diff(flow_step(u, FlowKind::l2_flow_of_l2, a, f, 0.3), gradient_descent(u, a, f, gp).u), 1e-13);
}

TEST(Flow, H1FlowIsDftGradientStepOfHm1) {
  const Image u = oracle::random_image(9, 9, 84), f = oracle::random_image(9, 9, 85);
  const LinearOperator a = small_blur(9, 9);
  GdParams gp;
  gp.step = 0.3;
  gp.iterations = 1;
  gp.s_params = params(-1.0);
  EXPECT_LT(oracle::rel_diff(flow_step(u, FlowKind::h1_flow_of_l2, a, f, 0.3), gradient_descent(u, a, f, gp).u), 1e-13);
}

TEST(Shrink, Examples) {
  EXPECT_DOUBLE_EQ(soft_threshold(0.5, 0.2), 0.3);
  EXPECT_EQ(soft_threshold(-0.1, 0.2), 0.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-0.7, 0.2), -0.5);
  GradientField g{Image(2, 1, std::vector<double>{0.5, -0.1}), Image(2, 1, std::vector<double>{-0.3, 0.0})};
  const GradientField out = shrink(g, 0.2);
  EXPECT_DOUBLE_EQ(out.dx[0], 0.3);
  EXPECT_EQ(out.dx[1], 0.0);
  EXPECT_DOUBLE_EQ(out.dy[0], -0.1);
  EXPECT_THROW(shrink(g, -1.0), std::invalid_argument);
}

TEST(Shrink, ZeroThresholdAndSmallInputs) {
  const GradientField g{oracle::random_image(5, 5, 90), oracle::random_image(5, 5, 91)};
  const GradientField same = shrink(g, 0.0);
  EXPECT_EQ(same.dx, g.dx);
  EXPECT_EQ(same.dy, g.dy);
  EXPECT_EQ(l2_norm(shrink(g, 1.0)), 0.0);
  EXPECT_EQ(l2_norm(shrink_isotropic(g, 2.0)), 0.0);
}

TEST(Shrink, ProximalMapOfL1) {
  // Brute-force minimization of 1/2 (y - x)^2 + t |y| over a fine grid.
  for (double x = -2.0; x <= 2.0; x += 0.173) {
    for (double t : {0.0, 0.05, 0.4, 1.1}) {
      double best_y = 0.0, best = std::numeric_limits<double>::infinity();
      for (int i = -40000; i <= 40000; ++i) {
        const double y = i * 1e-4;
        const double v = 0.5 * (y - x) * (y - x) + t * std::abs(y);
        if (v < best) {
          best = v;
          best_y = y;
        }
      }
      EXPECT_NEAR(soft_threshold(x, t), best_y, 1e-4) << x << " " << t;
    }
  }
}

TEST(Shrink, IsotropicScalesVector) {
  GradientField g{Image(1, 1, 3.0), Image(1, 1, 4.0)};
  const GradientField out = shrink_isotropic(g, 1.0);
  EXPECT_NEAR(out.dx[0], 3.0 * 0.8, 1e-15);
  EXPECT_NEAR(out.dy[0], 4.0 * 0.8, 1e-15);
}

TEST(Admm, VanishingTvConvergesToClosedForm) {
  const std::size_t n = 16;
  const Image truth = oracle::random_image(n, n, 100, 0.0, 1.0);
  // A well-conditioned operator: the mu -> 0 iteration contracts at rate
  // rho L / (lambda |a|^2 w^2 + rho L), which stalls for near-zero blur symbols.
  const LinearOperator a = LinearOperator::smoothing_symbol(0.5, n, n);
  const Image data = apply(a, truth) + make_noise(n, n, {NoiseKind::gaussian_white, 0.05, 0.05, 3});
  const SobolevParams sp = params(-0.5);
  AdmmParams ap;
  ap.lambda = 10.0;
  ap.mu = 1e-12;
  ap.rho = 1.0;
  ap.iterations = 3000;
  const AdmmState st = admm_solve(data, a, sp, ap);
  const Image ref = closed_form_inverse(a, make_multiplier(sp, n, n), data);
  EXPECT_LT(oracle::rel_diff(st.u, ref), 1e-6);
}

TEST(Admm, PrimalResidualOnSquareDenoising) {
  const Image truth = synth_image(SynthName::square, 100, 100);
  const Image data = add_noise(truth, {NoiseKind::gaussian_white, 0.1, 0.05, 1});
  AdmmParams ap;
  ap.iterations = 2000;
  ap.tol = 1e-6;
  AdmmSolver solver(data, LinearOperator::identity(100, 100), SobolevParams{}, ap);
  solver.run();
  EXPECT_LT(solver.relative_residual(), 1e-6);
  EXPECT_LE(solver.state().iterations(), 2000u);
  EXPECT_EQ(solver.state().primal_residuals.size(), solver.state().objective_values.size());
  EXPECT_GT(standard_psnr(solver.state().u, truth).db, standard_psnr(data, truth).db);
}

TEST(Admm, FixedPointIsStable) {
  const std::size_t n = 24;
  const Image truth = synth_image(SynthName::square, n, n);
  const LinearOperator a = small_blur(n, n);
  const Image data = apply(a, truth) + make_noise(n, n, {NoiseKind::gaussian_white, 0.05, 0.05, 4});
  AdmmParams ap;
  ap.lambda = 20.0;
  ap.mu = 0.5;
  ap.rho = 2.0;
  ap.iterations = 20000;
  ap.tol = 1e-14;
  AdmmSolver solver(data, a, params(-0.5), ap);
  solver.run();
  const Image before = solver.state().u;
  solver.step();
  EXPECT_LE(oracle::rel_diff(solver.state().u, before), 1e-10);
}

TEST(Admm, DcPinningKeepsDataMean) {
  const Image data = oracle::random_image(16, 16, 110, 0.0, 1.0);
  AdmmParams ap;
  ap.iterations = 50;
  const AdmmState st = admm_solve(data, LinearOperator::identity(16, 16), params(1.0, Variant::homogeneous), ap);
  EXPECT_NEAR(st.u.mean(), data.mean(), 1e-12);
  for (double v : st.u.pixels()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Admm, ObjectiveSettles) {
  const Image truth = synth_image(SynthName::square, 32, 32);
  const Image data = add_noise(truth, {NoiseKind::gaussian_white, 0.1, 0.05, 2});
  AdmmParams ap;
  ap.iterations = 400;
  const AdmmState st = admm_solve(data, LinearOperator::identity(32, 32), params(0.0), ap);
  ASSERT_EQ(st.iterations(), 400u);
  const double tv_data = l1_norm(grad(data));
  EXPECT_LT(st.objective_values.back(), ap.mu * tv_data);  // beats the trivial u = data
  EXPECT_NEAR(st.objective_values.back(), st.objective_values[st.iterations() - 2], 1e-5 * st.objective_values.back());
}

TEST(Admm, Validation) {
  const Image data(8, 8, 0.5);
  const LinearOperator id = LinearOperator::identity(8, 8);
  AdmmParams ap;
  ap.rho = 0.0;
  EXPECT_THROW(admm_solve(data, id, params(0.0), ap), std::invalid_argument);
  ap = AdmmParams{};
  ap.mu = 0.0;
  EXPECT_THROW(admm_solve(data, id, params(0.0), ap), std::invalid_argument);
  EXPECT_THROW(admm_solve(data, id, params(0.0, Variant::inhomogeneous, Basis::dct_neumann), AdmmParams{}), std::invalid_argument);
  EXPECT_THROW(admm_solve(Image(8, 7), id, params(0.0), AdmmParams{}), DimensionError);
}

TEST(Admm, IsotropicVariantRuns) {
  const Image truth = synth_image(SynthName::circles, 32, 32);
  const Image data = add_noise(truth, {NoiseKind::gaussian_white, 0.1, 0.05, 5});
  AdmmParams ap;
  ap.isotropic = true;
  ap.iterations = 200;
  const AdmmState st = admm_solve(data, LinearOperator::identity(32, 32), params(0.0), ap);
  EXPECT_GT(standard_psnr(st.u, truth).db, standard_psnr(data, truth).db);
}
