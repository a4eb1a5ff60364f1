#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sobolev/sobolev.hpp"

using namespace sobolev;

namespace {

SobolevParams params(double s, Variant variant = Variant::inhomogeneous) {
  SobolevParams p;
  p.s = s;
  p.variant = variant;
  return p;
}

}  // namespace

TEST(Kernel, SingleTap) {
  const BlurKernel k = gaussian_kernel(1, 2.0);
  ASSERT_EQ(k.taps.size(), 1u);
  EXPECT_EQ(k.taps[0], 1.0);
}

TEST(Kernel, ThreeByThreeCentre) {
  const BlurKernel k = gaussian_kernel(3, 1.0);
  EXPECT_NEAR(k.at(1, 1), 1.0 / (1.0 + 4.0 * std::exp(-0.5) + 4.0 * std::exp(-1.0)), 1e-16);
}

TEST(Kernel, FifteenNormalizedUnimodalSymmetric) {
  const BlurKernel k = gaussian_kernel(15, 1.0);
  double sum = 0.0, peak = 0.0;
  for (double v : k.taps) {
    sum += v;
    peak = std::max(peak, v);
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_EQ(peak, k.at(7, 7));
  for (std::size_t r = 0; r < 15; ++r)
    for (std::size_t c = 0; c < 15; ++c) {
      EXPECT_EQ(k.at(r, c), k.at(c, r));
      EXPECT_EQ(k.at(r, c), k.at(14 - r, c));
      EXPECT_EQ(k.at(r, c), k.at(r, 14 - c));
    }
  // fspecial drops taps below eps relative to the peak.
  EXPECT_EQ(k.at(0, 0), 0.0);
}

TEST(Kernel, Validation) {
  EXPECT_THROW(gaussian_kernel(4, 1.0), std::invalid_argument);
  EXPECT_THROW(gaussian_kernel(0, 1.0), std::invalid_argument);
  EXPECT_THROW(gaussian_kernel(3, 0.0), std::invalid_argument);
  EXPECT_THROW(gaussian_kernel(3, -1.0), std::invalid_argument);
}

TEST(Operator, IdentityIsNoOp) {
  const Image f = oracle::random_image(7, 9, 1);
  const LinearOperator id = LinearOperator::identity(7, 9);
  EXPECT_EQ(apply(id, f), f);
  EXPECT_EQ(apply_adjoint(id, f), f);
}

TEST(Operator, BlurPreservesConstants) {
  const LinearOperator a = LinearOperator::convolution(gaussian_kernel(15, 1.0), 20, 24);
  const Image out = apply(a, Image(20, 24, 0.7));
  for (double v : out.pixels()) EXPECT_NEAR(v, 0.7, 1e-14);
}

TEST(Operator, SymbolMatchesCircularConvolution) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Image f = oracle::random_image(16, 16, seed);
    const BlurKernel k = gaussian_kernel(7, 1.3);
    const Image direct = oracle::circular_convolve(f, k);
    const Image spectral = apply(LinearOperator::convolution(k, 16, 16), f);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(direct[i] - spectral[i]));
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Operator, KernelLargerThanImageWraps) {
  const Image f = oracle::random_image(6, 5, 3);
  const BlurKernel k = gaussian_kernel(9, 2.0);
  EXPECT_LT(oracle::rel_diff(apply(LinearOperator::convolution(k, 6, 5), f), oracle::circular_convolve(f, k)), 1e-12);
}

TEST(Operator, SymmetricKernelHasRealSymbolAndSelfAdjoint) {
  const LinearOperator a = LinearOperator::convolution(gaussian_kernel(5, 1.0), 11, 8);
  for (const auto& z : a.symbol_values()) EXPECT_NEAR(z.imag(), 0.0, 1e-14);
  const Image f = oracle::random_image(11, 8, 4);
  EXPECT_LT(oracle::rel_diff(apply(a, f), apply_adjoint(a, f)), 1e-13);
}

TEST(Operator, AdjointIdentity) {
  const Image u = oracle::random_image(8, 8, 5), v = oracle::random_image(8, 8, 6);
  for (const LinearOperator& a : {LinearOperator::convolution(gaussian_kernel(3, 0.8), 8, 8),
                                   LinearOperator::smoothing_symbol(1.5, 8, 8)}) {
    EXPECT_NEAR(dot(apply(a, u), v), dot(u, apply_adjoint(a, v)), 1e-12 * l2_norm(u) * l2_norm(v));
  }
}

TEST(Operator, SmoothingFamilyMonotoneInAlpha) {
  const LinearOperator a1 = LinearOperator::smoothing_symbol(1.0, 10, 10);
  const LinearOperator a2 = LinearOperator::smoothing_symbol(2.0, 10, 10);
  EXPECT_EQ(a1.symbol(0), 1.0);
  EXPECT_EQ(a2.symbol(0), 1.0);
  for (std::size_t i = 1; i < a1.symbol_values().size(); ++i) EXPECT_LT(std::abs(a2.symbol(i)), std::abs(a1.symbol(i)));
}

TEST(Operator, ShapeMismatch) {
  const LinearOperator a = LinearOperator::identity(8, 8);
  EXPECT_THROW(apply(a, Image(8, 7)), DimensionError);
}

TEST(Gradient, ConstantHasZeroGradient) {
  const GradientField g = grad(Image(9, 7, 2.5));
  EXPECT_EQ(l2_norm(g), 0.0);
}

TEST(Gradient, RowAndColumnSumsVanish) {
  const GradientField g = grad(oracle::random_image(9, 7, 7));
  for (std::size_t r = 0; r < 7; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 9; ++c) s += g.dx(r, c);
    EXPECT_NEAR(s, 0.0, 1e-14);
  }
  for (std::size_t c = 0; c < 9; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < 7; ++r) s += g.dy(r, c);
    EXPECT_NEAR(s, 0.0, 1e-14);
  }
}

TEST(Gradient, AdjointIdentity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image u = oracle::random_image(8, 8, seed);
    const GradientField g{oracle::random_image(8, 8, 50 + seed), oracle::random_image(8, 8, 90 + seed)};
    EXPECT_NEAR(dot(grad(u), g), -dot(u, div(g)), 1e-12 * l2_norm(u) * l2_norm(g));
  }
}

TEST(Gradient, LaplacianEigenvalues) {
  const std::size_t w = 12, h = 10;
  const std::pair<std::size_t, std::size_t> modes[] = {{0, 1}, {1, 0}, {3, 4}, {5, 6}, {2, 11}};
  for (auto [k, l] : modes) {
    const Image e = oracle::cosine_mode(w, h, k, l);
    const double lk = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / h);
    const double ll = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * l / w);
    EXPECT_LT(oracle::rel_diff(div(grad(e)), -(lk + ll) * e), 1e-12);
  }
}

TEST(Gradient, NegDivGradIsFivePointStencil) {
  const Image u = oracle::random_image(6, 5, 8);
  const Image lap = div(grad(u));
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 6; ++c) {
      const double ref = u((r + 1) % 5, c) + u((r + 4) % 5, c) + u(r, (c + 1) % 6) + u(r, (c + 5) % 6) - 4.0 * u(r, c);
      EXPECT_NEAR(lap(r, c), ref, 1e-14);
    }
}

TEST(ClosedForm, IdentityZeroOrderReturnsData) {
  const Image f = oracle::random_image(10, 10, 9);
  EXPECT_LT(oracle::rel_diff(closed_form_inverse(LinearOperator::identity(10, 10), make_multiplier(params(0.0), 10, 10), f), f), 1e-15);
}

TEST(ClosedForm, NoiseFreeSquareIsRecovered) {
  const Image truth = synth_image(SynthName::square, 100, 100);
  const LinearOperator a = LinearOperator::convolution(gaussian_kernel(15, 1.0), 100, 100);
  const Image data = apply(a, truth);
  for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const Image u = closed_form_inverse(a, make_multiplier(params(s), 100, 100), data);
    EXPECT_GT(paper_psnr(u, truth).db, 150.0) << s;
  }
}

TEST(ClosedForm, MatchesDenseNormalEquations) {
  const std::size_t w = 8, h = 8;
  const BlurKernel k = gaussian_kernel(3, 1.0);
  const Image f = oracle::random_image(w, h, 10);
  const LinearOperator a = LinearOperator::convolution(k, w, h);
  const Eigen::MatrixXd A = oracle::convolution_matrix(k, w, h);
  for (double s : {-1.0, 0.5}) {
    std::vector<double> w2(w * h);
    for (std::size_t kk = 0; kk < h; ++kk)
      for (std::size_t l = 0; l < w; ++l) w2[kk * w + l] = std::pow(1.0 + oracle::periodic_xi_sq(kk, l, h, w), s);
    const Eigen::MatrixXd P2 = oracle::spectral_matrix(w2, w, h);
    const Eigen::MatrixXd normal = A.transpose() * P2 * A;
    const Eigen::VectorXd rhs = A.transpose() * P2 * oracle::to_vector(f);
    const Eigen::VectorXd ref = normal.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd got = oracle::to_vector(closed_form_inverse(a, make_multiplier(params(s), w, h), f));
    EXPECT_LT((got - ref).norm() / ref.norm(), 1e-8) << s;
  }
}

TEST(ClosedForm, RidgeMatchesDenseSolve) {
  const std::size_t w = 6, h = 6;
  const BlurKernel k = gaussian_kernel(5, 1.5);
  const Image f = oracle::random_image(w, h, 11);
  const Eigen::MatrixXd A = oracle::convolution_matrix(k, w, h);
  const double ridge = 0.05;
  const Eigen::MatrixXd normal = A.transpose() * A + ridge * Eigen::MatrixXd::Identity(36, 36);
  const Eigen::VectorXd ref = normal.ldlt().solve(A.transpose() * oracle::to_vector(f));
  const Image got = closed_form_inverse(LinearOperator::convolution(k, w, h), make_multiplier(params(0.0), w, h), f, ridge);
  EXPECT_LT((oracle::to_vector(got) - ref).norm() / ref.norm(), 1e-10);
}

TEST(ClosedForm, SingularWithoutRidge) {
  const Image f = oracle::random_image(8, 8, 12);
  const auto mult = make_multiplier(params(1.0, Variant::homogeneous), 8, 8);
  EXPECT_THROW(closed_form_inverse(LinearOperator::identity(8, 8), mult, f), IllPosedError);
  EXPECT_NO_THROW(closed_form_inverse(LinearOperator::identity(8, 8), mult, f, 1e-3));
  EXPECT_THROW(closed_form_inverse(LinearOperator::identity(8, 8), mult, f, -1.0), std::invalid_argument);
  SobolevParams dct = params(1.0);
  dct.basis = Basis::dct_neumann;
  EXPECT_THROW(closed_form_inverse(LinearOperator::identity(8, 8), make_multiplier(dct, 8, 8), f), std::invalid_argument);
}
