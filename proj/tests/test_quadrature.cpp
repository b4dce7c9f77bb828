#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "greenquad/incomplete_gamma.hpp"
#include "greenquad/quadrature.hpp"

using namespace greenquad;
using C = std::complex<double>;

TEST(GaussKronrod, Polynomial) {
  const auto r = integrate_gk([](double x) { return C(x * x * x - 2.0 * x); }, -1.0, 2.0);
  EXPECT_NEAR(r.value.real(), 3.75 - 3.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(GaussKronrod, EndpointSingularity) {
  const auto r = integrate_gk([](double x) { return C(1.0 / std::sqrt(x)); }, 0.0, 1.0, {1e-10});
  EXPECT_NEAR(r.value.real(), 2.0, 1e-9);
}

TEST(GaussKronrod, ComplexOscillatory) {
  const auto r = integrate_gk([](double x) { return std::exp(C(0.0, 20.0 * x)); }, 0.0, M_PI);
  const C expect = (std::exp(C(0.0, 20.0 * M_PI)) - 1.0) / C(0.0, 20.0);
  EXPECT_NEAR(std::abs(r.value - expect), 0.0, 1e-12);
}

TEST(GaussKronrod, EmptyAndReversedRanges) {
  EXPECT_EQ(integrate_gk([](double) { return C(1.0); }, 1.0, 1.0).value, C(0.0));
  EXPECT_THROW(integrate_gk([](double) { return C(1.0); }, 1.0, 0.0), error);
}

TEST(Adaptive, EndpointTransforms) {
  quadrature_config cfg{1e-11};
  EXPECT_NEAR(integrate_adaptive([](double r) { return C(std::sqrt(r)); }, cfg).value.real(), 2.0 / 3.0, 1e-10);
  cfg.transform = endpoint_transform::smooth_both;
  EXPECT_NEAR(integrate_adaptive([](double r) { return C(r * r); }, cfg).value.real(), 1.0 / 3.0, 1e-12);
}

TEST(SemiInfinite, Exponential) {
  const auto r = integrate_semi_infinite([](double x) { return C(std::exp(-x)); }, 1.0, {1e-12});
  EXPECT_NEAR(r.value.real(), std::exp(-1.0), 1e-12);
}

TEST(TwoDimensional, SeparableProduct) {
  const auto r = integrate_2d([](double x, double y) { return C(x * std::cos(y)); }, 0.0, 1.0, 0.0, M_PI / 2.0,
                              {1e-12}, {1e-12});
  EXPECT_NEAR(r.value.real(), 0.5, 1e-12);
  EXPECT_TRUE(r.converged);
}

TEST(TanhSinh, AgreesWithGaussKronrod) {
  auto f = [](double x) { return C(std::log(x) * std::sqrt(1.0 - x)); };
  const auto a = integrate_tanh_sinh(f, 0.0, 1.0, 1e-12);
  const auto b = integrate_gk(f, 0.0, 1.0, {1e-12});
  // B(1, 3/2) (digamma(1) - digamma(5/2)).
  const double exact = -2.0 / 3.0 * (8.0 / 3.0 - 2.0 * std::log(2.0));
  EXPECT_NEAR(a.value.real(), exact, 1e-11);
  EXPECT_NEAR(b.value.real(), exact, 1e-10);
}

TEST(IncompleteGamma, PositiveShape) {
  EXPECT_NEAR(upper_gamma_scaled(1, 2.5), 1.0, 1e-15);
  EXPECT_NEAR(upper_gamma_scaled(2, 2.5), 3.5, 1e-14);
  EXPECT_NEAR(upper_gamma_scaled(3, 1.0), 2.0 * (1.0 + 1.0 + 0.5), 1e-14);
}

TEST(IncompleteGamma, NonPositiveShapeMatchesQuadrature) {
  for (int a : {0, -1, -3}) {
    for (double x : {0.05, 1.0, 7.0, 40.0, 75.0, 300.0}) {
      // e^x Gamma(a, x) = int_0^inf (x + u)^{a-1} e^{-u} du.
      const auto r =
          integrate_semi_infinite([&](double u) { return C(std::pow(x + u, a - 1) * std::exp(-u)); }, 0.0, {1e-13});
      EXPECT_NEAR(upper_gamma_scaled(a, x) / r.value.real(), 1.0, 1e-10) << a << " " << x;
    }
  }
}

TEST(IncompleteGamma, LargeArgument) {
  // References from a continued-fraction evaluation of e^x E_1(x).
  EXPECT_NEAR(upper_gamma_scaled(0, 40.0) / 0.024404115079628579, 1.0, 1e-15);
  EXPECT_NEAR(upper_gamma_scaled(0, 100.0) / 0.0099019422867330179, 1.0, 1e-15);
  EXPECT_NEAR(upper_gamma_scaled(0, 300.0) / 0.0033222955652707073, 1.0, 1e-15);
}
