#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "greenquad/hermite.hpp"
#include "greenquad/quadrature.hpp"

using namespace greenquad;

TEST(Hermite, LowDegreeClosedForms) {
  for (double x : {-2.5, -0.3, 0.0, 0.8, 3.1}) {
    const double p0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    EXPECT_NEAR(psi(0, x), p0, 1e-15);
    EXPECT_NEAR(psi(1, x), std::sqrt(2.0) * x * p0, 1e-15);
    EXPECT_NEAR(psi(2, x), (2.0 * x * x - 1.0) / std::sqrt(2.0) * p0, 1e-15);
    EXPECT_NEAR(psi(3, x), (2.0 * x * x * x - 3.0 * x) / std::sqrt(3.0) * p0, 1e-14);
  }
}

TEST(Hermite, ParityAndScaling) {
  const hermite_evaluator he(40);
  for (int l = 0; l <= 40; ++l) {
    EXPECT_NEAR(he.psi(l, -1.7), (l % 2 ? -1.0 : 1.0) * he.psi(l, 1.7), 1e-13);
  }
  EXPECT_NEAR(he.psi_scaled(5, 4.0, 0.3), he.psi(5, 0.6) * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(he.psi_scaled(5, -4.0, 0.3), he.psi_scaled(5, 4.0, 0.3), 0.0);
}

TEST(Hermite, HighDegreeStaysFinite) {
  const hermite_evaluator he(512);
  const auto v = he.all(512, 30.0);
  for (double x : v) EXPECT_TRUE(std::isfinite(x));
  EXPECT_GT(std::abs(v[500]), 0.0);
  // Far outside the turning point every psi_l with small l underflows cleanly.
  EXPECT_EQ(he.psi(3, 60.0), 0.0);
  // Envelope |psi_l| <= pi^{-1/4} holds for all l.
  for (double x : he.all(512, 1.3)) EXPECT_LE(std::abs(x), 0.7511255444649425 + 1e-12);
}

TEST(Hermite, DegreeLimits) {
  const hermite_evaluator he(10);
  EXPECT_THROW(he.psi(11, 0.0), error);
  EXPECT_THROW(he.psi_scaled(1, 0.0, 1.0), error);
}

TEST(Hermite, Orthonormality) {
  const hermite_evaluator he(12);
  for (int j = 0; j <= 12; j += 3) {
    for (int k = j; k <= 12; k += 2) {
      auto r = integrate_gk([&](double x) { return std::complex<double>(he.psi(j, x) * he.psi(k, x)); }, -14.0, 14.0,
                            {1e-12});
      EXPECT_NEAR(r.value.real(), j == k ? 1.0 : 0.0, 1e-11) << j << "," << k;
    }
  }
}

TEST(GaussHermite, Moments) {
  // The rule integrates polynomial * e^{-x^2} without a built-in weight.
  const auto g = gauss_hermite(20);
  double m0 = 0, m2 = 0, m4 = 0, m1 = 0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double x = g.nodes[k];
    const double w = g.weights[k] * std::exp(-x * x);
    m0 += w;
    m1 += w * x;
    m2 += w * x * x;
    m4 += w * x * x * x * x;
  }
  EXPECT_NEAR(m0, std::sqrt(M_PI), 1e-13);
  EXPECT_NEAR(m1, 0.0, 1e-13);
  EXPECT_NEAR(m2, std::sqrt(M_PI) / 2.0, 1e-13);
  EXPECT_NEAR(m4, 3.0 * std::sqrt(M_PI) / 4.0, 1e-13);
}

TEST(Mehler, ZeroRadiusIsGroundState) {
  const std::array<double, 2> x{0.3, -1.0}, y{0.5, 0.2}, s{1.0, 2.0};
  const double expect = psi(0, 0.3) * psi(0, 0.5) * psi(0, -1.0) * psi(0, 0.2);
  EXPECT_NEAR(mehler_closed(0.0, x, y, s), expect, 1e-15);
  EXPECT_NEAR(mehler_series_partial(0.0, x, y, s, 30), expect, 1e-15);
}

TEST(Mehler, SeriesConvergesToClosedForm) {
  const std::array<double, 2> x{0.4, -0.7}, y{-0.2, 1.1}, s{1.0, 2.0};
  for (double r : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(mehler_series_partial(r, x, y, s, 200), mehler_closed(r, x, y, s), 1e-12) << r;
  }
}

TEST(Mehler, ComplexKernelAgreesOnRealAxis) {
  const std::array<double, 1> x{0.9}, y{-0.4}, s{1.0};
  EXPECT_NEAR(mehler_kernel({-0.6, 0.0}, 0.9, -0.4).real(), mehler_closed(0.6, x, y, s), 1e-14);
  EXPECT_NEAR(mehler_kernel({-0.6, 0.0}, 0.9, -0.4).imag(), 0.0, 1e-15);
}

TEST(Mehler, ComplexKernelMatchesSeries) {
  const std::complex<double> w(0.3, 0.5);
  const hermite_evaluator he(200);
  const auto px = he.all(200, 0.7);
  const auto py = he.all(200, -1.2);
  std::complex<double> s{}, p(1.0);
  for (int l = 0; l <= 200; ++l) {
    s += p * px[static_cast<std::size_t>(l)] * py[static_cast<std::size_t>(l)];
    p *= w;
  }
  EXPECT_NEAR(std::abs(mehler_kernel(w, 0.7, -1.2) - s), 0.0, 1e-13);
}

TEST(Mehler, RejectsUnitRadius) {
  const std::array<double, 1> x{0.0}, s{1.0};
  EXPECT_THROW(mehler_closed(1.0, x, x, s), error);
  EXPECT_THROW(mehler_kernel({1.0, 0.0}, 0.0, 0.0), error);
}
