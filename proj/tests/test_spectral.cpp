#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "greenquad/spectral.hpp"

using namespace greenquad;

namespace {

const std::vector<cplx> no_eta;

}  // namespace

TEST(Eigenvalue, HeisenbergLadder) {
  const auto s = compute_levi_spectrum(heisenberg_form(1), {1.0});
  const std::array<int, 1> l0{0}, l3{3};
  EXPECT_DOUBLE_EQ(lambda_eigenvalue(s, form_index({}, 1), l0, no_eta, sign_variant::direct).value, 0.0);
  EXPECT_DOUBLE_EQ(lambda_eigenvalue(s, form_index({1}, 1), l0, no_eta, sign_variant::direct).value, 2.0);
  EXPECT_DOUBLE_EQ(lambda_eigenvalue(s, form_index({}, 1), l3, no_eta, sign_variant::direct).value, 6.0);
  EXPECT_DOUBLE_EQ(lambda_eigenvalue(s, form_index({}, 1), l0, no_eta, sign_variant::adjoint_inverse).value, 2.0);
}

TEST(Eigenvalue, EtaContribution) {
  const auto s = compute_levi_spectrum(hypersurface_form(std::vector<double>{2.0, 0.0}), {1.0});
  ASSERT_EQ(s.nu, 1);
  const std::vector<cplx> eta{cplx(1.0, 1.0)};
  const std::array<int, 1> l{1};
  const auto d = lambda_eigenvalue(s, form_index({}, 2), l, eta, sign_variant::direct);
  EXPECT_DOUBLE_EQ(d.oscillator, 6.0);
  EXPECT_DOUBLE_EQ(d.signed_part, -2.0);
  EXPECT_DOUBLE_EQ(d.eta_part, 2.0);
  const auto a = lambda_eigenvalue(s, form_index({}, 2), l, eta, sign_variant::adjoint_inverse);
  EXPECT_DOUBLE_EQ(a.signed_part, 2.0);
  EXPECT_DOUBLE_EQ(a.eta_part, 0.5);
}

TEST(Eigenvalue, RejectsWrongShapes) {
  const auto s = compute_levi_spectrum(m2_form(), {1.0, 0.0});
  const std::array<int, 1> l{0};
  EXPECT_THROW(lambda_eigenvalue(s, form_index({}, 2), l, no_eta, sign_variant::direct), error);
}

TEST(TransformedBox, HermiteProductsAreEigenfunctions) {
  const auto s = compute_levi_spectrum(hypersurface_form(std::vector<double>{0.7, -1.6}), {1.3});
  const form_index L({2}, 2);
  for (const auto& ell : {std::array<int, 2>{0, 0}, std::array<int, 2>{2, 1}, std::array<int, 2>{4, 3}}) {
    const xi_function h = [&](std::span<const double> xi) { return cplx(hermite_product(s, ell, xi)); };
    const std::array<double, 2> xi{0.4, -0.3};
    const double h0 = hermite_product(s, ell, xi);
    // The direct variant subtracts the signed term, so it matches the ladder of the flipped sign.
    const double lam_direct = lambda_eigenvalue(s, L, ell, no_eta, sign_variant::adjoint_inverse).value;
    const double lam_adjoint = lambda_eigenvalue(s, L, ell, no_eta, sign_variant::direct).value;
    EXPECT_NEAR(std::abs(transformed_box_apply(s, L, no_eta, h, xi, box_variant::direct) - lam_direct * h0), 0.0,
                1e-6);
    EXPECT_NEAR(std::abs(transformed_box_apply(s, L, no_eta, h, xi, box_variant::adjoint) - lam_adjoint * h0), 0.0,
                1e-6);
  }
}

TEST(Representation, GroupHomomorphism) {
  const auto form = m2_form();
  const auto s = compute_levi_spectrum(form, {0.6, -0.8});
  const group_element g{{cplx(0.3, -0.2), cplx(-0.1, 0.4)}, {0.5, -0.7}};
  const group_element k{{cplx(-0.25, 0.15), cplx(0.2, 0.1)}, {-0.3, 0.2}};
  const xi_function h = [](std::span<const double> xi) {
    return cplx(std::exp(-0.5 * (xi[0] * xi[0] + xi[1] * xi[1])) * (1.0 + xi[0]), xi[1]);
  };
  const xi_function pk = [&](std::span<const double> xi) { return rep_apply(s, no_eta, k, h, xi); };
  for (const auto& xi : {std::array<double, 2>{0.1, 0.2}, std::array<double, 2>{-0.7, 1.1}}) {
    const cplx lhs = rep_apply(s, no_eta, g, pk, xi);
    const cplx rhs = rep_apply(s, no_eta, group_multiply(form, g, k), h, xi);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
  }
}

TEST(Representation, Unitary) {
  const auto s = compute_levi_spectrum(heisenberg_form(1), {2.0});
  const group_element g{{cplx(0.4, -0.9)}, {1.3}};
  const xi_function h = [](std::span<const double> xi) { return cplx(std::exp(-xi[0] * xi[0])); };
  // Translation by 2 Re c keeps the L^2 norm.
  auto r = integrate_gk(
      [&](double x) {
        const std::array<double, 1> xi{x};
        return cplx(std::norm(rep_apply(s, no_eta, g, h, xi)));
      },
      -12.0, 12.0, {1e-12});
  EXPECT_NEAR(r.value.real(), std::sqrt(M_PI / 2.0), 1e-11);
}

TEST(Szego, ClosedFormAndGuards) {
  const auto s = compute_levi_spectrum(heisenberg_form(1), {1.0});
  const std::array<double, 1> x{0.2}, y{-0.5};
  EXPECT_NEAR(szego_partial(s, form_index({}, 1), x, y), std::pow(2.0 * M_PI, -1.5) * std::exp(-(0.04 + 0.25)),
              1e-16);
  EXPECT_THROW(szego_partial(s, form_index({1}, 1), x, y), error);
  const auto z = compute_levi_spectrum(hypersurface_form(std::vector<double>{1.0, 0.0}), {1.0});
  const std::array<double, 2> x2{0.0, 0.0};
  EXPECT_THROW(szego_partial(z, form_index({}, 2), x2, x2), error);
}

TEST(Series, KernelPresentDetected) {
  const auto s = compute_levi_spectrum(heisenberg_form(1), {1.0});
  const std::array<double, 1> a{0.3}, xi{0.1};
  try {
    u_series_partial(s, form_index({}, 1), no_eta, a, xi, 10);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::kernel_present);
  }
  EXPECT_THROW(u_mehler_integral(s, form_index({}, 1), no_eta, a, xi), error);
}

TEST(Series, PartialSumApproachesMehlerIntegral) {
  const auto s = compute_levi_spectrum(heisenberg_form(1), {1.0});
  const form_index L({1}, 1);
  const std::array<double, 1> a{0.3}, xi{-0.4};
  const auto ref = u_mehler_integral(s, L, no_eta, a, xi, {1e-12});
  ASSERT_TRUE(ref.converged);
  const cplx s100 = u_series_partial(s, L, no_eta, a, xi, 100);
  const cplx s400 = u_series_partial(s, L, no_eta, a, xi, 400);
  EXPECT_LT(std::abs(s400 - ref.value), std::abs(s100 - ref.value));
  EXPECT_LT(std::abs(s400 - ref.value), 1e-4);
}

TEST(Series, TwoDimensionalAgreement) {
  const auto s = compute_levi_spectrum(hypersurface_form(std::vector<double>{1.0, 2.0}), {1.0});
  const form_index L({1}, 2);
  const std::array<double, 2> a{0.5, -0.2}, xi{0.1, 0.3};
  const auto ref = u_mehler_integral(s, L, no_eta, a, xi, {1e-12});
  const cplx part = u_series_partial(s, L, no_eta, a, xi, 400);
  EXPECT_LT(std::abs(part - ref.value) / std::abs(ref.value), 1e-3);
}

TEST(Series, ProjectionApproachesPlaneWave) {
  // sum_l (-i)^l psi_l(a) psi_l(xi) is the Fourier kernel e^{-i a xi} / sqrt(2 pi); pointwise
  // convergence of the partial sums is slow.
  const auto s = compute_levi_spectrum(heisenberg_form(1), {1.0});
  const hermite_evaluator he(400);
  const std::array<double, 1> a{0.7}, xi{-0.4};
  const cplx expect = std::exp(cplx(0.0, 0.7 * 0.4)) / std::sqrt(2.0 * M_PI);
  auto err = [&](int K) { return std::abs(projection_series_partial(s, a, xi, K, he) * (2.0 * M_PI) - expect); };
  EXPECT_LT(err(400), err(40));
  EXPECT_LT(err(400), 1e-2);
}
