#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "greenquad/quadric.hpp"

using namespace greenquad;

namespace {

void expect_spectrum_invariants(const sesquilinear_form& form, const levi_spectrum& s) {
  const int n = form.n();
  const Eigen::MatrixXcd gram = s.basis.adjoint() * s.basis;
  EXPECT_LT((gram - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      cplx v{};
      for (int kk = 0; kk < form.m(); ++kk)
        v += s.lambda[static_cast<std::size_t>(kk)] * form.evaluate(kk, s.column(j), s.column(k));
      EXPECT_NEAR(std::abs(v - (j == k ? s.mu[static_cast<std::size_t>(j)] : 0.0)), 0.0, 1e-10);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (j < s.nu) {
      EXPECT_NE(s.mu[static_cast<std::size_t>(j)], 0.0);
    } else {
      EXPECT_EQ(s.mu[static_cast<std::size_t>(j)], 0.0);
    }
  }
}

}  // namespace

TEST(Forms, CanonicalMatrices) {
  const auto h = heisenberg_form(2);
  EXPECT_EQ(h.m(), 1);
  EXPECT_TRUE(h.matrix(0) == (dense_matrix<cplx>::identity(2)));

  const auto m2 = compute_levi_spectrum(m2_form(), {1.0, 0.0});
  EXPECT_NEAR(m2.mu[0], 1.0, 1e-15);
  EXPECT_NEAR(m2.mu[1], -1.0, 1e-15);

  const auto m3 = m3_form();
  EXPECT_EQ(m3.matrix(0)(0, 0), cplx(2.0));
  EXPECT_EQ(m3.matrix(0)(1, 1), cplx(0.0));
}

TEST(Forms, RejectsNonHermitian) {
  dense_matrix<cplx> a{{cplx(1), cplx(0, 1)}, {cplx(0, 1), cplx(1)}};
  EXPECT_THROW(sesquilinear_form(2, {a}), error);
}

TEST(Forms, SesquilinearSymmetry) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const auto& f : {m1_form(), m2_form(), m3_form(), hypersurface_form(std::vector<double>{1.0, -2.0, 0.5})}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<cplx> z(static_cast<std::size_t>(f.n())), w(z.size());
      for (auto& v : z) v = {g(rng), g(rng)};
      for (auto& v : w) v = {g(rng), g(rng)};
      for (int k = 0; k < f.m(); ++k) EXPECT_NEAR(std::abs(f.evaluate(k, z, w) - std::conj(f.evaluate(k, w, z))), 0.0, 1e-13);
    }
  }
}

TEST(Group, MultiplyHandExample) {
  const auto f = heisenberg_form(1);
  const auto g = group_multiply(f, {{cplx(1, 0)}, {0.0}}, {{cplx(0, 1)}, {0.0}});
  EXPECT_EQ(g.z[0], cplx(1, 1));
  EXPECT_DOUBLE_EQ(g.t[0], -2.0);
}

TEST(Group, IdentityAndInverse) {
  const auto f = m2_form();
  const group_element g{{cplx(0.3, -1.2), cplx(2.0, 0.5)}, {0.7, -0.1}};
  const auto e = group_element::identity(2, 2);
  const auto ge = group_multiply(f, g, e);
  EXPECT_EQ(ge.z, g.z);
  EXPECT_EQ(ge.t, g.t);
  const auto id = group_multiply(f, g, g.inverse());
  for (const auto& v : id.z) EXPECT_EQ(v, cplx(0.0));
  for (double v : id.t) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Group, Associative) {
  const auto f = m3_form();
  const group_element a{{cplx(0.3, -1.2), cplx(2.0, 0.5)}, {0.7, -0.1}};
  const group_element b{{cplx(-1.1, 0.4), cplx(0.2, 0.9)}, {0.2, 1.3}};
  const group_element c{{cplx(0.5, 0.5), cplx(-0.7, 0.1)}, {-0.4, 0.6}};
  const auto l = group_multiply(f, group_multiply(f, a, b), c);
  const auto r = group_multiply(f, a, group_multiply(f, b, c));
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(l.t[k], r.t[k], 1e-13);
}

TEST(Levi, M2Eigenvalues) {
  const auto s = compute_levi_spectrum(m2_form(), {1.0, 0.0});
  EXPECT_NEAR(s.mu[0], 1.0, 1e-14);
  EXPECT_NEAR(s.mu[1], -1.0, 1e-14);
  EXPECT_EQ(s.nu, 2);
  expect_spectrum_invariants(m2_form(), s);
}

TEST(Levi, M3QuarterTurn) {
  const auto s = compute_levi_spectrum(m3_form(), {0.0, 1.0});
  EXPECT_NEAR(s.mu[0], 1.0, 1e-14);
  EXPECT_NEAR(s.mu[1], -1.0, 1e-14);
  EXPECT_EQ(s.nu, 2);
  expect_spectrum_invariants(m3_form(), s);
}

TEST(Levi, M3ZeroDirectionMatchesDenseSolver) {
  const auto s = compute_levi_spectrum(m3_form(), {1.0, 0.0});
  EXPECT_NEAR(s.mu[0], 2.0, 1e-14);
  EXPECT_EQ(s.mu[1], 0.0);
  EXPECT_EQ(s.nu, 1);
  // Dense solver oracle on the same contraction, through a generic copy of the form.
  const sesquilinear_form generic(2, m3_form().matrices());
  const auto d = compute_levi_spectrum(generic, {1.0, 0.0});
  EXPECT_NEAR(d.mu[0], 2.0, 1e-14);
  EXPECT_EQ(d.nu, 1);
}

TEST(Levi, HalfAngleBasisAgreesWithDenseSolver) {
  for (double th : {0.3, 1.4, 2.9, -2.2}) {
    const std::vector<double> lam{2.0 * std::cos(th), 2.0 * std::sin(th)};
    for (const auto& f : {m2_form(), m3_form()}) {
      const auto a = compute_levi_spectrum(f, lam);
      const auto b = compute_levi_spectrum(sesquilinear_form(2, f.matrices()), lam);
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(a.mu[j], b.mu[j], 1e-13);
      expect_spectrum_invariants(f, a);
    }
  }
}

TEST(Levi, RandomFormsInvariants) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 3;
    std::vector<dense_matrix<cplx>> mats;
    for (int k = 0; k < 2; ++k) {
      dense_matrix<cplx> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < a.rows(); ++i) {
        a(i, i) = g(rng);
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
          a(i, j) = {g(rng), g(rng)};
          a(j, i) = std::conj(a(i, j));
        }
      }
      mats.push_back(a);
    }
    const sesquilinear_form f(n, mats);
    expect_spectrum_invariants(f, compute_levi_spectrum(f, {g(rng), g(rng)}));
  }
}

TEST(Levi, ZeroLambdaIsDegenerate) {
  try {
    compute_levi_spectrum(m2_form(), {0.0, 0.0});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_direction);
  }
}

TEST(FormIndex, Enumeration) {
  const auto all = form_index::all(3, 2);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].entries(), (std::vector<int>{1, 2}));
  EXPECT_EQ(all[2].entries(), (std::vector<int>{2, 3}));
  EXPECT_THROW(form_index({2, 1}, 3), error);
  EXPECT_THROW(form_index({4}, 3), error);
}

TEST(Solvability, HeisenbergLevels) {
  const auto f = heisenberg_form(2);
  EXPECT_EQ(solvability(f, {1.0}, form_index({1}, 2)), solvability_verdict::trivial_kernel);
  EXPECT_EQ(solvability(f, {1.0}, form_index({}, 2)), solvability_verdict::nontrivial_kernel);
  EXPECT_EQ(solvability(f, {-1.0}, form_index({1, 2}, 2)), solvability_verdict::nontrivial_kernel);
}

TEST(Solvability, M2LevelOneAlwaysHasKernel) {
  for (double th = 0.1; th < 6.2; th += 0.7) {
    const std::vector<double> lam{std::cos(th), std::sin(th)};
    EXPECT_EQ(solvability_at_level(m2_form(), lam, 1), solvability_verdict::nontrivial_kernel);
    EXPECT_EQ(solvability_at_level(m2_form(), lam, 0), solvability_verdict::trivial_kernel);
    EXPECT_EQ(solvability_at_level(m2_form(), lam, 2), solvability_verdict::trivial_kernel);
  }
}

TEST(Solvability, ZeroEigenvalueReported) {
  const auto f = hypersurface_form(std::vector<double>{1.0, 1.0, 0.0});
  EXPECT_EQ(solvability(f, {1.0}, form_index({}, 3)), solvability_verdict::zero_eigenvalue_without_criterion);
  EXPECT_EQ(solvability(f, {1.0}, form_index({1}, 3)), solvability_verdict::trivial_kernel);
}
