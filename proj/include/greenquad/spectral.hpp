#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "greenquad/error.hpp"
#include "greenquad/hermite.hpp"
#include "greenquad/quadrature.hpp"
#include "greenquad/quadric.hpp"

namespace greenquad {

/// Which eigenvalue ladder: Lambda^{lambda, eta}, or Lambda^{-lambda, -eta/2}.
enum class sign_variant { direct, adjoint_inverse };

/// Which transformed operator: the one with "- signed term" or "+ signed term".
enum class box_variant { direct, adjoint };

struct eigenvalue_lambda {
  double value = 0.0;
  double oscillator = 0.0;
  double signed_part = 0.0;
  double eta_part = 0.0;
};

using xi_function = std::function<cplx(std::span<const double>)>;

namespace detail {

inline double signed_sum(const levi_spectrum& spec, const form_index& L) {
  require(L.n() == spec.n(), errc::invalid_argument, "form index dimension does not match spectrum");
  double s = 0.0;
  for (int j = 1; j <= spec.n(); ++j) {
    const double mu = spec.mu[static_cast<std::size_t>(j - 1)];
    s += L.contains(j) ? mu : -mu;
  }
  return s;
}

inline double eta_norm2(const levi_spectrum& spec, std::span<const cplx> eta) {
  require(eta.size() == static_cast<std::size_t>(spec.n() - spec.nu), errc::invalid_argument,
          "eta must have n - nu entries");
  double s = 0.0;
  for (const auto& e : eta) s += std::norm(e);
  return s;
}

}  // namespace detail

/// Lambda_l = sum (2 l_j + 1)|mu_j| + (sum_{L} mu_j - sum_{not L} mu_j) + |eta|^2; the
/// adjoint_inverse variant flips the signed part and uses |eta|^2 / 4.
inline eigenvalue_lambda lambda_eigenvalue(const levi_spectrum& spec, const form_index& L, std::span<const int> ell,
                                           std::span<const cplx> eta, sign_variant variant) {
  require(ell.size() == static_cast<std::size_t>(spec.nu), errc::invalid_argument,
          "spectral index must have nu entries");
  eigenvalue_lambda r;
  for (int j = 0; j < spec.nu; ++j) {
    require(ell[static_cast<std::size_t>(j)] >= 0, errc::invalid_argument, "spectral index must be non-negative");
    r.oscillator += (2.0 * ell[static_cast<std::size_t>(j)] + 1.0) * std::abs(spec.mu[static_cast<std::size_t>(j)]);
  }
  const double s = detail::signed_sum(spec, L);
  const double e2 = detail::eta_norm2(spec, eta);
  if (variant == sign_variant::direct) {
    r.signed_part = s;
    r.eta_part = e2;
  } else {
    r.signed_part = -s;
    r.eta_part = e2 / 4.0;
  }
  r.value = r.oscillator + r.signed_part + r.eta_part;
  return r;
}

/// (pi_{lambda,eta}(g) h)(xi) in the lambda-adapted coordinates of g.
inline cplx rep_apply(const levi_spectrum& spec, std::span<const cplx> eta, const group_element& g,
                      const xi_function& h, std::span<const double> xi) {
  const int n = spec.n();
  const int nu = spec.nu;
  require(g.z.size() == static_cast<std::size_t>(n) && g.t.size() == spec.lambda.size(), errc::invalid_argument,
          "group element dimensions do not match spectrum");
  require(xi.size() == static_cast<std::size_t>(nu), errc::invalid_argument, "xi must have nu entries");
  require(eta.size() == static_cast<std::size_t>(n - nu), errc::invalid_argument, "eta must have n - nu entries");
  const auto c = spec.coordinates(g.z);
  double phase = 0.0;
  for (std::size_t k = 0; k < g.t.size(); ++k) phase += spec.lambda[k] * g.t[k];
  for (int j = nu; j < n; ++j)
    phase += 2.0 * (c[static_cast<std::size_t>(j)] * std::conj(eta[static_cast<std::size_t>(j - nu)])).real();
  std::vector<double> arg(static_cast<std::size_t>(nu));
  for (int j = 0; j < nu; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    phase -= 2.0 * spec.mu[jj] * c[jj].imag() * (xi[jj] + c[jj].real());
    arg[jj] = xi[jj] + 2.0 * c[jj].real();
  }
  return std::polar(1.0, phase) * h(arg);
}

/// (-Delta + |eta|^2 + sum (mu_j xi_j)^2 -/+ signed term) h at xi; the Laplacian
/// by fourth-order central differences with the given step.
inline cplx transformed_box_apply(const levi_spectrum& spec, const form_index& L, std::span<const cplx> eta,
                                  const xi_function& h, std::span<const double> xi, box_variant variant,
                                  double step = 1e-3) {
  const int nu = spec.nu;
  require(xi.size() == static_cast<std::size_t>(nu), errc::invalid_argument, "xi must have nu entries");
  require(step > 0.0, errc::invalid_argument, "step must be positive");
  std::vector<double> p(xi.begin(), xi.end());
  const cplx h0 = h(p);
  cplx lap{};
  for (int j = 0; j < nu; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double x0 = p[jj];
    auto at = [&](int o) {
      p[jj] = x0 + o * step;
      return h(p);
    };
    lap += (-at(2) + 16.0 * at(1) - 30.0 * h0 + 16.0 * at(-1) - at(-2)) / (12.0 * step * step);
    p[jj] = x0;
  }
  double potential = detail::eta_norm2(spec, eta);
  for (int j = 0; j < nu; ++j) {
    const double v = spec.mu[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
    potential += v * v;
  }
  const double s = detail::signed_sum(spec, L);
  potential += variant == box_variant::direct ? -s : s;
  return -lap + potential * h0;
}

/// Psi^lambda_l(xi) = prod_j psi_{l_j}(|mu_j|^{1/2} xi_j) |mu_j|^{1/4}.
inline double hermite_product(const levi_spectrum& spec, std::span<const int> ell, std::span<const double> xi) {
  require(ell.size() == static_cast<std::size_t>(spec.nu) && xi.size() == ell.size(), errc::invalid_argument,
          "hermite_product dimension mismatch");
  double v = 1.0;
  for (std::size_t j = 0; j < ell.size(); ++j) {
    const hermite_evaluator he(ell[j]);
    v *= he.psi_scaled(ell[j], spec.mu[j], xi[j]);
  }
  return v;
}

/// Szego kernel (2 pi)^{-(n + m/2)} prod_j |mu_j| e^{-|mu_j|(x_j^2 + y_j^2)} in
/// lambda-adapted coordinates; only defined where Box_LL has a kernel.
inline double szego_partial(const levi_spectrum& spec, const form_index& L, std::span<const double> x,
                            std::span<const double> y) {
  const int n = spec.n();
  require(x.size() == static_cast<std::size_t>(n) && y.size() == x.size(), errc::invalid_argument,
          "szego_partial needs n-vectors");
  if (spec.nu != n || solvability(spec, L) != solvability_verdict::nontrivial_kernel)
    fail(errc::invalid_state, "Szego kernel requested outside the nontrivial-kernel configuration");
  const double m = static_cast<double>(spec.lambda.size());
  double v = std::pow(2.0 * M_PI, -(n + m / 2.0));
  for (int j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double a = std::abs(spec.mu[jj]);
    v *= a * std::exp(-a * (x[jj] * x[jj] + y[jj] * y[jj]));
  }
  return v;
}

namespace detail {

// Sum over |l| <= cutoff of (-i)^{|l|} w(l) prod_j psi_{l_j}(a_j / |mu_j|^{1/2}) psi_{l_j}(|mu_j|^{1/2} xi_j).
template <typename W>
cplx hermite_series(const levi_spectrum& spec, std::span<const double> a, std::span<const double> xi, int cutoff,
                    const hermite_evaluator& he, W&& weight) {
  const int nu = spec.nu;
  require(a.size() == static_cast<std::size_t>(nu) && xi.size() == a.size(), errc::invalid_argument,
          "series arguments must have nu entries");
  require(cutoff >= 0, errc::invalid_argument, "cutoff must be non-negative");
  std::vector<std::vector<double>> prod(static_cast<std::size_t>(nu));
  for (int j = 0; j < nu; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double s = std::sqrt(std::abs(spec.mu[jj]));
    const auto pa = he.all(cutoff, a[jj] / s);
    const auto px = he.all(cutoff, s * xi[jj]);
    prod[jj].resize(pa.size());
    for (std::size_t l = 0; l < pa.size(); ++l) prod[jj][l] = pa[l] * px[l];
  }
  static const cplx phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::vector<int> ell(static_cast<std::size_t>(nu), 0);
  cplx sum{};
  auto rec = [&](auto&& self, int j, int used, double p) -> void {
    if (j == nu) {
      sum += phases[used % 4] * (weight(std::span<const int>(ell)) * p);
      return;
    }
    for (int l = 0; l + used <= cutoff; ++l) {
      ell[static_cast<std::size_t>(j)] = l;
      self(self, j + 1, used + l, p * prod[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]);
    }
    ell[static_cast<std::size_t>(j)] = 0;
  };
  rec(rec, 0, 0, 1.0);
  return sum;
}

inline double series_prefactor(const levi_spectrum& spec) {
  const double n = spec.n();
  const double m = static_cast<double>(spec.lambda.size());
  return std::pow(2.0 * M_PI, -n - m / 2.0 + spec.nu / 2.0);
}

}  // namespace detail

/// Partial sum through |l| <= cutoff of the transformed fundamental solution
/// (2 pi)^{-n-m/2+nu/2} sum (-i)^{|l|} / Lambda_l prod_j psi_{l_j}(a_j/|mu_j|^{1/2}) psi_{l_j}(|mu_j|^{1/2} xi_j).
inline cplx u_series_partial(const levi_spectrum& spec, const form_index& L, std::span<const cplx> eta,
                             std::span<const double> a, std::span<const double> xi, int cutoff,
                             const hermite_evaluator& he) {
  const double s = detail::signed_sum(spec, L);
  const double e2 = detail::eta_norm2(spec, eta);
  double scale = std::abs(s) + e2;
  for (int j = 0; j < spec.nu; ++j) scale += std::abs(spec.mu[static_cast<std::size_t>(j)]);
  auto weight = [&](std::span<const int> ell) {
    double lam = s + e2;
    for (std::size_t j = 0; j < ell.size(); ++j) lam += (2.0 * ell[j] + 1.0) * std::abs(spec.mu[j]);
    if (std::abs(lam) <= 1e-12 * scale) fail(errc::kernel_present, "Lambda_l = 0: the transformed operator has a kernel");
    return 1.0 / lam;
  };
  return detail::series_prefactor(spec) * detail::hermite_series(spec, a, xi, cutoff, he, weight);
}

inline cplx u_series_partial(const levi_spectrum& spec, const form_index& L, std::span<const cplx> eta,
                             std::span<const double> a, std::span<const double> xi, int cutoff) {
  return u_series_partial(spec, L, eta, a, xi, cutoff, hermite_evaluator(cutoff));
}

/// Band-limited projection sum_{|l| <= cutoff} P_l h_a of the plane wave h_a = e^{-i xi.a}, with
/// the same prefactor as u_series_partial.
inline cplx projection_series_partial(const levi_spectrum& spec, std::span<const double> a,
                                      std::span<const double> xi, int cutoff, const hermite_evaluator& he) {
  return detail::series_prefactor(spec) *
         detail::hermite_series(spec, a, xi, cutoff, he, [](std::span<const int>) { return 1.0; });
}

/// Mehler-integral form of the same transformed solution: 1/Lambda_l = int_0^inf e^{-s Lambda_l} ds
/// turns the series into prod_j M(-i e^{-2 s |mu_j|}) weighted by e^{-s Lambda_0}. Needs Lambda_0 > 0.
inline quadrature_result u_mehler_integral(const levi_spectrum& spec, const form_index& L, std::span<const cplx> eta,
                                           std::span<const double> a, std::span<const double> xi,
                                           const quadrature_config& cfg = {}) {
  const int nu = spec.nu;
  require(a.size() == static_cast<std::size_t>(nu) && xi.size() == a.size(), errc::invalid_argument,
          "arguments must have nu entries");
  double lam0 = detail::signed_sum(spec, L) + detail::eta_norm2(spec, eta);
  for (int j = 0; j < nu; ++j) lam0 += std::abs(spec.mu[static_cast<std::size_t>(j)]);
  if (!(lam0 > 0.0)) fail(errc::kernel_present, "Lambda_0 <= 0: no Mehler-integral representation");
  auto integrand = [&](double s) -> cplx {
    cplx v = std::exp(-s * lam0);
    if (v == cplx{}) return v;
    for (int j = 0; j < nu; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const double am = std::abs(spec.mu[jj]);
      const double sq = std::sqrt(am);
      v *= mehler_kernel(cplx(0.0, -std::exp(-2.0 * s * am)), a[jj] / sq, sq * xi[jj]);
    }
    return v;
  };
  auto r = integrate_semi_infinite(integrand, 0.0, cfg);
  return detail::series_prefactor(spec) * r;
}

}  // namespace greenquad
