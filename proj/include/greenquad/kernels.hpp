#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "greenquad/diffop.hpp"
#include "greenquad/error.hpp"
#include "greenquad/incomplete_gamma.hpp"
#include "greenquad/quadrature.hpp"
#include "greenquad/quadric.hpp"
#include "greenquad/spectral.hpp"

namespace greenquad {

inline quadrature_config kernel_quadrature() { return {1e-11, 1e-300, 2000, endpoint_transform::none}; }

namespace detail {

inline double abs2(std::span<const cplx> z) {
  double s = 0.0;
  for (const auto& v : z) s += std::norm(v);
  return s;
}

inline void require_size(std::span<const cplx> z, std::size_t n, const char* what) {
  require(z.size() == n, errc::invalid_argument, what);
}

// Shared r-integrand for the two-eigenvalue kernels after u = r^{sigma_a}, integrated in e_a = 1 - u:
// with e_a = 1 - u, e_b = 1 - r^{sigma_b}, kappa_b = e_b / sigma_b,
//   physical:  (e_a kappa_b)^{p-1} / C^p,
//   C = sigma_a (2 - e_a) kappa_b rho_a + (2 - e_b) e_a rho_b + i tau e_a kappa_b,
// which is the density sigma_1 sigma_2 r^{sigma_a - 1} / ((1 - r^{sigma_1})(1 - r^{sigma_2}))
// times (i tau + E_1 rho_1 + E_2 rho_2)^{-p} with every factor of (1 - r^{sigma}) cancelled.
struct pair_terms {
  double ea;
  double kb;
  double eb;
};

// The integration variable is e_a itself, so that r^{sigma_a} close to 1 keeps full
// relative precision when sigma_a is small.
inline bool pair_setup(double ea, double sa, double sb, pair_terms& out) {
  if (!(ea > 0.0 && ea < 1.0) || sa <= 0.0) return false;
  out.ea = ea;
  const double logr = std::log1p(-ea) / sa;
  out.eb = -std::expm1(sb * logr);
  out.kb = sb == 0.0 ? -logr : out.eb / sb;
  return out.kb > 0.0 && std::isfinite(out.kb);
}

inline cplx pair_physical(double ea, double sa, double sb, double rho_a, double rho_b, double tau, int p) {
  pair_terms w{};
  if (!pair_setup(ea, sa, sb, w)) return {};
  const double num = w.ea * w.kb;
  const cplx c(sa * (2.0 - w.ea) * w.kb * rho_a + (2.0 - w.eb) * w.ea * rho_b, tau * num);
  return std::pow(num, p - 1) / std::pow(c, p);
}

// Transform-side density 1 / (e_a kappa_b) * exp(-|lambda| (E_a rho_a + E_b rho_b)).
inline double pair_transform(double ea, double sa, double sb, double rho_a, double rho_b, double lam) {
  pair_terms w{};
  if (!pair_setup(ea, sa, sb, w)) return 0.0;
  const double expo = sa * (2.0 - w.ea) / w.ea * rho_a + (2.0 - w.eb) / w.kb * rho_b;
  return std::exp(-lam * expo - std::log(w.ea * w.kb));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Heisenberg group in C^3
// ---------------------------------------------------------------------------

/// 1 / (pi^3 (|z|^4 + t^2)).
inline double n_heisenberg_c3(std::span<const cplx> z, double t) {
  detail::require_size(z, 2, "heisenberg-c3 kernel needs z in C^2");
  const double r2 = detail::abs2(z);
  if (r2 == 0.0 && t == 0.0) fail(errc::singular_point, "kernel is singular at the origin");
  return 1.0 / (M_PI * M_PI * M_PI * (r2 * r2 + t * t));
}

// ---------------------------------------------------------------------------
// Hypersurface with two positive eigenvalues
// ---------------------------------------------------------------------------

namespace detail {

inline void check_mixed(std::span<const cplx> z, std::span<const double> sigma, const form_index& L) {
  require_size(z, 2, "mixed kernel needs z in C^2");
  require(sigma.size() == 2 && sigma[0] > 0.0 && sigma[1] > 0.0, errc::invalid_argument,
          "mixed kernel needs sigma_1, sigma_2 > 0");
  require(L.n() == 2 && L.q() == 1, errc::invalid_argument, "mixed kernel needs L = {1} or {2}");
}

}  // namespace detail

/// Index a (1 or 2) of the r^{sigma_a - 1} weight in the transform at sign(lambda).
inline int mixed_weight_index(const form_index& L, double lambda) {
  const bool first = L.contains(1);
  if (lambda > 0.0) return first ? 2 : 1;
  return first ? 1 : 2;
}

/// Integrand of the transform in the original r variable (no prefactor), for probing
/// its behaviour near r = 1.
inline double n_hat_mixed_integrand(double r, std::span<const cplx> z, double lambda, std::span<const double> sigma,
                                    const form_index& L) {
  detail::check_mixed(z, sigma, L);
  require(r > 0.0 && r < 1.0, errc::range, "r must lie in (0, 1)");
  const int a = mixed_weight_index(L, lambda);
  const double lr = std::log(r);
  const double rho[2] = {std::norm(z[0]), std::norm(z[1])};
  double log_val = (sigma[static_cast<std::size_t>(a - 1)] - 1.0) * lr;
  double expo = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double e = -std::expm1(sigma[static_cast<std::size_t>(j)] * lr);
    log_val -= std::log(e);
    expo += sigma[static_cast<std::size_t>(j)] * (2.0 - e) / e * rho[j];
  }
  return std::exp(log_val - std::abs(lambda) * expo);
}

/// Partial t-transform N(z, lambda^) = 8 / (2 pi)^{5/2} |lambda| sigma_1 sigma_2 int_0^1 ... dr.
inline quadrature_result n_hat_mixed(std::span<const cplx> z, double lambda, std::span<const double> sigma,
                                     const form_index& L, const quadrature_config& cfg = kernel_quadrature()) {
  detail::check_mixed(z, sigma, L);
  if (lambda == 0.0) fail(errc::degenerate_direction, "transform kernel needs lambda != 0");
  if (detail::abs2(z) == 0.0) fail(errc::singular_point, "transform kernel is singular at z = 0");
  const int a = mixed_weight_index(L, lambda);
  const double sa = sigma[static_cast<std::size_t>(a - 1)];
  const double sb = sigma[static_cast<std::size_t>(2 - a)];
  const double ra = std::norm(z[static_cast<std::size_t>(a - 1)]);
  const double rb = std::norm(z[static_cast<std::size_t>(2 - a)]);
  const double lam = std::abs(lambda);
  auto res = integrate_adaptive([&](double u) { return cplx(detail::pair_transform(u, sa, sb, ra, rb, lam)); }, cfg);
  return (8.0 * lam * std::pow(2.0 * M_PI, -2.5)) * res;
}

/// Physical-space kernel: two r-integrals, (i t + ...)^{-2} carrying r^{sigma_1 - 1} and
/// (-i t + ...)^{-2} carrying r^{sigma_2 - 1} for L = {1}, exchanged for L = {2}.
inline quadrature_result n_mixed(std::span<const cplx> z, double t, std::span<const double> sigma,
                                 const form_index& L, const quadrature_config& cfg = kernel_quadrature()) {
  detail::check_mixed(z, sigma, L);
  if (detail::abs2(z) == 0.0) fail(errc::singular_point, "kernel r-integral diverges at z = 0");
  const double rho[2] = {std::norm(z[0]), std::norm(z[1])};
  quadrature_result total;
  for (int a = 1; a <= 2; ++a) {
    const double sa = sigma[static_cast<std::size_t>(a - 1)];
    const double sb = sigma[static_cast<std::size_t>(2 - a)];
    const bool plus = L.contains(1) ? a == 1 : a == 2;
    const double tau = plus ? t : -t;
    total += integrate_adaptive(
        [&](double u) { return detail::pair_physical(u, sa, sb, rho[a - 1], rho[2 - a], tau, 2); }, cfg);
  }
  return cplx(1.0 / (M_PI * M_PI * M_PI)) * total;
}

// ---------------------------------------------------------------------------
// Equal-modulus eigenvalues
// ---------------------------------------------------------------------------

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double equalmu_prefactor(int n, int m, double lambda_abs) {
  return std::pow(2.0 * M_PI, -n - m / 2.0) * std::pow(2.0, n) * std::pow(lambda_abs, n - 1);
}

}  // namespace detail

/// int_0^inf s^{J-1} (s+2)^{n-J-1} e^{-(s+1)c} ds in closed form through integer-shape
/// incomplete gamma functions.
inline double equalmu_integral(double c, int n, int J) {
  require(c > 0.0, errc::invalid_argument, "equal-modulus integral needs c > 0");
  require(J >= 1 && n >= 1, errc::invalid_argument, "equal-modulus integral needs J >= 1, n >= 1");
  const int p = n - J - 1;
  double sum = 0.0;
  if (p >= 0) {
    // Binomial expansion of (s + 2)^p, each piece a complete gamma integral.
    for (int i = 0; i <= p; ++i)
      sum += detail::binomial(p, i) * std::pow(2.0, p - i) * std::tgamma(J + i) * std::pow(c, -(J + i));
    return std::exp(-c) * sum;
  }
  // w = s + 2: expand (w - 2)^{J-1}; each piece int_2^inf w^b e^{-c w} dw = c^{-b-1} Gamma(b+1, 2c).
  for (int i = 0; i <= J - 1; ++i) {
    const int b = i + p;
    sum += detail::binomial(J - 1, i) * std::pow(-2.0, J - 1 - i) * std::pow(c, -b - 1) *
           upper_gamma_scaled(b + 1, 2.0 * c);
  }
  return std::exp(-c) * sum;
}

/// (2 pi)^{-n-m/2} 2^n |lambda|^{n-1} times the integral above, with c = |lambda| |z|^2.
inline double n_equalmu_hat(double c, int n, int J, int m, double lambda_abs) {
  require(c > 0.0, errc::invalid_argument, "n_equalmu_hat needs c > 0");
  require(m >= 1 && lambda_abs > 0.0, errc::invalid_argument, "n_equalmu_hat needs m >= 1 and |lambda| > 0");
  return detail::equalmu_prefactor(n, m, lambda_abs) * equalmu_integral(c, n, J);
}

/// Same quantity by adaptive quadrature of the s-integral.
inline quadrature_result n_equalmu_hat_quadrature(double c, int n, int J, int m, double lambda_abs,
                                                  const quadrature_config& cfg = kernel_quadrature()) {
  require(c > 0.0, errc::invalid_argument, "n_equalmu_hat needs c > 0");
  auto r = integrate_semi_infinite(
      [&](double s) {
        if (!std::isfinite(s)) return cplx{};
        return cplx(std::exp((J - 1) * std::log(s) + (n - J - 1) * std::log(s + 2.0) - (s + 1.0) * c));
      },
      0.0, cfg);
  return cplx(detail::equalmu_prefactor(n, m, lambda_abs)) * r;
}

// ---------------------------------------------------------------------------
// Hypersurface with eigenvalues (1, 1, 0)
// ---------------------------------------------------------------------------

/// (32 lambda^2 / (2 pi)^{7/2}) int_0^1 [|ln r| (1-r)^2]^{-1}
///   exp(-|lambda| (|z'|^2 (1+r)/(1-r) + 2 |z_3|^2 / |ln r|)) dr.
inline quadrature_result n_hat_zeroeigen(std::span<const cplx> z, double lambda,
                                         const quadrature_config& cfg = kernel_quadrature()) {
  detail::require_size(z, 3, "zero-eigenvalue kernel needs z in C^3");
  if (lambda == 0.0) fail(errc::degenerate_direction, "transform kernel needs lambda != 0");
  const double rp = std::norm(z[0]) + std::norm(z[1]);
  const double r3 = std::norm(z[2]);
  if (rp == 0.0 && r3 == 0.0) fail(errc::singular_point, "transform kernel is singular at z = 0");
  const double lam = std::abs(lambda);
  auto res = integrate_adaptive(
      [&](double r) -> cplx {
        if (!(r > 0.0 && r < 1.0)) return {};
        const double e = 1.0 - r;
        const double g = -std::log(r);
        return std::exp(-lam * (rp * (2.0 - e) / e + 2.0 * r3 / g) - std::log(g * e * e));
      },
      cfg);
  return (32.0 * lam * lam * std::pow(2.0 * M_PI, -3.5)) * res;
}

/// (8 / pi^4) int_0^1 [|ln r| (1-r)^2]^{-1} Re{[|z'|^2 (1+r)/(1-r) + 2|z_3|^2/|ln r| + i t]^{-3}} dr.
inline quadrature_result n_zeroeigen(std::span<const cplx> z, double t,
                                     const quadrature_config& cfg = kernel_quadrature()) {
  detail::require_size(z, 3, "zero-eigenvalue kernel needs z in C^3");
  const double rp = std::norm(z[0]) + std::norm(z[1]);
  const double r3 = std::norm(z[2]);
  if (rp == 0.0 && r3 == 0.0) fail(errc::singular_point, "kernel r-integral diverges at z = 0");
  auto res = integrate_adaptive(
      [&](double r) -> cplx {
        if (!(r > 0.0 && r < 1.0)) return {};
        const double e = 1.0 - r;
        const double g = -std::log(r);
        const cplx c(g * rp * (2.0 - e) + 2.0 * r3 * e, t * g * e);
        return (g * g * e / (c * c * c)).real();
      },
      cfg);
  return cplx(8.0 / std::pow(M_PI, 4)) * res;
}

// ---------------------------------------------------------------------------
// Codimension two: M2
// ---------------------------------------------------------------------------

/// Constant of the closed form, fixed by the polar integral at t = 0.
inline constexpr double c_m2 = 1.0 / (2.0 * M_PI * M_PI * M_PI);
/// Value printed in the statement of the closed form, kept for reporting.
inline constexpr double c_m2_stated = 1.0 / (4.0 * M_PI * M_PI * M_PI);

namespace detail {

inline void check_codim2(std::span<const cplx> z, std::span<const double> t, int q) {
  require_size(z, 2, "codimension-two kernel needs z in C^2");
  require(t.size() == 2, errc::invalid_argument, "codimension-two kernel needs t in R^2");
  require(q == 0 || q == 2, errc::invalid_argument, "kernel only exists for q = 0 or q = 2");
}

}  // namespace detail

/// c_m2 / (|z|^4 + |t|^2)^{3/2}; identical for q = 0 and q = 2.
inline double n_m2(std::span<const cplx> z, std::span<const double> t, int q = 0) {
  detail::check_codim2(z, t, q);
  const double r2 = detail::abs2(z);
  const double d = r2 * r2 + t[0] * t[0] + t[1] * t[1];
  if (d == 0.0) fail(errc::singular_point, "kernel is singular at the origin");
  return c_m2 / (d * std::sqrt(d));
}

/// (1 / (4 pi^4 |z|^2)) int_0^{2 pi} d theta / (|z|^2 - i (t_1 cos theta + t_2 sin theta))^2,
/// periodic trapezoid rule.
inline cplx n_m2_polar(std::span<const cplx> z, std::span<const double> t, int nodes = 2048) {
  detail::check_codim2(z, t, 0);
  require(nodes >= 8, errc::invalid_argument, "polar rule needs at least 8 nodes");
  const double r2 = detail::abs2(z);
  if (r2 == 0.0) fail(errc::singular_point, "polar form needs z != 0");
  cplx s{};
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * M_PI * k / nodes;
    const cplx d(r2, -(t[0] * std::cos(th) + t[1] * std::sin(th)));
    s += 1.0 / (d * d);
  }
  return s * (2.0 * M_PI / nodes) / (4.0 * std::pow(M_PI, 4) * r2);
}

/// Half-angle orthonormal eigenbasis (columns) of lambda_1 A_1 + lambda_2 A_2 for M2 / M3,
/// without any reordering so it stays continuous in theta.
inline Eigen::Matrix2d codim2_basis(form_kind kind, double theta) {
  require(kind == form_kind::m2 || kind == form_kind::m3, errc::invalid_argument, "half-angle basis is for M2/M3");
  const double a = kind == form_kind::m2 ? M_PI / 4.0 - theta / 2.0 : theta / 2.0;
  Eigen::Matrix2d v;
  v << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return v;
}

/// e^{-|lambda||z|^2} / (2 pi^3 |z|^2): the equal-modulus transform with n = 2, J = 1, m = 2.
inline double n_hat_m2(std::span<const cplx> z, std::span<const double> lambda) {
  detail::check_codim2(z, lambda, 0);
  const double lam = std::hypot(lambda[0], lambda[1]);
  if (lam == 0.0) fail(errc::degenerate_direction, "transform kernel needs lambda != 0");
  const double r2 = detail::abs2(z);
  if (r2 == 0.0) fail(errc::singular_point, "transform kernel is singular at z = 0");
  return n_equalmu_hat(lam * r2, 2, 1, 2, lam);
}

// ---------------------------------------------------------------------------
// Codimension two: M3
// ---------------------------------------------------------------------------

/// How |z_j|^2 enters the M3 kernels.
///  standard: the coordinates z_1, z_2 as given, prefactor 2 / pi^4 (the closed statement);
///  levi_eigenbasis: coordinates in the theta-dependent eigenbasis of phi^lambda, prefactor 1 / pi^4,
///                   i.e. the exact polar inversion of n_hat_m3.
enum class m3_mode { standard, levi_eigenbasis };

enum class quadrature_method { adaptive, double_exponential };

namespace detail {

struct m3_setup {
  double s1;
  double s2;
  double rho1;
  double rho2;
};

inline m3_setup m3_angle(std::span<const cplx> z, double theta, m3_mode mode) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  m3_setup m{2.0 * c * c, 2.0 * s * s, std::norm(z[0]), std::norm(z[1])};
  if (mode == m3_mode::levi_eigenbasis) {
    // Basis columns (cos b, sin b), (-sin b, cos b) with b = theta / 2; real, so V^* z = V^T z.
    m.rho1 = std::norm(c * z[0] + s * z[1]);
    m.rho2 = std::norm(-s * z[0] + c * z[1]);
  }
  return m;
}

}  // namespace detail

/// sigma_1 sigma_2 |lambda| / pi^3 int_0^1 r^{sigma_a - 1} / ((1 - r^{sigma_1})(1 - r^{sigma_2}))
///   exp(-|lambda| (E_1 rho_1 + E_2 rho_2)) dr, a = 1 for q = 0 and a = 2 for q = 2.
inline quadrature_result n_hat_m3(std::span<const cplx> z, std::span<const double> lambda, int q,
                                  m3_mode mode = m3_mode::levi_eigenbasis,
                                  const quadrature_config& cfg = kernel_quadrature()) {
  detail::check_codim2(z, lambda, q);
  const double lam = std::hypot(lambda[0], lambda[1]);
  if (lam == 0.0) fail(errc::degenerate_direction, "transform kernel needs lambda != 0");
  if (detail::abs2(z) == 0.0) fail(errc::singular_point, "transform kernel is singular at z = 0");
  const auto m = detail::m3_angle(z, std::atan2(lambda[1], lambda[0]), mode);
  const double sa = q == 0 ? m.s1 : m.s2;
  const double sb = q == 0 ? m.s2 : m.s1;
  const double ra = q == 0 ? m.rho1 : m.rho2;
  const double rb = q == 0 ? m.rho2 : m.rho1;
  if (sa == 0.0) fail(errc::degenerate_direction, "weighted eigenvalue vanishes in this direction");
  auto res = integrate_adaptive([&](double u) { return cplx(detail::pair_transform(u, sa, sb, ra, rb, lam)); }, cfg);
  return (lam / (M_PI * M_PI * M_PI)) * res;
}

/// Double (theta, r) integral for the M3 kernel. The theta integral is split at 0 and pi,
/// where one eigenvalue vanishes and the inner integral grows logarithmically.
inline quadrature_result n_m3(std::span<const cplx> z, std::span<const double> t, int q,
                              m3_mode mode = m3_mode::standard, quadrature_method method = quadrature_method::adaptive,
                              const quadrature_config& cfg = kernel_quadrature()) {
  detail::check_codim2(z, t, q);
  if (z[0] == cplx{} || z[1] == cplx{})
    fail(errc::singular_point, "M3 kernel needs z_1 != 0 and z_2 != 0");
  auto inner = [&](double theta, double u) -> cplx {
    const auto m = detail::m3_angle(z, theta, mode);
    const double sa = q == 0 ? m.s1 : m.s2;
    const double sb = q == 0 ? m.s2 : m.s1;
    const double ra = q == 0 ? m.rho1 : m.rho2;
    const double rb = q == 0 ? m.rho2 : m.rho1;
    const double tau = -(t[0] * std::cos(theta) + t[1] * std::sin(theta));
    return detail::pair_physical(u, sa, sb, ra, rb, tau, 3);
  };
  const double pref = (mode == m3_mode::standard ? 2.0 : 1.0) / std::pow(M_PI, 4);
  quadrature_result total;
  if (method == quadrature_method::adaptive) {
    quadrature_config outer = cfg;
    outer.rel_tol = std::max(cfg.rel_tol, 1e-8);
    quadrature_config in = cfg;
    in.transform = endpoint_transform::none;
    total += integrate_2d(inner, 0.0, M_PI, 0.0, 1.0, outer, in);
    total += integrate_2d(inner, M_PI, 2.0 * M_PI, 0.0, 1.0, outer, in);
  } else {
    // Inner variable w = log e_a; the integrand is flat down to w ~ log sigma_a and decays like e^{2w} below it.
    for (double a : {0.0, M_PI}) {
      long evals = 0;
      bool ok = true;
      auto r = integrate_tanh_sinh(
          [&](double theta) {
            const auto m = detail::m3_angle(z, theta, mode);
            const double sa = q == 0 ? m.s1 : m.s2;
            if (!(sa > 0.0)) return cplx{};
            const double w_lo = std::min(std::log(sa), 0.0) - 40.0;
            auto ir = integrate_tanh_sinh(
                [&](double w) {
                  const double ea = std::exp(w);
                  return ea * inner(theta, ea);
                },
                w_lo, 0.0, std::max(cfg.rel_tol, 1e-10));
            evals += ir.evaluations;
            ok = ok && ir.converged;
            return ir.value;
          },
          a, a + M_PI, std::max(cfg.rel_tol, 1e-8));
      r.evaluations = evals;
      r.converged = r.converged && ok;
      total += r;
    }
  }
  return cplx(pref) * total;
}

// ---------------------------------------------------------------------------
// Fourier inversion in lambda
// ---------------------------------------------------------------------------

/// (2 pi)^{-1/2} int_R e^{i lambda t} nhat(lambda) d lambda, truncated where e^{-|lambda| decay}
/// is below double resolution.
template <typename F>
quadrature_result invert_lambda_1d(F&& nhat, double t, double decay,
                                   const quadrature_config& cfg = {1e-9, 1e-300, 2000, endpoint_transform::none}) {
  require(decay > 0.0, errc::invalid_argument, "decay rate must be positive");
  const double cap = 45.0 / decay;
  long evals = 0;
  bool ok = true;
  auto call = [&](double l) {
    auto r = nhat(l);
    evals += r.evaluations;
    ok = ok && r.converged;
    return r.value;
  };
  auto res = integrate_gk(
      [&](double l) { return std::polar(1.0, l * t) * call(l) + std::polar(1.0, -l * t) * call(-l); }, 0.0, cap,
      cfg);
  res.evaluations += evals;
  res.converged = res.converged && ok;
  return std::pow(2.0 * M_PI, -0.5) * res;
}

/// (2 pi)^{-1} int_{R^2} e^{i lambda . t} nhat(lambda) d lambda in polar coordinates, the angle
/// split at 0 and pi.
template <typename F>
quadrature_result invert_lambda_2d(F&& nhat, std::span<const double> t, double decay,
                                   const quadrature_config& cfg = {1e-8, 1e-300, 2000, endpoint_transform::none}) {
  require(decay > 0.0, errc::invalid_argument, "decay rate must be positive");
  require(t.size() == 2, errc::invalid_argument, "t must be in R^2");
  const double cap = 45.0 / decay;
  long evals = 0;
  bool ok = true;
  auto radial = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto r = integrate_gk(
        [&](double rho) -> cplx {
          const double l[2] = {rho * c, rho * s};
          auto v = nhat(std::span<const double>(l, 2));
          evals += v.evaluations;
          ok = ok && v.converged;
          return rho * std::polar(1.0, rho * (c * t[0] + s * t[1])) * v.value;
        },
        0.0, cap, cfg);
    ok = ok && r.converged;
    return r.value;
  };
  quadrature_result total;
  total += integrate_gk(radial, 0.0, M_PI, cfg);
  total += integrate_gk(radial, M_PI, 2.0 * M_PI, cfg);
  total.evaluations += evals;
  total.converged = total.converged && ok;
  return cplx(1.0 / (2.0 * M_PI)) * total;
}

// ---------------------------------------------------------------------------
// Kernel selection
// ---------------------------------------------------------------------------

enum class kernel_family { heisenberg_c3, mixed, zero_eigen, m2, m3, equal_modulus };

inline std::string to_string(kernel_family f) {
  switch (f) {
    case kernel_family::heisenberg_c3: return "heisenberg-c3";
    case kernel_family::mixed: return "mixed";
    case kernel_family::zero_eigen: return "zero-eigen";
    case kernel_family::m2: return "m2";
    case kernel_family::m3: return "m3";
    case kernel_family::equal_modulus: return "equal-modulus";
  }
  return "unknown";
}

struct kernel_spec {
  kernel_family family = kernel_family::heisenberg_c3;
  std::vector<double> sigma{1.0, 1.0};  // mixed
  int form_component = 1;               // mixed: L = {form_component}
  int q = 0;                            // m2, m3
  m3_mode mode = m3_mode::standard;     // m3
  int n = 2;                            // equal_modulus
  int J = 1;                            // equal_modulus
  int m = 1;                            // equal_modulus
  quadrature_config quadrature = kernel_quadrature();

  static kernel_spec heisenberg() { return {}; }
  static kernel_spec mixed(std::vector<double> sigma, int component = 1) {
    kernel_spec s;
    s.family = kernel_family::mixed;
    s.sigma = std::move(sigma);
    s.form_component = component;
    return s;
  }
  static kernel_spec zero_eigen() {
    kernel_spec s;
    s.family = kernel_family::zero_eigen;
    return s;
  }
  static kernel_spec m2(int q = 0) {
    kernel_spec s;
    s.family = kernel_family::m2;
    s.q = q;
    return s;
  }
  static kernel_spec m3(int q = 0, m3_mode mode = m3_mode::standard) {
    kernel_spec s;
    s.family = kernel_family::m3;
    s.q = q;
    s.mode = mode;
    return s;
  }
  static kernel_spec equal_modulus(int n, int J, int m) {
    kernel_spec s;
    s.family = kernel_family::equal_modulus;
    s.n = n;
    s.J = J;
    s.m = m;
    return s;
  }

  int complex_dim() const {
    switch (family) {
      case kernel_family::zero_eigen: return 3;
      case kernel_family::equal_modulus: return n;
      default: return 2;
    }
  }
  int codim() const {
    switch (family) {
      case kernel_family::m2:
      case kernel_family::m3: return 2;
      case kernel_family::equal_modulus: return m;
      default: return 1;
    }
  }
  /// Q - 2 for the dilation (z, t) -> (delta z, delta^2 t).
  int homogeneity_degree() const { return 2 * complex_dim() + 2 * codim() - 2; }

  form_index component() const {
    switch (family) {
      case kernel_family::heisenberg_c3:
      case kernel_family::zero_eigen: return form_index({1}, complex_dim());
      case kernel_family::mixed: return form_index({form_component}, 2);
      case kernel_family::m2:
      case kernel_family::m3: return q == 0 ? form_index({}, 2) : form_index({1, 2}, 2);
      case kernel_family::equal_modulus: break;
    }
    fail(errc::unsupported_operator, "no form component attached to this family");
  }

  sesquilinear_form form() const {
    switch (family) {
      case kernel_family::heisenberg_c3: return heisenberg_form(2);
      case kernel_family::mixed: return hypersurface_form(sigma);
      case kernel_family::zero_eigen: return hypersurface_form(std::vector<double>{1.0, 1.0, 0.0});
      case kernel_family::m2: return m2_form();
      case kernel_family::m3: return m3_form();
      case kernel_family::equal_modulus: return heisenberg_form(n);
    }
    return heisenberg_form(1);
  }
};

/// N(z, t) for the selected family. Closed forms carry a zero error estimate.
inline quadrature_result physical_kernel(const kernel_spec& spec, std::span<const cplx> z, std::span<const double> t) {
  require(z.size() == static_cast<std::size_t>(spec.complex_dim()), errc::invalid_argument,
          "z dimension does not match kernel family");
  require(t.size() == static_cast<std::size_t>(spec.codim()), errc::invalid_argument,
          "t dimension does not match kernel family");
  switch (spec.family) {
    case kernel_family::heisenberg_c3: return {n_heisenberg_c3(z, t[0]), 0.0, 1, true};
    case kernel_family::mixed: return n_mixed(z, t[0], spec.sigma, spec.component(), spec.quadrature);
    case kernel_family::zero_eigen: return n_zeroeigen(z, t[0], spec.quadrature);
    case kernel_family::m2: return {n_m2(z, t, spec.q), 0.0, 1, true};
    case kernel_family::m3: return n_m3(z, t, spec.q, spec.mode, quadrature_method::adaptive, spec.quadrature);
    case kernel_family::equal_modulus: break;
  }
  fail(errc::unsupported_operator, "equal-modulus family only has a transform-side kernel");
}

/// N(z, lambda^) for the selected family.
inline quadrature_result transform_kernel(const kernel_spec& spec, std::span<const cplx> z,
                                          std::span<const double> lambda) {
  require(z.size() == static_cast<std::size_t>(spec.complex_dim()), errc::invalid_argument,
          "z dimension does not match kernel family");
  require(lambda.size() == static_cast<std::size_t>(spec.codim()), errc::invalid_argument,
          "lambda dimension does not match kernel family");
  double lam = 0.0;
  for (double l : lambda) lam += l * l;
  lam = std::sqrt(lam);
  if (lam == 0.0) fail(errc::degenerate_direction, "transform kernel needs lambda != 0");
  const double r2 = detail::abs2(z);
  if (r2 == 0.0) fail(errc::singular_point, "transform kernel is singular at z = 0");
  switch (spec.family) {
    case kernel_family::heisenberg_c3: return {n_equalmu_hat(lam * r2, 2, 1, 1, lam), 0.0, 1, true};
    case kernel_family::mixed: return n_hat_mixed(z, lambda[0], spec.sigma, spec.component(), spec.quadrature);
    case kernel_family::zero_eigen: return n_hat_zeroeigen(z, lambda[0], spec.quadrature);
    case kernel_family::m2: return {n_hat_m2(z, lambda), 0.0, 1, true};
    case kernel_family::m3: return n_hat_m3(z, lambda, spec.q, spec.mode, spec.quadrature);
    case kernel_family::equal_modulus: return {n_equalmu_hat(lam * r2, spec.n, spec.J, spec.m, lam), 0.0, 1, true};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Annihilation check
// ---------------------------------------------------------------------------

struct annihilation_variant {
  bool adjoint = false;
  double lambda_sign = 1.0;
  std::string name() const {
    return std::string(adjoint ? "adjoint" : "direct") + (lambda_sign > 0 ? ",+lambda" : ",-lambda");
  }
};

struct annihilation_report {
  double max_relative_residual = 0.0;
  double runner_up_residual = 0.0;  // best worst-case residual among variants that do not annihilate
  annihilation_variant variant;
  std::vector<annihilation_variant> annihilating;  // variants within tolerance at every point
  bool stable = true;
  bool converged = true;
  std::vector<double> residuals;  // per point, for the selected variant
};

/// Basis in which the kernel's coordinates are written: identity for diagonal
/// hypersurfaces, the half-angle eigenbasis for M2 / M3.
inline dense_matrix<cplx> kernel_basis(const kernel_spec& spec, std::span<const double> lambda) {
  const int n = spec.complex_dim();
  if (spec.family == kernel_family::m2 || spec.family == kernel_family::m3) {
    const auto v = codim2_basis(spec.family == kernel_family::m2 ? form_kind::m2 : form_kind::m3,
                                std::atan2(lambda[1], lambda[0]));
    dense_matrix<cplx> b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v(i, j);
    return b;
  }
  return dense_matrix<cplx>::identity(static_cast<std::size_t>(n));
}

/// Points (x_1..x_n, y_1..y_n) spread over spheres |z| = radius.
inline std::vector<std::vector<double>> ring_points(int n, std::span<const double> radii, int per_ring) {
  std::vector<std::vector<double>> pts;
  for (double rad : radii) {
    for (int k = 0; k < per_ring; ++k) {
      std::vector<double> p(static_cast<std::size_t>(2 * n));
      double norm = 0.0;
      for (int j = 0; j < 2 * n; ++j) {
        // Deterministic, generic directions with every coordinate nonzero.
        p[static_cast<std::size_t>(j)] = std::cos(1.3 + 0.7 * k + 1.9 * j + 0.37 * j * k) + 1.7;
        norm += p[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
      }
      for (auto& v : p) v *= rad / std::sqrt(norm);
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

/// Applies the partially transformed diagonal operator to N(., lambda^) by finite differences
/// at each point, over the four sign variants {direct, adjoint} x {+lambda, -lambda}, and keeps
/// the variant with the smallest worst-case residual. Residuals are relative to
/// (sum_j |mu_j|) |N|. The identification is stable when the same non-empty set of variants is
/// within `tolerance` at every point; radial kernels make two variants tie.
inline annihilation_report verify_annihilation(const kernel_spec& spec, std::span<const double> lambda,
                                               const std::vector<std::vector<double>>& points, double h,
                                               double tolerance = 1e-3) {
  require(spec.family != kernel_family::equal_modulus, errc::unsupported_operator,
          "annihilation check needs a family with a form component");
  const int n = spec.complex_dim();
  const auto form = spec.form();
  const auto basis = kernel_basis(spec, lambda);
  const auto L = spec.component();
  const auto levi = compute_levi_spectrum(form, std::vector<double>(lambda.begin(), lambda.end()));
  double scale = 0.0;
  for (double mu : levi.mu) scale += std::abs(mu);

  std::map<std::vector<double>, cplx> memo;
  bool converged = true;
  point_function f = [&](std::span<const double> p) -> cplx {
    std::vector<double> key(p.begin(), p.end());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      z[static_cast<std::size_t>(j)] = {p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(n + j)]};
    auto r = transform_kernel(spec, z, lambda);
    converged = converged && r.converged;
    memo.emplace(std::move(key), r.value);
    return r.value;
  };

  const annihilation_variant variants[4] = {{false, 1.0}, {false, -1.0}, {true, 1.0}, {true, -1.0}};
  std::vector<std::vector<double>> res(4);
  for (int v = 0; v < 4; ++v) {
    std::vector<double> lam(lambda.begin(), lambda.end());
    for (auto& l : lam) l *= variants[v].lambda_sign;
    const auto op = partial_transform_t(box_diagonal(form, basis, L, variants[v].adjoint), lam);
    for (const auto& p : points) {
      require(p.size() == static_cast<std::size_t>(2 * n), errc::invalid_argument, "point dimension mismatch");
      const cplx val = apply_fd(op, f, p, h);
      const cplx base = f(p);
      res[static_cast<std::size_t>(v)].push_back(std::abs(val) / (scale * std::abs(base)));
    }
  }
  annihilation_report rep;
  int best = 0;
  double best_max = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 4; ++v) {
    const auto& r = res[static_cast<std::size_t>(v)];
    const double mx = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    if (mx < best_max) {
      best_max = mx;
      best = v;
    }
  }
  rep.max_relative_residual = best_max;
  rep.variant = variants[best];
  rep.residuals = res[static_cast<std::size_t>(best)];
  rep.converged = converged;
  rep.runner_up_residual = std::numeric_limits<double>::infinity();
  std::vector<bool> first(4);
  for (int v = 0; v < 4; ++v) {
    const auto& r = res[static_cast<std::size_t>(v)];
    const double mx = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    if (mx <= tolerance) {
      rep.annihilating.push_back(variants[v]);
    } else {
      rep.runner_up_residual = std::min(rep.runner_up_residual, mx);
    }
    first[static_cast<std::size_t>(v)] = !r.empty() && r[0] <= tolerance;
  }
  rep.stable = !points.empty() && first[static_cast<std::size_t>(best)];
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int v = 0; v < 4; ++v)
      if ((res[static_cast<std::size_t>(v)][i] <= tolerance) != first[static_cast<std::size_t>(v)]) rep.stable = false;
  return rep;
}

}  // namespace greenquad
