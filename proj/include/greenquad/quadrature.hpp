#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "greenquad/error.hpp"

namespace greenquad {

enum class endpoint_transform {
  none,
  smooth_both,  // r = x^2 (3 - 2x), flattens both endpoints
};

struct quadrature_config {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_subdivisions = 2000;
  endpoint_transform transform = endpoint_transform::none;
};

struct quadrature_result {
  std::complex<double> value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;

  quadrature_result& operator+=(const quadrature_result& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }

  friend quadrature_result operator*(std::complex<double> s, quadrature_result r) {
    r.value *= s;
    r.error_estimate *= std::abs(s);
    return r;
  }
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct gk_panel {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const gk_panel& o) const { return error < o.error; }
};

template <typename F>
gk_panel gk15(F& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> kronrod = fc * gk15_kronrod_weights[7];
  std::complex<double> gauss = fc * gk15_gauss_weights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * gk15_nodes[j];
    const std::complex<double> s = f(c - dx) + f(c + dx);
    kronrod += gk15_kronrod_weights[j] * s;
    if (j % 2 == 1) gauss += gk15_gauss_weights[j / 2] * s;
  }
  evals += 15;
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

inline bool finite(std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: the panel with the largest
/// |K - G| is bisected until the summed estimate meets the tolerance.
template <typename F>
quadrature_result integrate_gk(F&& f, double a, double b, const quadrature_config& cfg = {}) {
  require(a <= b, errc::invalid_argument, "integration bounds out of order");
  quadrature_result res;
  if (a == b) return res;
  std::priority_queue<detail::gk_panel> panels;
  auto first = detail::gk15(f, a, b, res.evaluations);
  std::complex<double> total = first.value;
  double err = first.error;
  panels.push(first);
  int subdivisions = 0;
  std::vector<detail::gk_panel> frozen;
  while (!panels.empty()) {
    if (!detail::finite(total) || !std::isfinite(err)) break;
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) break;
    if (subdivisions >= cfg.max_subdivisions) break;
    auto p = panels.top();
    panels.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      // Panel at floating-point resolution; keep it and stop refining it.
      frozen.push_back(p);
      continue;
    }
    auto l = detail::gk15(f, p.a, mid, res.evaluations);
    auto r = detail::gk15(f, mid, p.b, res.evaluations);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    panels.push(l);
    panels.push(r);
    ++subdivisions;
  }
  // Re-sum from panels to shed accumulated cancellation in the running totals.
  total = 0.0;
  err = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  for (const auto& p : frozen) {
    total += p.value;
    err += p.error;
  }
  res.value = total;
  res.error_estimate = err;
  res.converged = detail::finite(total) && std::isfinite(err) &&
                  err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  return res;
}

/// Integral over (0, 1) with the configured endpoint transform.
template <typename F>
quadrature_result integrate_adaptive(F&& f, const quadrature_config& cfg = {}) {
  switch (cfg.transform) {
    case endpoint_transform::none:
      return integrate_gk(f, 0.0, 1.0, cfg);
    case endpoint_transform::smooth_both:
      return integrate_gk(
          [&](double x) {
            const double r = x * x * (3.0 - 2.0 * x);
            return f(r) * (6.0 * x * (1.0 - x));
          },
          0.0, 1.0, cfg);
  }
  return {};
}

/// Integral over (a, inf) via x = a + v / (1 - v).
template <typename F>
quadrature_result integrate_semi_infinite(F&& f, double a, const quadrature_config& cfg = {}) {
  return integrate_gk(
      [&](double v) {
        const double w = 1.0 - v;
        return f(a + v / w) / (w * w);
      },
      0.0, 1.0, cfg);
}

/// Iterated 2D integral over [a1, b1] x [a2, b2]; inner results feed the outer rule.
template <typename F>
quadrature_result integrate_2d(F&& f, double a1, double b1, double a2, double b2, const quadrature_config& outer,
                               const quadrature_config& inner) {
  long inner_evals = 0;
  bool inner_ok = true;
  double inner_err = 0.0;
  auto res = integrate_gk(
      [&](double x) {
        auto r = integrate_gk([&](double y) { return f(x, y); }, a2, b2, inner);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        inner_err = std::max(inner_err, r.error_estimate);
        return r.value;
      },
      a1, b1, outer);
  res.evaluations = inner_evals;
  res.error_estimate += inner_err * (b1 - a1);
  res.converged = res.converged && inner_ok;
  return res;
}

/// Double-exponential (tanh-sinh) rule on [a, b], refined by halving the step
/// until successive levels agree. Independent of the Gauss-Kronrod engine.
template <typename F>
quadrature_result integrate_tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-10, int max_levels = 12) {
  require(a <= b, errc::invalid_argument, "integration bounds out of order");
  quadrature_result res;
  if (a == b) return res;
  const double half = 0.5 * (b - a);
  constexpr double t_max = 3.2;
  auto node_sum = [&](double t) {
    // x = c +/- half * tanh(pi/2 sinh t); distance to the endpoints computed without cancellation.
    const double s = 0.5 * M_PI * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = 0.5 * M_PI * std::cosh(t) / (ch * ch);
    const double dist = half / (std::exp(s) * ch);  // half * (1 - tanh s)
    std::complex<double> acc{};
    const double xl = a + dist;
    const double xr = b - dist;
    if (xl > a && xl < b) acc += f(xl);
    if (xr > a && xr < b && t != 0.0) acc += f(xr);
    res.evaluations += t == 0.0 ? 1 : 2;
    return acc * w;
  };
  double h = 1.0;
  std::complex<double> sum = node_sum(0.0);
  for (double t = h; t <= t_max; t += h) sum += node_sum(t);
  std::complex<double> estimate = sum * h * half;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) sum += node_sum(t);
    const std::complex<double> next = sum * h * half;
    err = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && err <= rel_tol * std::abs(estimate)) break;
  }
  res.value = estimate;
  res.error_estimate = err;
  res.converged = detail::finite(estimate) && err <= rel_tol * std::abs(estimate);
  return res;
}

}  // namespace greenquad
