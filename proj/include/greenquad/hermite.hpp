#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "greenquad/error.hpp"

namespace greenquad {

inline constexpr int default_hermite_degree = 512;

/// Unit-norm Hermite functions psi_l(x) = h_l(x) e^{-x^2/2} by the three-term
/// recurrence, carried with a running power-of-two exponent so that large |x|
/// and large l neither overflow nor underflow before the Gaussian is applied.
class hermite_evaluator {
 public:
  explicit hermite_evaluator(int max_degree = default_hermite_degree) : max_degree_(max_degree) {
    require(max_degree >= 0, errc::invalid_argument, "max_degree must be non-negative");
  }

  int max_degree() const { return max_degree_; }

  /// psi_0(x) .. psi_K(x).
  std::vector<double> all(int K, double x) const {
    require(K >= 0, errc::invalid_argument, "degree must be non-negative");
    require(K <= max_degree_, errc::range, "Hermite degree exceeds max_degree");
    std::vector<double> out(static_cast<std::size_t>(K) + 1);
    // Unnormalised-by-Gaussian values p_l = psi_l e^{x^2/2}, scaled by 2^{-scale}.
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25);
    int scale = 0;
    const double gauss_log2 = -0.5 * x * x / M_LN2;
    out[0] = finish(cur, 0, gauss_log2);
    for (int l = 0; l < K; ++l) {
      const double next = x * std::sqrt(2.0 / (l + 1)) * cur - std::sqrt(static_cast<double>(l) / (l + 1)) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > 0x1p500) {
        cur = std::ldexp(cur, -500);
        prev = std::ldexp(prev, -500);
        scale += 500;
      }
      out[static_cast<std::size_t>(l) + 1] = finish(cur, scale, gauss_log2);
    }
    return out;
  }

  double psi(int ell, double x) const {
    require(ell >= 0, errc::invalid_argument, "degree must be non-negative");
    return all(ell, x)[static_cast<std::size_t>(ell)];
  }

  /// psi_l(|mu|^{1/2} xi) |mu|^{1/4}.
  double psi_scaled(int ell, double mu, double xi) const {
    require(mu != 0.0, errc::invalid_argument, "psi_scaled needs mu != 0");
    const double a = std::abs(mu);
    return psi(ell, std::sqrt(a) * xi) * std::pow(a, 0.25);
  }

 private:
  static double finish(double mantissa, int scale, double gauss_log2) {
    if (mantissa == 0.0) return 0.0;
    const double lg = std::log2(std::abs(mantissa)) + scale + gauss_log2;
    if (lg < -1074.0) return 0.0;
    return std::copysign(std::exp2(lg), mantissa);
  }

  int max_degree_;
};

inline double psi(int ell, double x) { return hermite_evaluator(std::max(ell, 0)).psi(ell, x); }

inline double psi_scaled(int ell, double mu, double xi) {
  return hermite_evaluator(std::max(ell, 0)).psi_scaled(ell, mu, xi);
}

/// Closed form of sum_l prod_j (-r^{sigma_j})^{l_j} psi_{l_j}(x_j) psi_{l_j}(y_j).
inline double mehler_closed(double r, std::span<const double> x, std::span<const double> y,
                            std::span<const double> sigma) {
  require(r >= 0.0 && r < 1.0, errc::range, "mehler_closed needs 0 <= r < 1");
  require(x.size() == y.size() && x.size() == sigma.size(), errc::invalid_argument,
          "mehler_closed dimension mismatch");
  double log_val = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double rs = r == 0.0 ? 0.0 : std::pow(r, sigma[j]);
    const double one_minus = r == 0.0 ? 1.0 : -std::expm1(sigma[j] * std::log(r));
    const double sp = x[j] + y[j];
    const double sm = x[j] - y[j];
    log_val += -0.5 * std::log(M_PI * one_minus * (1.0 + rs)) - ((1.0 + rs) / one_minus) * sp * sp / 4.0 -
               (one_minus / (1.0 + rs)) * sm * sm / 4.0;
  }
  return std::exp(log_val);
}

/// One-dimensional Mehler kernel sum_l w^l psi_l(x) psi_l(y) at complex |w| < 1.
inline std::complex<double> mehler_kernel(std::complex<double> w, double x, double y) {
  require(std::abs(w) < 1.0, errc::range, "mehler_kernel needs |w| < 1");
  const std::complex<double> one(1.0, 0.0);
  const double sp = x + y;
  const double sm = x - y;
  const auto expo = -((one - w) / (one + w)) * (sp * sp / 4.0) - ((one + w) / (one - w)) * (sm * sm / 4.0);
  return std::exp(expo) / std::sqrt(M_PI * (one - w * w));
}

/// Partial sum of the Mehler series through total degree `cutoff`.
inline double mehler_series_partial(double r, std::span<const double> x, std::span<const double> y,
                                    std::span<const double> sigma, int cutoff) {
  require(cutoff >= 0, errc::invalid_argument, "cutoff must be non-negative");
  require(x.size() == y.size() && x.size() == sigma.size() && !x.empty(), errc::invalid_argument,
          "mehler_series_partial dimension mismatch");
  const hermite_evaluator he(cutoff);
  const std::size_t n = x.size();
  // b[j][l] = (-r^{sigma_j})^l psi_l(x_j) psi_l(y_j)
  std::vector<std::vector<double>> b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto px = he.all(cutoff, x[j]);
    const auto py = he.all(cutoff, y[j]);
    const double w = -std::pow(r, sigma[j]);
    double p = 1.0;
    b[j].resize(static_cast<std::size_t>(cutoff) + 1);
    for (int l = 0; l <= cutoff; ++l) {
      b[j][static_cast<std::size_t>(l)] = p * px[static_cast<std::size_t>(l)] * py[static_cast<std::size_t>(l)];
      p *= w;
    }
  }
  // Convolve coordinate by coordinate, keeping only total degrees <= cutoff.
  std::vector<double> acc = b[0];
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<double> next(acc.size(), 0.0);
    for (std::size_t d = 0; d < acc.size(); ++d)
      for (std::size_t l = 0; l + d < acc.size(); ++l) next[d + l] += acc[d] * b[j][l];
    acc = std::move(next);
  }
  double s = 0.0;
  for (double v : acc) s += v;
  return s;
}

struct gauss_rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// N-point Gauss-Hermite rule for the unweighted integral of functions of the
/// form polynomial * e^{-x^2}: nodes by Golub-Welsch, weights by the Christoffel
/// sum 1 / sum_{l<N} psi_l(x_k)^2.
inline gauss_rule gauss_hermite(int N) {
  require(N >= 1, errc::invalid_argument, "Gauss-Hermite needs N >= 1");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(N, N);
  for (int k = 1; k < N; ++k) {
    jac(k, k - 1) = std::sqrt(k / 2.0);
    jac(k - 1, k) = jac(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac, Eigen::EigenvaluesOnly);
  gauss_rule g;
  const hermite_evaluator he(N);
  for (int k = 0; k < N; ++k) {
    const double x = solver.eigenvalues()(k);
    const auto p = he.all(N - 1, x);
    double s = 0.0;
    for (double v : p) s += v * v;
    g.nodes.push_back(x);
    g.weights.push_back(1.0 / s);
  }
  return g;
}

}  // namespace greenquad
