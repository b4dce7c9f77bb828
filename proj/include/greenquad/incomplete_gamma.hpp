#pragma once

#include <cmath>

#include "greenquad/error.hpp"

namespace greenquad {

/// e^x Gamma(a, x) for integer shape a and x > 0.
///
/// a >= 1: finite sum (a-1)! sum_{k<a} x^k / k!.
/// a = 0:  e^x E_1(x).
/// a < 0:  downward from a + 1 via Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
inline double upper_gamma_scaled(int a, double x) {
  require(x > 0.0, errc::invalid_argument, "incomplete gamma needs x > 0");
  if (a >= 1) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < a; ++k) {
      term *= x / k;
      sum += term;
    }
    return std::tgamma(static_cast<double>(a)) * sum;
  }
  double s;
  if (x < 40.0) {
    s = -std::exp(x) * std::expint(-x);
  } else {
    // Asymptotic series, stopped at its smallest term. std::expint loses accuracy for
    // large negative arguments in libstdc++.
    double term = 1.0 / x;
    s = term;
    for (int k = 1; k < 60; ++k) {
      const double next = term * (-k / x);
      if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-18 * std::abs(s)) break;
      term = next;
      s += term;
    }
  }
  for (int b = 0; b > a; --b) s = (s - std::pow(x, b - 1)) / (b - 1);
  return s;
}

}  // namespace greenquad
