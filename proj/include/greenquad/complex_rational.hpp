#pragma once

#include <complex>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "greenquad/error.hpp"

namespace greenquad {

using rational = boost::multiprecision::cpp_rational;

/// Exact Gaussian-rational number re + i*im. Used wherever operator identities
/// must hold bit-exactly rather than to a tolerance.
class complex_rational {
 public:
  complex_rational() = default;
  complex_rational(int v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  complex_rational(rational re, rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static complex_rational i() { return {0, 1}; }
  static complex_rational ratio(long long num, long long den) { return {rational(num, den), 0}; }

  const rational& real() const { return re_; }
  const rational& imag() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }

  complex_rational conj() const { return {re_, -im_}; }

  complex_rational& operator+=(const complex_rational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  complex_rational& operator-=(const complex_rational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  complex_rational& operator*=(const complex_rational& o) {
    rational r = re_ * o.re_ - im_ * o.im_;
    rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  complex_rational& operator/=(const complex_rational& o) {
    rational den = o.re_ * o.re_ + o.im_ * o.im_;
    if (den == 0) fail(errc::invalid_argument, "complex_rational division by zero");
    rational r = (re_ * o.re_ + im_ * o.im_) / den;
    rational m = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  friend complex_rational operator+(complex_rational a, const complex_rational& b) { return a += b; }
  friend complex_rational operator-(complex_rational a, const complex_rational& b) { return a -= b; }
  friend complex_rational operator*(complex_rational a, const complex_rational& b) { return a *= b; }
  friend complex_rational operator/(complex_rational a, const complex_rational& b) { return a /= b; }
  friend complex_rational operator-(const complex_rational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const complex_rational& a, const complex_rational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re_), static_cast<double>(im_)};
  }

  friend std::ostream& operator<<(std::ostream& os, const complex_rational& c) {
    if (c.im_ == 0) return os << c.re_;
    if (c.re_ == 0) return os << '(' << c.im_ << ")i";
    return os << '(' << c.re_ << (c.im_ < 0 ? "-" : "+") << abs(c.im_) << "i)";
  }

 private:
  rational re_{0};
  rational im_{0};
};

/// Uniform access to the handful of field operations the operator algebra needs,
/// for both exact and floating-point complex scalars.
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<complex_rational> {
  static complex_rational imag_unit() { return complex_rational::i(); }
  static complex_rational conj(const complex_rational& v) { return v.conj(); }
  static complex_rational real_part(const complex_rational& v) { return {v.real(), 0}; }
  static complex_rational imag_part(const complex_rational& v) { return {v.imag(), 0}; }
  static bool is_zero(const complex_rational& v) { return v.is_zero(); }
  static std::complex<double> to_complex(const complex_rational& v) { return v.to_complex(); }
  static complex_rational from_ratio(long long num, long long den) {
    return complex_rational::ratio(num, den);
  }
  static std::string format(const complex_rational& v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }
};

template <>
struct scalar_traits<std::complex<double>> {
  using value_type = std::complex<double>;
  static value_type imag_unit() { return {0.0, 1.0}; }
  static value_type conj(const value_type& v) { return std::conj(v); }
  static value_type real_part(const value_type& v) { return {v.real(), 0.0}; }
  static value_type imag_part(const value_type& v) { return {v.imag(), 0.0}; }
  static bool is_zero(const value_type& v) { return v == value_type{}; }
  static value_type to_complex(const value_type& v) { return v; }
  static value_type from_ratio(long long num, long long den) {
    return {static_cast<double>(num) / static_cast<double>(den), 0.0};
  }
  static std::string format(const value_type& v) {
    std::ostringstream os;
    os.precision(17);
    if (v.imag() == 0.0) {
      os << v.real();
    } else {
      os << '(' << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
    }
    return os.str();
  }
};

}  // namespace greenquad
