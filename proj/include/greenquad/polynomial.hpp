#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "greenquad/complex_rational.hpp"
#include "greenquad/error.hpp"

namespace greenquad {

/// Exponent vector over a fixed number of variables.
using multi_index = std::vector<int>;

inline int total_degree(const multi_index& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// Graded lexicographic order: total degree first, then lexicographic with the
/// first variable most significant.
struct grlex_less {
  bool operator()(const multi_index& a, const multi_index& b) const {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Sparse multivariate polynomial in `vars` variables. Canonical form: no zero
/// coefficients are stored, so structural equality is mathematical equality.
template <typename T>
class polynomial {
 public:
  using term_map = std::map<multi_index, T, grlex_less>;

  polynomial() = default;
  explicit polynomial(std::size_t vars) : vars_(vars) {}

  static polynomial constant(std::size_t vars, const T& c) {
    polynomial p(vars);
    p.add_term(multi_index(vars, 0), c);
    return p;
  }

  static polynomial variable(std::size_t vars, std::size_t which, const T& coeff = T(1)) {
    polynomial p(vars);
    multi_index e(vars, 0);
    e.at(which) = 1;
    p.add_term(e, coeff);
    return p;
  }

  std::size_t vars() const { return vars_; }
  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  T coefficient(const multi_index& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T{} : it->second;
  }

  void add_term(const multi_index& e, const T& c) {
    require(e.size() == vars_, errc::invalid_argument, "monomial arity mismatch");
    if (scalar_traits<T>::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (scalar_traits<T>::is_zero(it->second)) terms_.erase(it);
    }
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  /// True if any monomial has a positive exponent in one of the listed variables.
  bool depends_on(std::span<const std::size_t> which) const {
    for (const auto& [e, c] : terms_)
      for (std::size_t v : which)
        if (e[v] != 0) return true;
    return false;
  }

  polynomial& operator+=(const polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  polynomial& operator-=(const polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend polynomial operator+(polynomial a, const polynomial& b) { return a += b; }
  friend polynomial operator-(polynomial a, const polynomial& b) { return a -= b; }
  friend polynomial operator-(const polynomial& a) {
    polynomial r(a.vars_);
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend polynomial operator*(const T& s, const polynomial& a) {
    polynomial r(a.vars_);
    if (scalar_traits<T>::is_zero(s)) return r;
    for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
    return r;
  }

  friend polynomial operator*(const polynomial& a, const polynomial& b) {
    a.check_vars(b);
    polynomial r(a.vars_);
    multi_index e(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t v = 0; v < a.vars_; ++v) e[v] = ea[v] + eb[v];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend bool operator==(const polynomial& a, const polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// d/dx_v applied `order` times.
  polynomial derivative(std::size_t v, int order = 1) const {
    polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[v] < order) continue;
      T factor = c;
      for (int k = 0; k < order; ++k) factor = T(e[v] - k) * factor;
      multi_index ne = e;
      ne[v] -= order;
      r.add_term(ne, factor);
    }
    return r;
  }

  polynomial conj() const {
    polynomial r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, scalar_traits<T>::conj(c));
    return r;
  }

  /// p(-x) for all variables simultaneously.
  polynomial reflected() const {
    polynomial r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, total_degree(e) % 2 == 0 ? c : -c);
    return r;
  }

  /// Replaces variable v by the constant value (drops that dependence).
  polynomial substitute(std::size_t v, const T& value) const {
    polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
      T f = c;
      for (int k = 0; k < e[v]; ++k) f = f * value;
      multi_index ne = e;
      ne[v] = 0;
      r.add_term(ne, f);
    }
    return r;
  }

  /// Keeps only the first `keep` variables; callers guarantee the rest are absent.
  polynomial truncated(std::size_t keep) const {
    polynomial r(keep);
    for (const auto& [e, c] : terms_) {
      for (std::size_t v = keep; v < vars_; ++v)
        require(e[v] == 0, errc::unsupported_operator, "polynomial depends on a dropped variable");
      r.add_term(multi_index(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(keep)), c);
    }
    return r;
  }

  std::complex<double> evaluate(std::span<const double> point) const {
    require(point.size() == vars_, errc::invalid_argument, "evaluation point arity mismatch");
    std::complex<double> acc{};
    for (const auto& [e, c] : terms_) {
      double mono = 1.0;
      for (std::size_t v = 0; v < vars_; ++v)
        for (int k = 0; k < e[v]; ++k) mono *= point[v];
      acc += scalar_traits<T>::to_complex(c) * mono;
    }
    return acc;
  }

  /// Deterministic text form, monomials in descending graded-lex order.
  std::string to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) out += " + ";
      first = false;
      const auto& [e, c] = *it;
      std::string mono;
      for (std::size_t v = 0; v < vars_; ++v) {
        if (e[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[v];
        if (e[v] > 1) mono += "^" + std::to_string(e[v]);
      }
      const std::string cs = scalar_traits<T>::format(c);
      if (mono.empty()) {
        out += cs;
      } else if (cs == "1") {
        out += mono;
      } else {
        out += cs + "*" + mono;
      }
    }
    return out;
  }

 private:
  void check_vars(const polynomial& o) const {
    require(vars_ == o.vars_, errc::invalid_argument, "polynomial arity mismatch");
  }

  std::size_t vars_ = 0;
  term_map terms_;
};

}  // namespace greenquad
