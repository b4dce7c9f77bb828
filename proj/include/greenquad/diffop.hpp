#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "greenquad/complex_rational.hpp"
#include "greenquad/error.hpp"
#include "greenquad/matrix.hpp"
#include "greenquad/polynomial.hpp"
#include "greenquad/quadric.hpp"

namespace greenquad {

/// Differential operator sum_alpha c_alpha(x, y, t) d^alpha with polynomial
/// coefficients over the real variables (x_1..x_n, y_1..y_n, t_1..t_m).
/// Coefficients are written to the left of derivatives.
template <typename T>
class poly_coeff_operator {
 public:
  using poly = polynomial<T>;
  using term_map = std::map<multi_index, poly, grlex_less>;

  poly_coeff_operator() = default;
  poly_coeff_operator(int n, int m) : n_(n), m_(m) {
    require(n >= 1 && m >= 0, errc::invalid_argument, "operator needs n >= 1, m >= 0");
  }

  static poly_coeff_operator multiplication(int n, int m, const poly& c) {
    poly_coeff_operator op(n, m);
    op.add_term(multi_index(op.vars(), 0), c);
    return op;
  }

  static poly_coeff_operator identity(int n, int m) {
    return multiplication(n, m, poly::constant(static_cast<std::size_t>(2 * n + m), T(1)));
  }

  static poly_coeff_operator derivative(int n, int m, std::size_t var, int order = 1) {
    poly_coeff_operator op(n, m);
    multi_index a(op.vars(), 0);
    a.at(var) = order;
    op.add_term(a, poly::constant(op.vars(), T(1)));
    return op;
  }

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t vars() const { return static_cast<std::size_t>(2 * n_ + m_); }
  std::size_t x_var(int j) const { return static_cast<std::size_t>(j); }
  std::size_t y_var(int j) const { return static_cast<std::size_t>(n_ + j); }
  std::size_t t_var(int k) const { return static_cast<std::size_t>(2 * n_ + k); }

  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
    return d;
  }

  poly coefficient(const multi_index& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? poly(vars()) : it->second;
  }

  void add_term(const multi_index& a, const poly& c) {
    require(a.size() == vars() && c.vars() == vars(), errc::invalid_argument, "operator term arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  poly_coeff_operator& operator+=(const poly_coeff_operator& o) {
    check_dims(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  poly_coeff_operator& operator-=(const poly_coeff_operator& o) {
    check_dims(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }

  friend poly_coeff_operator operator+(poly_coeff_operator a, const poly_coeff_operator& b) { return a += b; }
  friend poly_coeff_operator operator-(poly_coeff_operator a, const poly_coeff_operator& b) { return a -= b; }

  friend poly_coeff_operator operator*(const T& s, const poly_coeff_operator& a) {
    poly_coeff_operator r(a.n_, a.m_);
    for (const auto& [al, c] : a.terms_) r.add_term(al, s * c);
    return r;
  }

  /// Composition (A B) f = A (B f), brought back to coefficients-left form by
  /// Leibniz: c d^alpha (e d^beta) = sum_{gamma <= alpha} C(alpha, gamma) c (d^gamma e) d^{alpha - gamma + beta}.
  friend poly_coeff_operator operator*(const poly_coeff_operator& a, const poly_coeff_operator& b) {
    a.check_dims(b);
    poly_coeff_operator r(a.n_, a.m_);
    const std::size_t d = a.vars();
    for (const auto& [alpha, ca] : a.terms_) {
      for (const auto& [beta, cb] : b.terms_) {
        multi_index gamma(d, 0);
        // Odometer over all gamma <= alpha.
        while (true) {
          poly deriv = cb;
          T binom(1);
          for (std::size_t v = 0; v < d; ++v) {
            if (gamma[v] > 0) deriv = deriv.derivative(v, gamma[v]);
            binom = T(binomial(alpha[v], gamma[v])) * binom;
          }
          if (!deriv.is_zero()) {
            multi_index out(d);
            for (std::size_t v = 0; v < d; ++v) out[v] = alpha[v] - gamma[v] + beta[v];
            r.add_term(out, binom * (ca * deriv));
          }
          std::size_t v = 0;
          while (v < d && gamma[v] == alpha[v]) gamma[v++] = 0;
          if (v == d) break;
          ++gamma[v];
        }
      }
    }
    return r;
  }

  friend bool operator==(const poly_coeff_operator& a, const poly_coeff_operator& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.terms_ == b.terms_;
  }

  /// Complex conjugate of every coefficient.
  poly_coeff_operator conj() const {
    poly_coeff_operator r(n_, m_);
    for (const auto& [a, c] : terms_) r.add_term(a, c.conj());
    return r;
  }

  /// Exact action on a polynomial.
  poly apply(const poly& f) const {
    require(f.vars() == vars(), errc::invalid_argument, "polynomial arity mismatch");
    poly out(vars());
    for (const auto& [a, c] : terms_) {
      poly d = f;
      for (std::size_t v = 0; v < vars() && !d.is_zero(); ++v)
        if (a[v] > 0) d = d.derivative(v, a[v]);
      if (!d.is_zero()) out += c * d;
    }
    return out;
  }

  std::vector<std::string> variable_names() const {
    std::vector<std::string> names;
    for (int j = 1; j <= n_; ++j) names.push_back("x" + std::to_string(j));
    for (int j = 1; j <= n_; ++j) names.push_back("y" + std::to_string(j));
    for (int k = 1; k <= m_; ++k) names.push_back("t" + std::to_string(k));
    return names;
  }

  /// Deterministic text form: derivative monomials in descending graded-lex order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    const auto names = variable_names();
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) out += " + ";
      first = false;
      const auto& [a, c] = *it;
      out += "(" + c.to_string(names) + ")";
      for (std::size_t v = 0; v < vars(); ++v) {
        if (a[v] == 0) continue;
        out += "*D" + names[v];
        if (a[v] > 1) out += "^" + std::to_string(a[v]);
      }
    }
    return out;
  }

 private:
  static long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

  void check_dims(const poly_coeff_operator& o) const {
    require(n_ == o.n_ && m_ == o.m_, errc::invalid_argument, "operator dimension mismatch");
  }

  int n_ = 1;
  int m_ = 0;
  term_map terms_;
};

template <typename T>
poly_coeff_operator<T> commutator(const poly_coeff_operator<T>& a, const poly_coeff_operator<T>& b) {
  return a * b - b * a;
}

using numeric_operator = poly_coeff_operator<std::complex<double>>;
using exact_operator = poly_coeff_operator<complex_rational>;

// ---------------------------------------------------------------------------
// Right-invariant fields and Box_b components
// ---------------------------------------------------------------------------

template <typename T>
struct invariant_field_set {
  std::vector<poly_coeff_operator<T>> x, y, z, zbar;
};

namespace detail {

template <typename T>
bool is_orthonormal(const dense_matrix<T>& basis) {
  const auto g = basis.adjoint() * basis;
  const auto id = dense_matrix<T>::identity(basis.cols());
  if constexpr (std::is_same_v<T, complex_rational>) {
    return g == id;
  } else {
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        if (std::abs(g(i, j) - id(i, j)) > 1e-12) return false;
    return true;
  }
}

// X_v = d_v - 2 Im phi(z, v) . D_t, with d_v = sum_i Re(v_i) d_{x_i} + Im(v_i) d_{y_i}.
template <typename T>
poly_coeff_operator<T> real_field(const basic_sesquilinear_form<T>& form, const std::vector<T>& v) {
  using tr = scalar_traits<T>;
  const int n = form.n();
  const int m = form.m();
  poly_coeff_operator<T> op(n, m);
  const std::size_t d = op.vars();
  for (int i = 0; i < n; ++i) {
    const auto& vi = v[static_cast<std::size_t>(i)];
    op += tr::real_part(vi) * poly_coeff_operator<T>::derivative(n, m, op.x_var(i));
    op += tr::imag_part(vi) * poly_coeff_operator<T>::derivative(n, m, op.y_var(i));
  }
  for (int k = 0; k < m; ++k) {
    // Im phi_k(z, v) = sum_i Im(w_i) x_i + Re(w_i) y_i, w_i = sum_j (A_k)_ij conj(v_j).
    polynomial<T> im_phi(d);
    const auto& a = form.matrix(k);
    for (int i = 0; i < n; ++i) {
      T w{};
      for (int j = 0; j < n; ++j)
        w += a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * tr::conj(v[static_cast<std::size_t>(j)]);
      im_phi += polynomial<T>::variable(d, op.x_var(i), tr::imag_part(w));
      im_phi += polynomial<T>::variable(d, op.y_var(i), tr::real_part(w));
    }
    poly_coeff_operator<T> dt(n, m);
    multi_index alpha(d, 0);
    alpha[op.t_var(k)] = 1;
    dt.add_term(alpha, T(-2) * im_phi);
    op += dt;
  }
  return op;
}

}  // namespace detail

/// X_j, Y_j = X_{J v_j}, Z_j = (X_j - i Y_j)/2, Zbar_j = (X_j + i Y_j)/2 for the
/// columns v_j of an orthonormal basis.
template <typename T>
invariant_field_set<T> invariant_fields(const basic_sesquilinear_form<T>& form, const dense_matrix<T>& basis) {
  using tr = scalar_traits<T>;
  const auto n = static_cast<std::size_t>(form.n());
  require(basis.rows() == n && basis.cols() == n, errc::invalid_argument, "basis must be n x n");
  require(detail::is_orthonormal(basis), errc::invalid_argument, "basis columns are not orthonormal");
  const T half = tr::from_ratio(1, 2);
  const T i = tr::imag_unit();
  invariant_field_set<T> f;
  for (std::size_t j = 0; j < n; ++j) {
    auto v = basis.column(j);
    std::vector<T> jv(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) jv[k] = i * v[k];
    auto x = detail::real_field(form, v);
    auto y = detail::real_field(form, jv);
    f.z.push_back(half * (x - i * y));
    f.zbar.push_back(half * (x + i * y));
    f.x.push_back(std::move(x));
    f.y.push_back(std::move(y));
  }
  return f;
}

/// Sign (-1)^d, d = #{elements of K n L strictly between k in K-L and l in L-K}.
inline int epsilon_sign(const form_index& K, const form_index& L) {
  const int q = K.q();
  require(L.q() == q && q >= 1, errc::invalid_argument, "epsilon_sign needs |K| = |L| >= 1");
  std::vector<int> common;
  int k = 0;
  int l = 0;
  int k_count = 0;
  int l_count = 0;
  for (int e : K.entries()) {
    if (L.contains(e)) {
      common.push_back(e);
    } else {
      k = e;
      ++k_count;
    }
  }
  for (int e : L.entries())
    if (!K.contains(e)) {
      l = e;
      ++l_count;
    }
  require(k_count == 1 && l_count == 1, errc::invalid_argument, "epsilon_sign needs |K n L| = q - 1");
  const int lo = std::min(k, l);
  const int hi = std::max(k, l);
  int d = 0;
  for (int e : common)
    if (e > lo && e < hi) ++d;
  return d % 2 == 0 ? 1 : -1;
}

/// Box_LK = -delta_LK * sublaplacian + M_LK, assembled from the invariant fields.
template <typename T>
poly_coeff_operator<T> box_component(const basic_sesquilinear_form<T>& form, const dense_matrix<T>& basis,
                                     const form_index& L, const form_index& K) {
  require(L.q() == K.q(), errc::invalid_argument, "box_component needs |K| = |L|");
  require(L.n() == form.n() && K.n() == form.n(), errc::invalid_argument, "form index dimension mismatch");
  const auto f = invariant_fields(form, basis);
  const int n = form.n();
  const int m = form.m();
  const T half = scalar_traits<T>::from_ratio(1, 2);
  poly_coeff_operator<T> out(n, m);
  if (L == K) {
    poly_coeff_operator<T> sub(n, m);
    for (int k = 0; k < n; ++k) {
      const auto& z = f.z[static_cast<std::size_t>(k)];
      const auto& zb = f.zbar[static_cast<std::size_t>(k)];
      sub += zb * z + z * zb;
      const auto c = commutator(z, zb);
      if (K.contains(k + 1)) {
        out += half * c;
      } else {
        out -= half * c;
      }
    }
    out -= half * sub;
    return out;
  }
  int shared = 0;
  for (int e : K.entries())
    if (L.contains(e)) ++shared;
  if (shared != K.q() - 1) return out;
  int k = 0;
  int l = 0;
  for (int e : K.entries())
    if (!L.contains(e)) k = e;
  for (int e : L.entries())
    if (!K.contains(e)) l = e;
  const T eps(epsilon_sign(K, L));
  return eps * commutator(f.z[static_cast<std::size_t>(k - 1)], f.zbar[static_cast<std::size_t>(l - 1)]);
}

/// -1/4 sum (X_k^2 + Y_k^2) +/- i (sum_{k in L} phi(v_k, v_k) - sum_{k notin L} phi(v_k, v_k)) . D_t,
/// minus sign for the integration-by-parts adjoint.
template <typename T>
poly_coeff_operator<T> box_diagonal(const basic_sesquilinear_form<T>& form, const dense_matrix<T>& basis,
                                    const form_index& L, bool adjoint) {
  require(L.n() == form.n(), errc::invalid_argument, "form index dimension mismatch");
  using tr = scalar_traits<T>;
  const auto f = invariant_fields(form, basis);
  const int n = form.n();
  const int m = form.m();
  poly_coeff_operator<T> out(n, m);
  for (int k = 0; k < n; ++k) {
    const auto& x = f.x[static_cast<std::size_t>(k)];
    const auto& y = f.y[static_cast<std::size_t>(k)];
    out -= tr::from_ratio(1, 4) * (x * x + y * y);
  }
  const T sign = adjoint ? T(-1) : T(1);
  for (int kk = 0; kk < m; ++kk) {
    T c{};
    for (int k = 0; k < n; ++k) {
      const auto v = basis.column(static_cast<std::size_t>(k));
      const T phi = form.evaluate(kk, v, v);
      if (L.contains(k + 1)) {
        c += phi;
      } else {
        c -= phi;
      }
    }
    out += (sign * tr::imag_unit() * c) *
           poly_coeff_operator<T>::derivative(n, m, out.t_var(kk));
  }
  return out;
}

/// Replaces each D_{t_k} by the multiplier i lambda_k. The result acts on functions
/// of (x, y) only.
template <typename T>
numeric_operator partial_transform_t(const poly_coeff_operator<T>& op, const std::vector<double>& lambda) {
  using C = std::complex<double>;
  const int n = op.n();
  const int m = op.m();
  require(lambda.size() == static_cast<std::size_t>(m), errc::invalid_argument, "lambda dimension mismatch");
  std::vector<std::size_t> tvars;
  for (int k = 0; k < m; ++k) tvars.push_back(op.t_var(k));
  numeric_operator out(n, 0);
  const std::size_t space = static_cast<std::size_t>(2 * n);
  for (const auto& [alpha, c] : op.terms()) {
    if (c.depends_on(tvars))
      fail(errc::unsupported_operator, "coefficient depends on t; partial transform undefined");
    C factor(1.0);
    for (int k = 0; k < m; ++k)
      for (int p = 0; p < alpha[op.t_var(k)]; ++p) factor *= C(0.0, lambda[static_cast<std::size_t>(k)]);
    if (factor == C{}) continue;
    polynomial<C> cc(space);
    for (const auto& [e, v] : c.terms())
      cc.add_term(multi_index(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(space)),
                  factor * scalar_traits<T>::to_complex(v));
    out.add_term(multi_index(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(space)), cc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference application
// ---------------------------------------------------------------------------

using point_function = std::function<std::complex<double>(std::span<const double>)>;

namespace detail {

struct fd_stencil {
  int half_width;
  std::array<double, 7> weights;  // offsets -half_width..half_width
};

// Fourth-order central stencils, unscaled by h^order.
inline const fd_stencil& central_stencil(int order) {
  static const std::array<fd_stencil, 4> table{{
      {2, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}},
      {2, {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}},
      {3, {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8}},
      {3, {-1.0 / 6, 2.0, -39.0 / 6, 56.0 / 6, -39.0 / 6, 2.0, -1.0 / 6}},
  }};
  require(order >= 1 && order <= 4, errc::unsupported_operator, "finite differences support orders 1..4");
  return table[static_cast<std::size_t>(order - 1)];
}

inline std::complex<double> fd_derivative(const point_function& f, const multi_index& alpha, std::size_t from,
                                          std::vector<double>& p, double h) {
  std::size_t v = from;
  while (v < alpha.size() && alpha[v] == 0) ++v;
  if (v == alpha.size()) return f(p);
  const auto& st = central_stencil(alpha[v]);
  const double x0 = p[v];
  std::complex<double> acc{};
  for (int o = -st.half_width; o <= st.half_width; ++o) {
    const double w = st.weights[static_cast<std::size_t>(o + st.half_width)];
    if (w == 0.0) continue;
    p[v] = x0 + o * h;
    acc += w * fd_derivative(f, alpha, v + 1, p, h);
  }
  p[v] = x0;
  return acc / std::pow(h, alpha[v]);
}

}  // namespace detail

/// Value of (op f)(p), derivatives by tensor-composed fourth-order central differences.
inline std::complex<double> apply_fd(const numeric_operator& op, const point_function& f,
                                     std::span<const double> p, double h) {
  require(p.size() == op.vars(), errc::invalid_argument, "point dimension does not match operator");
  require(h > 0.0, errc::invalid_argument, "step must be positive");
  std::vector<double> q(p.begin(), p.end());
  std::complex<double> acc{};
  for (const auto& [alpha, c] : op.terms()) {
    const auto coeff = c.evaluate(p);
    if (coeff == std::complex<double>{}) continue;
    acc += coeff * detail::fd_derivative(f, alpha, 0, q, h);
  }
  return acc;
}

// Conversions between exact and floating operators.
inline numeric_operator to_numeric(const exact_operator& op) {
  numeric_operator out(op.n(), op.m());
  for (const auto& [a, c] : op.terms()) {
    polynomial<std::complex<double>> cc(c.vars());
    for (const auto& [e, v] : c.terms()) cc.add_term(e, v.to_complex());
    out.add_term(a, cc);
  }
  return out;
}

inline dense_matrix<std::complex<double>> to_dense(const Eigen::MatrixXcd& m) {
  dense_matrix<std::complex<double>> d(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return d;
}

}  // namespace greenquad
