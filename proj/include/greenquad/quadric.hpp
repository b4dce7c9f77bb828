#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "greenquad/complex_rational.hpp"
#include "greenquad/error.hpp"
#include "greenquad/matrix.hpp"

namespace greenquad {

using cplx = std::complex<double>;

/// Which canonical family a form came from. Only used to select closed-form
/// eigenbases that vary continuously with the direction of lambda.
enum class form_kind { generic, hypersurface, m1, m2, m3 };

/// Vector-valued Hermitian pairing phi_k(z, z') = sum_ij (A_k)_ij z_i conj(z'_j)
/// defining the quadric {Im w = phi(z, z)} in C^n x C^m.
template <typename T>
class basic_sesquilinear_form {
 public:
  basic_sesquilinear_form(int n, std::vector<dense_matrix<T>> matrices,
                          form_kind kind = form_kind::generic)
      : n_(n), matrices_(std::move(matrices)), kind_(kind) {
    require(n_ >= 1, errc::invalid_argument, "form needs n >= 1");
    require(!matrices_.empty(), errc::invalid_argument, "form needs m >= 1");
    for (const auto& a : matrices_) {
      require(a.rows() == static_cast<std::size_t>(n_) && a.cols() == static_cast<std::size_t>(n_),
              errc::invalid_argument, "form matrix is not n x n");
      require(a == a.adjoint(), errc::invalid_argument, "form matrix is not Hermitian");
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(matrices_.size()); }
  form_kind kind() const { return kind_; }
  const std::vector<dense_matrix<T>>& matrices() const { return matrices_; }
  const dense_matrix<T>& matrix(int k) const { return matrices_.at(static_cast<std::size_t>(k)); }

  T evaluate(int k, const std::vector<T>& z, const std::vector<T>& zp) const {
    check_dim(z);
    check_dim(zp);
    const auto& a = matrix(k);
    T acc{};
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        acc += a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * z[static_cast<std::size_t>(i)] *
               scalar_traits<T>::conj(zp[static_cast<std::size_t>(j)]);
    return acc;
  }

  std::vector<T> evaluate(const std::vector<T>& z, const std::vector<T>& zp) const {
    std::vector<T> out;
    out.reserve(matrices_.size());
    for (int k = 0; k < m(); ++k) out.push_back(evaluate(k, z, zp));
    return out;
  }

  void check_dim(const std::vector<T>& z) const {
    require(z.size() == static_cast<std::size_t>(n_), errc::invalid_argument,
            "vector dimension does not match form");
  }

 private:
  int n_;
  std::vector<dense_matrix<T>> matrices_;
  form_kind kind_;
};

using sesquilinear_form = basic_sesquilinear_form<cplx>;
using exact_form = basic_sesquilinear_form<complex_rational>;

inline sesquilinear_form to_double(const exact_form& f) {
  std::vector<dense_matrix<cplx>> mats;
  for (const auto& a : f.matrices()) {
    dense_matrix<cplx> d(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = a(i, j).to_complex();
    mats.push_back(std::move(d));
  }
  return {f.n(), std::move(mats), f.kind()};
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Hypersurface Im w = sum_j sigma_j |z_j|^2.
template <typename T = cplx>
basic_sesquilinear_form<T> hypersurface_form(const std::vector<T>& sigma) {
  require(!sigma.empty(), errc::invalid_argument, "hypersurface needs n >= 1");
  const auto n = sigma.size();
  dense_matrix<T> a(n, n);
  for (std::size_t j = 0; j < n; ++j) a(j, j) = sigma[j];
  return {static_cast<int>(n), {a}, form_kind::hypersurface};
}

inline sesquilinear_form hypersurface_form(const std::vector<double>& sigma) {
  std::vector<cplx> s(sigma.begin(), sigma.end());
  return hypersurface_form<cplx>(s);
}

template <typename T = cplx>
basic_sesquilinear_form<T> heisenberg_form(int n) {
  return hypersurface_form<T>(std::vector<T>(static_cast<std::size_t>(n), T(1)));
}

inline sesquilinear_form heisenberg_form(int n, const std::vector<double>& sigma) {
  require(sigma.size() == static_cast<std::size_t>(n), errc::invalid_argument,
          "sigma length must equal n");
  return hypersurface_form(sigma);
}

/// phi(z,z) = (|z_1|^2, |z_2|^2): product of two Heisenberg groups.
template <typename T = cplx>
basic_sesquilinear_form<T> m1_form() {
  return {2, {dense_matrix<T>{{T(1), T(0)}, {T(0), T(0)}}, dense_matrix<T>{{T(0), T(0)}, {T(0), T(1)}}},
          form_kind::m1};
}

/// phi(z,z) = (2 Re(z_1 conj z_2), |z_1|^2 - |z_2|^2).
template <typename T = cplx>
basic_sesquilinear_form<T> m2_form() {
  return {2, {dense_matrix<T>{{T(0), T(1)}, {T(1), T(0)}}, dense_matrix<T>{{T(1), T(0)}, {T(0), -T(1)}}},
          form_kind::m2};
}

/// phi(z,z) = (2|z_1|^2, 2 Re(z_1 conj z_2)).
template <typename T = cplx>
basic_sesquilinear_form<T> m3_form() {
  return {2, {dense_matrix<T>{{T(2), T(0)}, {T(0), T(0)}}, dense_matrix<T>{{T(0), T(1)}, {T(1), T(0)}}},
          form_kind::m3};
}

// ---------------------------------------------------------------------------
// Group law
// ---------------------------------------------------------------------------

struct group_element {
  std::vector<cplx> z;
  std::vector<double> t;

  static group_element identity(int n, int m) {
    return {std::vector<cplx>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(m))};
  }

  group_element inverse() const {
    group_element g = *this;
    for (auto& v : g.z) v = -v;
    for (auto& v : g.t) v = -v;
    return g;
  }
};

/// (z, t)(z', t') = (z + z', t + t' + 2 Im phi(z, z')).
inline group_element group_multiply(const sesquilinear_form& form, const group_element& g,
                                    const group_element& h) {
  const auto n = static_cast<std::size_t>(form.n());
  const auto m = static_cast<std::size_t>(form.m());
  require(g.z.size() == n && h.z.size() == n && g.t.size() == m && h.t.size() == m,
          errc::invalid_argument, "group element dimensions do not match form");
  group_element out;
  out.z.resize(n);
  out.t.resize(m);
  for (std::size_t j = 0; j < n; ++j) out.z[j] = g.z[j] + h.z[j];
  for (std::size_t k = 0; k < m; ++k)
    out.t[k] = g.t[k] + h.t[k] + 2.0 * form.evaluate(static_cast<int>(k), g.z, h.z).imag();
  return out;
}

// ---------------------------------------------------------------------------
// Levi spectrum
// ---------------------------------------------------------------------------

/// Eigen-decomposition of phi^lambda = sum_k lambda_k A_k with nonzero
/// eigenvalues first. Columns of `basis` are the v_j^lambda.
struct levi_spectrum {
  std::vector<double> lambda;
  std::vector<double> mu;
  Eigen::MatrixXcd basis;
  int nu = 0;

  int n() const { return static_cast<int>(mu.size()); }

  /// Coordinates of z relative to the basis: z = sum_j c_j v_j.
  std::vector<cplx> coordinates(const std::vector<cplx>& z) const {
    Eigen::VectorXcd zz(static_cast<Eigen::Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) zz(static_cast<Eigen::Index>(i)) = z[i];
    Eigen::VectorXcd c = basis.adjoint() * zz;
    return {c.data(), c.data() + c.size()};
  }

  std::vector<cplx> column(int j) const {
    std::vector<cplx> v(static_cast<std::size_t>(basis.rows()));
    for (Eigen::Index i = 0; i < basis.rows(); ++i) v[static_cast<std::size_t>(i)] = basis(i, j);
    return v;
  }

  double lambda_norm() const {
    return std::sqrt(std::inner_product(lambda.begin(), lambda.end(), lambda.begin(), 0.0));
  }
};

inline constexpr double zero_eigenvalue_threshold = 1e-12;

namespace detail {

inline Eigen::MatrixXcd contract(const sesquilinear_form& form, const std::vector<double>& lambda) {
  const auto n = static_cast<Eigen::Index>(form.n());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < form.m(); ++k) {
    const auto& a = form.matrix(k);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        h(i, j) += lambda[static_cast<std::size_t>(k)] * a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return h;
}

// Reorders (mu, basis) so nonzero eigenvalues come first; each block sorted
// descending, exact ties kept in incoming column order.
inline void order_nonzero_first(std::vector<double>& mu, Eigen::MatrixXcd& basis, int& nu) {
  const auto n = mu.size();
  double scale = 0.0;
  for (double v : mu) scale = std::max(scale, std::abs(v));
  std::vector<bool> zero(n);
  for (std::size_t j = 0; j < n; ++j) zero[j] = std::abs(mu[j]) < zero_eigenvalue_threshold * scale;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (zero[a] != zero[b]) return !zero[a];
    return mu[a] > mu[b];
  });
  std::vector<double> mu_sorted(n);
  Eigen::MatrixXcd basis_sorted(basis.rows(), basis.cols());
  nu = 0;
  for (std::size_t j = 0; j < n; ++j) {
    mu_sorted[j] = zero[order[j]] ? 0.0 : mu[order[j]];
    basis_sorted.col(static_cast<Eigen::Index>(j)) = basis.col(static_cast<Eigen::Index>(order[j]));
    if (!zero[order[j]]) ++nu;
  }
  mu = std::move(mu_sorted);
  basis = std::move(basis_sorted);
}

}  // namespace detail

/// Eigenvalues mu_j^lambda, eigenbasis v_j^lambda and rank nu(lambda).
/// M2 and M3 use their half-angle closed-form eigenvectors, which are continuous
/// in the direction of lambda; other forms go through a dense Hermitian solver.
inline levi_spectrum compute_levi_spectrum(const sesquilinear_form& form, const std::vector<double>& lambda) {
  require(lambda.size() == static_cast<std::size_t>(form.m()), errc::invalid_argument,
          "lambda dimension does not match form");
  const double norm = std::sqrt(std::inner_product(lambda.begin(), lambda.end(), lambda.begin(), 0.0));
  if (norm == 0.0) fail(errc::degenerate_direction, "lambda = 0 has no Levi spectrum");

  levi_spectrum s;
  s.lambda = lambda;
  const int n = form.n();

  if (form.kind() == form_kind::m2 || form.kind() == form_kind::m3) {
    const double theta = std::atan2(lambda[1], lambda[0]);
    // Columns (cos a, sin a) and (-sin a, cos a) with a chosen per family.
    const double a = form.kind() == form_kind::m2 ? M_PI / 4.0 - theta / 2.0 : theta / 2.0;
    s.basis.resize(2, 2);
    s.basis << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    if (form.kind() == form_kind::m2) {
      s.mu = {norm, -norm};
    } else {
      s.mu = {norm * (std::cos(theta) + 1.0), norm * (std::cos(theta) - 1.0)};
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::contract(form, lambda));
    if (solver.info() != Eigen::Success) fail(errc::invalid_state, "Hermitian eigensolver failed");
    s.mu.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    // phi(v, v) = v^* A^T v, so the vectors diagonalising phi are the conjugated eigenvectors of A.
    s.basis = solver.eigenvectors().conjugate();
  }
  detail::order_nonzero_first(s.mu, s.basis, s.nu);
  return s;
}

// ---------------------------------------------------------------------------
// (0,q)-form indices
// ---------------------------------------------------------------------------

/// Strictly increasing multi-index K = (k_1 < ... < k_q) in [1, n].
class form_index {
 public:
  form_index() = default;
  form_index(std::vector<int> entries, int n) : entries_(std::move(entries)), n_(n) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      require(entries_[i] >= 1 && entries_[i] <= n_, errc::invalid_argument, "form index entry out of range");
      require(i == 0 || entries_[i - 1] < entries_[i], errc::invalid_argument,
              "form index entries must be strictly increasing");
    }
  }

  int q() const { return static_cast<int>(entries_.size()); }
  int n() const { return n_; }
  const std::vector<int>& entries() const { return entries_; }
  bool contains(int k) const { return std::binary_search(entries_.begin(), entries_.end(), k); }

  friend bool operator==(const form_index&, const form_index&) = default;

  /// All strictly increasing indices of length q in [1, n], lexicographic.
  static std::vector<form_index> all(int n, int q) {
    std::vector<form_index> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == q) {
        out.emplace_back(cur, n);
        return;
      }
      for (int k = start; k <= n; ++k) {
        cur.push_back(k);
        self(self, k + 1);
        cur.pop_back();
      }
    };
    rec(rec, 1);
    return out;
  }

 private:
  std::vector<int> entries_;
  int n_ = 0;
};

// ---------------------------------------------------------------------------
// Solvability
// ---------------------------------------------------------------------------

enum class solvability_verdict {
  trivial_kernel,
  nontrivial_kernel,
  zero_eigenvalue_without_criterion,
};

inline std::string to_string(solvability_verdict v) {
  switch (v) {
    case solvability_verdict::trivial_kernel: return "TrivialKernel";
    case solvability_verdict::nontrivial_kernel: return "NonTrivialKernel";
    case solvability_verdict::zero_eigenvalue_without_criterion:
      return "ZeroEigenvaluePresentWithoutKernelCriterion";
  }
  return "unknown";
}

/// Kernel of the transformed diagonal component Box_LL at direction lambda.
///
/// Count mismatch (negatives != q or positives != n - q) gives a trivial kernel.
/// With full rank the kernel is nontrivial exactly when mu_j < 0 on L and
/// mu_j > 0 off L. With zero eigenvalues and a sign pattern that matches on the
/// nonzero block, the ground eigenvalue vanishes only at eta = 0; that case is
/// reported rather than decided.
inline solvability_verdict solvability(const levi_spectrum& spec, const form_index& L) {
  const int n = spec.n();
  require(L.n() == n, errc::invalid_argument, "form index dimension does not match spectrum");
  const int q = L.q();
  int neg = 0;
  int pos = 0;
  for (int j = 0; j < spec.nu; ++j) (spec.mu[static_cast<std::size_t>(j)] < 0 ? neg : pos)++;
  bool pattern = true;
  for (int j = 1; j <= spec.nu; ++j) {
    const double mu = spec.mu[static_cast<std::size_t>(j - 1)];
    if (L.contains(j) ? !(mu < 0) : !(mu > 0)) pattern = false;
  }
  if (spec.nu == n) {
    if (neg != q || pos != n - q) return solvability_verdict::trivial_kernel;
    return pattern ? solvability_verdict::nontrivial_kernel : solvability_verdict::trivial_kernel;
  }
  for (int k : L.entries())
    if (k > spec.nu) pattern = false;
  return pattern ? solvability_verdict::zero_eigenvalue_without_criterion
                 : solvability_verdict::trivial_kernel;
}

inline solvability_verdict solvability(const sesquilinear_form& form, const std::vector<double>& lambda,
                                       const form_index& L) {
  return solvability(compute_levi_spectrum(form, lambda), L);
}

/// Form-level verdict for (0,q)-forms: the worst verdict over all components L
/// with |L| = q, in the lambda-adapted basis.
inline solvability_verdict solvability_at_level(const sesquilinear_form& form, const std::vector<double>& lambda,
                                                int q) {
  require(q >= 0 && q <= form.n(), errc::invalid_argument, "form level q out of range");
  const auto spec = compute_levi_spectrum(form, lambda);
  auto worst = solvability_verdict::trivial_kernel;
  for (const auto& L : form_index::all(form.n(), q)) {
    const auto v = solvability(spec, L);
    if (v == solvability_verdict::nontrivial_kernel) return v;
    if (v == solvability_verdict::zero_eigenvalue_without_criterion) worst = v;
  }
  return worst;
}

}  // namespace greenquad
