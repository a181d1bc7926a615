#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dsdirac/common.hpp"

namespace dsdirac {

//==========================================================================
// Finite-difference Schroedinger oracle.
//
// Second-order central differences for -d^2/dx^2 + V(x) on a uniform
// interior grid with Dirichlet ends. Eigenvalues by Sturm-sequence
// bisection, eigenvectors by shifted inverse iteration. This is the
// independent yardstick the closed-form spectra and eigenfunctions are
// measured against, so it stays deliberately plain.
//==========================================================================

//! Uniform interior grid on (lo, hi): n points, spacing h = (hi-lo)/(n+1),
//! endpoints excluded.
struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  int n = 0;

  Grid1D() = default;
  Grid1D(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_) {
    if (!(hi > lo) || n < 1)
      throw std::invalid_argument("Grid1D: need hi > lo and n >= 1");
  }

  double h() const { return (hi - lo) / (n + 1); }
  double point(int i) const { return lo + (i + 1) * h(); }
};

//! Symmetric tridiagonal operator: diag[i] on the diagonal, off[i] linking
//! i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size()-1

  int size() const { return static_cast<int>(diag.size()); }
};

//! Discretize -d^2/dx^2 + V(x) on the grid: diag_i = 2/h^2 + V(x_i),
//! offdiag = -1/h^2.
inline Tridiagonal discretize(const std::function<double(double)>& V,
                              const Grid1D& g) {
  Tridiagonal t;
  const double h = g.h();
  const double w = 1.0 / (h * h);
  t.diag.resize(g.n);
  for (int i = 0; i < g.n; ++i) t.diag[i] = 2.0 * w + V(g.point(i));
  t.off.assign(g.n > 1 ? g.n - 1 : 0, -w);
  return t;
}

//! Number of eigenvalues of T strictly below lam (Sturm sequence count).
inline int sturm_count(const Tridiagonal& t, double lam) {
  const int n = t.size();
  int cnt = 0;
  double q = 1.0;
  for (int i = 0; i < n; ++i) {
    const double e2 = (i > 0) ? t.off[i - 1] * t.off[i - 1] : 0.0;
    q = (t.diag[i] - lam) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = 1e-300;  // splitting guard
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

struct EigenResult {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // optional; h-weighted normalized
};

namespace detail {

// Solve (T - lam I) x = b by LU with partial pivoting (band width 2 fill-in).
inline void shifted_solve(const Tridiagonal& t, double lam,
                          std::vector<double>& x) {
  const int n = t.size();
  std::vector<double> a(n), b(n, 0.0), c(n, 0.0);  // diag, super, super2
  std::vector<double> sub(n, 0.0);
  for (int i = 0; i < n; ++i) a[i] = t.diag[i] - lam;
  for (int i = 0; i + 1 < n; ++i) {
    b[i] = t.off[i];
    sub[i + 1] = t.off[i];
  }
  // forward elimination with row swaps
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i + 1]) > std::abs(a[i])) {
      std::swap(a[i], sub[i + 1]);
      std::swap(b[i], a[i + 1]);
      std::swap(c[i], b[i + 1]);
      std::swap(x[i], x[i + 1]);
    }
    if (a[i] == 0.0) a[i] = 1e-300;
    const double m = sub[i + 1] / a[i];
    a[i + 1] -= m * b[i];
    b[i + 1] -= m * c[i];
    x[i + 1] -= m * x[i];
  }
  if (a[n - 1] == 0.0) a[n - 1] = 1e-300;
  // back substitution
  x[n - 1] /= a[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
  for (int i = n - 3; i >= 0; --i)
    x[i] = (x[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i];
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

//! k smallest eigenvalues (ascending) of a symmetric tridiagonal operator,
//! each bisected to ~1e-12 relative accuracy. With want_vectors, inverse
//! iteration supplies eigenvectors normalized so that h * sum v_i^2 = 1;
//! members of a near-degenerate cluster (gap < 1e-8 * scale) are
//! re-orthogonalized against each other.
inline EigenResult eigen_smallest(const Tridiagonal& t, int k,
                                  bool want_vectors = false,
                                  double grid_h = 1.0) {
  const int n = t.size();
  if (k < 1 || k > n)
    throw std::invalid_argument("eigen_smallest: need 1 <= k <= n");
  // Gershgorin bracket
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});

  EigenResult res;
  res.values.resize(k);
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int iter = 0; iter < 250; ++iter) {
      const double width_tol =
          1e-12 * std::max(std::abs(a), std::abs(b)) + 1e-14;
      if (b - a <= width_tol) break;
      const double mid = 0.5 * (a + b);
      if (sturm_count(t, mid) >= j + 1)
        b = mid;
      else
        a = mid;
    }
    res.values[j] = 0.5 * (a + b);
  }

  if (!want_vectors) return res;

  res.vectors.assign(k, std::vector<double>(n));
  for (int j = 0; j < k; ++j) {
    std::vector<double>& v = res.vectors[j];
    // deterministic nonzero start
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(i + 1.0 + j);
    const double shift =
        res.values[j] * (1.0 + 1e-14) + 1e-14 * scale;  // avoid exact singularity
    for (int pass = 0; pass < 3; ++pass) {
      detail::shifted_solve(t, shift, v);
      // re-orthogonalize within clusters
      for (int p = 0; p < j; ++p) {
        if (std::abs(res.values[j] - res.values[p]) < 1e-8 * scale) {
          double d = 0.0;
          for (int i = 0; i < n; ++i) d += v[i] * res.vectors[p][i];
          const double np2 = detail::norm2(res.vectors[p]);
          for (int i = 0; i < n; ++i) v[i] -= d * res.vectors[p][i] / (np2 * np2);
        }
      }
      const double nv = detail::norm2(v);
      for (int i = 0; i < n; ++i) v[i] /= nv;
    }
    // Rayleigh-quotient polish of the eigenvalue
    double num = 0.0;
    for (int i = 0; i < n; ++i) {
      double tv = t.diag[i] * v[i];
      if (i > 0) tv += t.off[i - 1] * v[i - 1];
      if (i + 1 < n) tv += t.off[i] * v[i + 1];
      num += v[i] * tv;
    }
    res.values[j] = num;
    const double s = 1.0 / std::sqrt(grid_h);
    for (int i = 0; i < n; ++i) v[i] *= s;
  }
  // Rayleigh polish may swap members of a near-degenerate cluster
  for (int j = 1; j < k; ++j) {
    int p = j;
    while (p > 0 && res.values[p] < res.values[p - 1]) {
      std::swap(res.values[p], res.values[p - 1]);
      std::swap(res.vectors[p], res.vectors[p - 1]);
      --p;
    }
  }
  return res;
}

//! Complex tridiagonal operator (non-Hermitian temporal discretizations).
struct ComplexTridiagonal {
  std::vector<cplx> diag;
  std::vector<cplx> off;  // symmetric placement: couples i and i+1 both ways

  int size() const { return static_cast<int>(diag.size()); }
};

inline ComplexTridiagonal discretize_complex(
    const std::function<cplx(double)>& V, const Grid1D& g) {
  ComplexTridiagonal t;
  const double w = 1.0 / (g.h() * g.h());
  t.diag.resize(g.n);
  for (int i = 0; i < g.n; ++i) t.diag[i] = 2.0 * w + V(g.point(i));
  t.off.assign(g.n > 1 ? g.n - 1 : 0, cplx(-w, 0.0));
  return t;
}

//! k eigenvalues of smallest magnitude of a complex tridiagonal matrix.
//! Dense solve (no shift-invert); refuses n > 2000.
inline std::vector<cplx> complex_spectrum(const ComplexTridiagonal& t, int k) {
  const int n = t.size();
  if (n > 2000)
    throw std::invalid_argument("complex_spectrum: dense fallback capped at n = 2000");
  if (k < 1 || k > n)
    throw std::invalid_argument("complex_spectrum: need 1 <= k <= n");
  if (n == 1) return {t.diag[0]};
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = t.diag[i];
    if (i + 1 < n) {
      M(i, i + 1) = t.off[i];
      M(i + 1, i) = t.off[i];
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("complex_spectrum: eigensolver failed");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  ev.resize(k);
  return ev;
}

}  // namespace dsdirac
