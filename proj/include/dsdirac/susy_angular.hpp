#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsdirac/common.hpp"

namespace dsdirac {

//! Jacobi polynomial P_n^{(a,b)}(x) by the standard three-term
//! recurrence; templated so verification code can run it in extended
//! precision.
template <typename Real>
Real jacobi_p_recurrence(int n, Real a, Real b, Real x) {
  if (n == 0) return Real(1);
  Real p0 = Real(1);
  Real p1 = Real(0.5) * (a - b) + Real(0.5) * (a + b + Real(2)) * x;
  for (int k = 2; k <= n; ++k) {
    const Real n2ab = Real(2 * k) + a + b;
    const Real c1 = Real(2 * k) * (Real(k) + a + b) * (n2ab - Real(2));
    const Real c2 = (n2ab - Real(1)) * (a * a - b * b);
    const Real c3 = (n2ab - Real(1)) * n2ab * (n2ab - Real(2));
    const Real c4 = Real(2) * (Real(k) + a - Real(1)) * (Real(k) + b - Real(1)) * n2ab;
    const Real p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

inline double jacobi_p(int n, double a, double b, double x) {
  if (n < 0) throw std::invalid_argument("jacobi_p: negative degree");
  if (a <= -1.0 || b <= -1.0)
    throw std::domain_error("jacobi_p: parameters must exceed -1");
  if (x < -1.0 || x > 1.0)
    throw std::domain_error("jacobi_p: argument outside [-1, 1]");
  return jacobi_p_recurrence<double>(n, a, b, x);
}

//! d/dx P_n^{(a,b)}(x) = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}(x).
inline double jacobi_p_derivative(int n, double a, double b, double x) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
}

// =====================================================================
//  Factorized angular sector
//
//  The theta equation for azimuthal number m carries the superpotential
//
//    W(theta) = B csc(theta) - A cot(theta),   A = m + 1/2,  B = 1/2,
//
//  giving the partner pair V_{+-} = W^2 -+ W'.  Two conventions appear:
//  the "ladder" pair m^2 csc^2 -+ m cot csc produced directly by the
//  first order operators, and the factorized pair which differs from it
//  by the constant A^2.  Both are exposed; eigenvalue() refers to the
//  factorized convention where the ground level sits at zero.
//
//  v_minus is shape invariant: v_minus(theta; m) = v_plus(theta; m+1)
//  + A(m+1)^2 - A(m)^2, and at ladder level the reflection
//  v_ladder_minus(theta; m) = v_ladder_plus(theta; -m) holds pointwise.
// =====================================================================

struct AngularSector {
  double m = 1.0;

  double A() const { return m + 0.5; }
  double B() const { return 0.5; }

  double superpotential(double theta) const {
    return B() / std::sin(theta) - A() * std::cos(theta) / std::sin(theta);
  }

  double superpotential_derivative(double theta) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return -B() * c / (s * s) + A() / (s * s);
  }

  double v_plus(double theta) const {
    const double w = superpotential(theta);
    return w * w - superpotential_derivative(theta);
  }

  double v_minus(double theta) const {
    const double w = superpotential(theta);
    return w * w + superpotential_derivative(theta);
  }

  double v_ladder_plus(double theta) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return (m * m - m * c) / (s * s);
  }

  double v_ladder_minus(double theta) const {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return (m * m + m * c) / (s * s);
  }

  //! omega_n^2 = (A+n)^2 - A^2, ground level zero.
  double eigenvalue(int n) const {
    const double a = A();
    return (a + n) * (a + n) - a * a;
  }

  double alpha() const { return m - 0.5; }  // Jacobi a-parameter
  double beta() const { return m + 0.5; }   // Jacobi b-parameter

  //! Bound modes need integrable endpoint behaviour, i.e. Jacobi
  //! parameters above -1.
  void require_bound_sector() const {
    if (alpha() <= -1.0 || beta() <= -1.0)
      throw std::domain_error("AngularSector: Jacobi parameters <= -1");
  }

  //! L2 norm of the unnormalized mode over (0, pi), closed form:
  //! the substitution x = cos(theta) folds the sin(theta) Jacobian into
  //! the Jacobi weight, so the integral is the Jacobi orthogonality norm.
  double mode_norm_squared(int n) const {
    require_bound_sector();
    const double a = alpha();
    const double b = beta();
    const double lg = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                      std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0);
    return std::pow(2.0, a + b + 1.0) / (2.0 * n + a + b + 1.0) * std::exp(lg);
  }

  //! Normalized bound mode
  //!   Theta_n = N (1-cos)^{m/2} (1+cos)^{(m+1)/2} P_n^{(m-1/2, m+1/2)}(cos).
  double mode(int n, double theta) const {
    const double c = std::cos(theta);
    const double pref = std::pow(1.0 - c, 0.5 * m) *
                        std::pow(1.0 + c, 0.5 * (m + 1));
    return pref * jacobi_p(n, alpha(), beta(), c) /
           std::sqrt(mode_norm_squared(n));
  }

  double mode_derivative(int n, double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double half = 0.5 * theta;
    const double p = jacobi_p(n, alpha(), beta(), c);
    const double dp = jacobi_p_derivative(n, alpha(), beta(), c);
    const double pref = std::pow(1.0 - c, 0.5 * m) *
                        std::pow(1.0 + c, 0.5 * (m + 1));
    const double logfactor =
        0.5 * m * std::cos(half) / std::sin(half) -
        0.5 * (m + 1) * std::sin(half) / std::cos(half);
    return (pref * (logfactor * p - s * dp)) /
           std::sqrt(mode_norm_squared(n));
  }

  //! exp(-int W), annihilated by (d/dtheta + W); unnormalized.
  double zero_mode_unnormalized(double theta) const {
    return std::pow(std::tan(0.5 * theta), -B()) *
           std::pow(std::sin(theta), A());
  }

  //! First order lowering operator (d/dtheta + W) acting on mode n.
  //! Sends the level-n mode of sector m to the level-(n-1) mode of
  //! sector m+1, scaled by +-omega_n.
  double lowering(int n, double theta) const {
    return mode_derivative(n, theta) + superpotential(theta) * mode(n, theta);
  }

  //! mode() and v_plus() in extended precision, for residuals that
  //! divide by h^2 and would otherwise bottom out on double rounding.
  long double mode_ext(int n, long double theta) const {
    const long double c = std::cos(theta);
    const long double pref = std::pow(1.0L - c, 0.5L * (long double)m) *
                             std::pow(1.0L + c, 0.5L * (long double)(m + 1));
    const long double a = (long double)alpha();
    const long double b = (long double)beta();
    const long double lg = std::lgamma(n + a + 1.0L) + std::lgamma(n + b + 1.0L) -
                           std::lgamma(n + a + b + 1.0L) - std::lgamma(n + 1.0L);
    const long double nrm =
        std::pow(2.0L, a + b + 1.0L) / (2.0L * n + a + b + 1.0L) * std::exp(lg);
    return pref * jacobi_p_recurrence<long double>(n, a, b, c) / std::sqrt(nrm);
  }

  long double v_plus_ext(long double theta) const {
    const long double s = std::sin(theta);
    const long double c = std::cos(theta);
    const long double w = ((long double)B() - (long double)A() * c) / s;
    const long double dw = ((long double)A() - (long double)B() * c) / (s * s);
    return w * w - dw;
  }
};

//! Residual of the ladder relation (d/dtheta + W) Theta_n = s*omega_n
//! Theta'_{n-1}, where Theta' lives in the sector with m shifted by one
//! and the sign s is fixed by matching at theta = pi/2.  The v_minus
//! partner of sector m is the v_plus potential of sector m+1 up to an
//! additive constant, which is what makes this pairing work; the naive
//! m -> -m image is not normalizable for m > 0.
inline double intertwine_check(double m, int n, int grid_points = 2000) {
  if (n < 1) throw std::invalid_argument("intertwine_check: n must be >= 1");
  const AngularSector lower{m};
  const AngularSector upper{m + 1.0};
  const double omega = std::sqrt(lower.eigenvalue(n));
  const double s =
      (lower.lowering(n, 0.5 * pi) * upper.mode(n - 1, 0.5 * pi) >= 0.0)
          ? 1.0
          : -1.0;
  const double h = pi / (grid_points + 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double theta = (i + 1) * h;
    const double r =
        lower.lowering(n, theta) - s * omega * upper.mode(n - 1, theta);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

//! Max |(d/dtheta + W) Theta_0| over an interior grid; the ground mode
//! is exp(-int W) up to normalization, so this vanishes analytically.
inline double annihilation_check(double m, int grid_points = 2000) {
  const AngularSector sector{m};
  const double h = pi / (grid_points + 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i)
    worst = std::max(worst, std::abs(sector.lowering(0, (i + 1) * h)));
  return worst;
}

//! sup |h Theta_n - lambda_n Theta_n| / sup |Theta_n| for the three
//! point Dirichlet stencil, the sup of the residual taken over the
//! interior window [window, pi - window].  The modes vanish like
//! theta^{m+1/2} at the poles, where the stencil truncation does not
//! decay with h; in the window it is clean O(h^2), and the samples are
//! evaluated in extended precision so the h^{-2} amplification of their
//! rounding does not mask it.
inline double interior_stencil_residual(const AngularSector& sec, int n,
                                        int grid_points,
                                        double window = 0.1) {
  const long double pil = 3.14159265358979323846264338327950288L;
  const long double h = pil / (grid_points + 1);
  const long double lam = (long double)sec.eigenvalue(n);
  std::vector<long double> f(grid_points);
  for (int i = 0; i < grid_points; ++i) f[i] = sec.mode_ext(n, (i + 1) * h);
  long double rmax = 0.0L, vmax = 0.0L;
  for (int i = 0; i < grid_points; ++i) {
    const long double th = (i + 1) * h;
    vmax = std::max(vmax, std::fabs(f[i]));
    if (th < (long double)window || th > pil - (long double)window) continue;
    const long double fm = i > 0 ? f[i - 1] : 0.0L;
    const long double fp = i + 1 < grid_points ? f[i + 1] : 0.0L;
    const long double hf =
        (-fm + 2.0L * f[i] - fp) / (h * h) + sec.v_plus_ext(th) * f[i];
    rmax = std::max(rmax, std::fabs(hf - lam * f[i]));
  }
  return (double)(rmax / vmax);
}

}  // namespace dsdirac
