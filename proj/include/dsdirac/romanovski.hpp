#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsdirac/common.hpp"
#include "dsdirac/quadrature.hpp"

namespace dsdirac {

using rational = boost::multiprecision::cpp_rational;

// =====================================================================
//  Romanovski polynomials
//
//    (1+x^2) R'' + (2bx + a) R' - nubar(nubar - 1 + 2b) R = 0
//
//  Monic coefficients are built by equating powers of x from the top
//  down.  The leading-power identity cancels exactly, so the downward
//  recurrence is well posed; the denominator
//
//    k(k - 1 + 2b) - nubar(nubar - 1 + 2b) = (k - nubar)(k + nubar - 1 + 2b)
//
//  can vanish for k = 1 - 2b - nubar, the finite-orthogonality
//  degeneracy, which is reported instead of divided through.
//  The same recurrence runs over doubles or exact rationals.
// =====================================================================

template <class Field>
std::vector<Field> romanovski_coefficients(int nubar, const Field& a,
                                           const Field& b) {
  if (nubar < 0)
    throw std::invalid_argument("romanovski_coefficients: negative degree");
  std::vector<Field> c(nubar + 1, Field(0));
  c[nubar] = Field(1);
  const Field lam = Field(nubar) * (Field(nubar - 1) + 2 * b);
  for (int k = nubar - 1; k >= 0; --k) {
    const Field den = Field(k) * (Field(k - 1) + 2 * b) - lam;
    if (den == 0)
      throw DegeneracyError(
          "romanovski_coefficients: vanishing recurrence denominator", k);
    Field num = a * Field(k + 1) * c[k + 1];
    if (k + 2 <= nubar) num += Field((k + 2) * (k + 1)) * c[k + 2];
    c[k] = -num / den;
  }
  return c;
}

//! Coefficients of the ODE left-hand side applied to the polynomial
//! with coefficient vector c; identically zero for a valid solution.
template <class Field>
std::vector<Field> romanovski_ode_residual(const std::vector<Field>& c,
                                           const Field& a, const Field& b) {
  const int nu = static_cast<int>(c.size()) - 1;
  const Field lam = Field(nu) * (Field(nu - 1) + 2 * b);
  std::vector<Field> r(nu + 1, Field(0));
  for (int p = 0; p <= nu; ++p) {
    Field acc = (Field(p) * (Field(p - 1) + 2 * b) - lam) * c[p];
    if (p + 1 <= nu) acc += a * Field(p + 1) * c[p + 1];
    if (p + 2 <= nu) acc += Field((p + 2) * (p + 1)) * c[p + 2];
    r[p] = acc;
  }
  return r;
}

struct RomanovskiPoly {
  int nubar = 0;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs;  // monic, coeffs[k] multiplies x^k

  double operator()(double x) const {
    double v = 0.0;
    for (int k = nubar; k >= 0; --k) v = v * x + coeffs[k];
    return v;
  }

  double derivative(double x) const {
    double v = 0.0;
    for (int k = nubar; k >= 1; --k) v = v * x + k * coeffs[k];
    return v;
  }

  double second_derivative(double x) const {
    double v = 0.0;
    for (int k = nubar; k >= 2; --k) v = v * x + k * (k - 1) * coeffs[k];
    return v;
  }

  double eigen_term() const { return nubar * (nubar - 1.0 + 2.0 * b); }
};

inline RomanovskiPoly romanovski_poly(int nubar, double a, double b) {
  return {nubar, a, b, romanovski_coefficients<double>(nubar, a, b)};
}

inline double romanovski_weight(double z, double a, double b) {
  return std::pow(1.0 + z * z, b - 1.0) * std::exp(a * std::atan(z));
}

//! Finite orthogonality: the weighted product integral converges only
//! while nu1 + nu2 + 2(b-1) < -1.  Quadrature runs on z = tan(u),
//! folding the infinite range into (-pi/2, pi/2).
inline double orthogonality_integral(int nu1, int nu2, double a, double b,
                                     double abstol = 1e-10) {
  if (!(nu1 + nu2 + 2.0 * (b - 1.0) < -1.0))
    throw DivergenceError(
        "orthogonality_integral: weight integral diverges for this pair");
  const RomanovskiPoly r1 = romanovski_poly(nu1, a, b);
  const RomanovskiPoly r2 = romanovski_poly(nu2, a, b);
  auto f = [&](double u) {
    const double z = std::tan(u);
    return romanovski_weight(z, a, b) * r1(z) * r2(z) * (1.0 + z * z);
  };
  return integrate(f, -0.5 * pi, 0.5 * pi, abstol);
}

// =====================================================================
//  Model constants of the temporal problem
// =====================================================================

struct ModelConstants {
  double ellM = 1.0;
  int eps = 1;
  double a1 = 0.0;
  double A = 0.0;
  double B = 0.0;
  double a = 0.0;  // weight parameter, -2B
  double b = 0.0;  // weight parameter, 1/2 - A
};

inline ModelConstants model_constants(double ellM, int eps) {
  if (ellM == 0.0)
    throw std::invalid_argument("model_constants: ellM must be nonzero");
  if (eps != -1 && eps != 1)
    throw std::invalid_argument("model_constants: eps must be -1 or +1");
  const double x = ellM * ellM;
  const double a1 = std::sqrt((1.0 + 4.0 * x) * (1.0 + 4.0 * x) + 16.0 * x);
  const double root = std::sqrt(std::max(0.0, a1 - 1.0 - 4.0 * x));
  const double s2 = std::sqrt(2.0);
  ModelConstants c;
  c.ellM = ellM;
  c.eps = eps;
  c.a1 = a1;
  c.A = (-8.0 * ellM * eps + 4.0 * s2 * x * root + s2 * (1.0 + a1) * root) /
        (16.0 * ellM * eps);
  c.B = std::sqrt(std::max(0.0, (a1 - 1.0) / 8.0 - 0.5 * x));
  c.a = -2.0 * c.B;
  c.b = 0.5 - c.A;
  return c;
}

//! The two identities that make the branch-factor substitution close:
//! B(2A+1) = lM*eps and A^2 + A - B^2 = (lM)^2.  Both follow from the
//! closed forms of the constants; returned as absolute residuals.
struct ConstantsIdentityResiduals {
  double linear;
  double quadratic;
};

inline ConstantsIdentityResiduals constants_identity_residuals(
    const ModelConstants& c) {
  return {std::abs(c.B * (2.0 * c.A + 1.0) - c.ellM * c.eps),
          std::abs(c.A * c.A + c.A - c.B * c.B - c.ellM * c.ellM)};
}

// =====================================================================
//  Eigencondition and quantum-number bookkeeping
// =====================================================================

//! Real roots nubar of A^2 - w^2 = -nubar(nubar - 1 + 2b), b = 1/2 - A,
//! which collapses to (nubar - A)^2 = w^2.
struct EigenconditionRoots {
  std::vector<double> roots;
  std::vector<int> quantizable;  // nonnegative integer roots
};

inline EigenconditionRoots eigencondition(double A_big, double omega2) {
  EigenconditionRoots out;
  if (omega2 < 0.0) return out;
  const double w = std::sqrt(omega2);
  out.roots = {A_big - w, A_big + w};
  if (omega2 == 0.0) out.roots.pop_back();
  for (double r : out.roots) {
    const double nearest = std::round(r);
    if (nearest >= 0.0 && std::abs(r - nearest) < 1e-9)
      out.quantizable.push_back(static_cast<int>(nearest));
  }
  return out;
}

//! nu as a function of ellM at fixed eps; strictly monotone on each
//! eps branch, which the numeric inversion below relies on.
inline double nu_of_ellM(double ellM, int eps) {
  const double x = ellM * ellM;
  const double a1 = std::sqrt((1.0 + 4.0 * x) * (1.0 + 4.0 * x) + 16.0 * x);
  return std::sqrt(2.0) / (16.0 * ellM * eps) *
         std::sqrt(std::max(0.0, a1 - 1.0 - 4.0 * x)) * (a1 + 1.0 + 4.0 * x);
}

inline double ellM_from_nu(double nu, int eps, double lo = 1e-9,
                           double hi = 1e4) {
  auto f = [&](double t) { return nu_of_ellM(t, eps) - nu; };
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::domain_error("ellM_from_nu: target nu outside branch range");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

struct QuantumConsistencyReport {
  double res_level_match;   // A^2 + (m+1/2)^2 - (m+n+1/2)^2 + nu(nu-1+2b)
  double res_branch;        // closest branch of A = nu +- sqrt(n+2mn+n^2)
  double res_half;          // n^2 + 2mn + n - 1/2
  double m_solved;          // m with res_half = 0 at this n
  double ellM_solved;       // inversion of nu(ellM) at the given nu
  double nu_roundtrip_err;  // |nu(ellM_solved) - nu|
};

inline QuantumConsistencyReport quantum_consistency(double m, double n,
                                                    double nu,
                                                    const ModelConstants& c) {
  if (n == 0.0)
    throw std::invalid_argument("quantum_consistency: n = 0 has no m-solve");
  QuantumConsistencyReport r;
  r.res_level_match =
      std::abs(c.A * c.A + (m + 0.5) * (m + 0.5) -
               (m + n + 0.5) * (m + n + 0.5) + nu * (nu - 1.0 + 2.0 * c.b));
  const double disc = n + 2.0 * m * n + n * n;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    r.res_branch = std::min(std::abs(c.A - (nu + s)), std::abs(c.A - (nu - s)));
  } else {
    r.res_branch = std::numeric_limits<double>::infinity();
  }
  r.res_half = std::abs(n * n + 2.0 * m * n + n - 0.5);
  r.m_solved = (0.5 - n - n * n) / (2.0 * n);
  r.ellM_solved = ellM_from_nu(nu, c.eps);
  r.nu_roundtrip_err = std::abs(nu_of_ellM(r.ellM_solved, c.eps) - nu);
  return r;
}

// =====================================================================
//  Time-part solutions
//
//  ytilde(z) = (z+i)^{-(A+iB)/2} (z-i)^{-(A-iB)/2} R(z); on the real
//  line the principal-branch product collapses to the positive function
//  (1+z^2)^{-A/2} e^{B(pi/2 - atan z)}, so everything downstream is
//  real.  The tau evaluator composes the configured tau->z map with the
//  csch^{3/2} prefactor; only the z-variable picture is free of the
//  domain mismatch noted in the map comment below.
// =====================================================================

//! The printed map "z = i coth(i tau)" is the trigonometric cotangent,
//! which sweeps the whole real z-line for tau in (0, pi) but clashes
//! with the hyperbolic prefactors written in tau.  The hyperbolic
//! alternative z = coth(tau) keeps tau > 0 but only reaches z > 1.
enum class TauMap { trig_cot, hyper_coth };

struct TimeSolution {
  int k = 1;
  int nubar = 0;
  ModelConstants consts;
  RomanovskiPoly R;
  TauMap map = TauMap::trig_cot;

  double omega2() const {
    const double d = consts.A - nubar;
    return d * d;
  }

  //! Principal-branch product evaluated as complex powers.
  cplx branch_complex(double z) const {
    const cplx wp(consts.A, consts.B);
    const cplx wm(consts.A, -consts.B);
    return std::pow(cplx(z, 1.0), -0.5 * wp) * std::pow(cplx(z, -1.0), -0.5 * wm);
  }

  //! Same product in closed real form.
  double branch(double z) const {
    return std::pow(1.0 + z * z, -0.5 * consts.A) *
           std::exp(consts.B * (0.5 * pi - std::atan(z)));
  }

  double branch_log_d1(double z) const {
    return -(consts.A * z + consts.B) / (1.0 + z * z);
  }

  double branch_log_d2(double z) const {
    const double A = consts.A, B = consts.B;
    const double q = 1.0 + z * z;
    return (A * z * z + 2.0 * B * z - A) / (q * q);
  }

  double ytilde(double z) const { return branch(z) * R(z); }

  double ytilde_prime(double z) const {
    return branch(z) * (R.derivative(z) + branch_log_d1(z) * R(z));
  }

  double ytilde_second(double z) const {
    const double d1 = branch_log_d1(z);
    return branch(z) * (R.second_derivative(z) + 2.0 * d1 * R.derivative(z) +
                        (branch_log_d2(z) + d1 * d1) * R(z));
  }

  double y(double z) const {
    return std::pow(1.0 + z * z, -0.25) * ytilde(z);
  }

  double z_of_tau(double tau) const {
    if (map == TauMap::trig_cot) {
      if (!(tau > 0.0 && tau < pi))
        throw std::domain_error("TimeSolution: trig map needs tau in (0, pi)");
      return std::cos(tau) / std::sin(tau);
    }
    if (!(tau > 0.0))
      throw std::domain_error("TimeSolution: hyperbolic map needs tau > 0");
    return std::cosh(tau) / std::sinh(tau);
  }

  //! True when the configured map reaches every real z; the hyperbolic
  //! choice only covers z > 1 and is flagged accordingly in reports.
  bool map_covers_real_line() const { return map == TauMap::trig_cot; }

  double T_of_tau(double tau) const {
    const double z = z_of_tau(tau);
    return std::pow(1.0 / std::sinh(tau), 1.5) * y(z);
  }
};

inline TimeSolution time_solution(int k, int nubar, const ModelConstants& c,
                                  TauMap map = TauMap::trig_cot) {
  if (k != 1 && k != 2)
    throw std::invalid_argument("time_solution: k must be 1 or 2");
  const int expected_eps = (k == 1) ? -1 : +1;
  if (c.eps != expected_eps)
    throw std::invalid_argument(
        "time_solution: constants built for the other component sign");
  return {k, nubar, c, romanovski_poly(nubar, c.a, c.b), map};
}

//! Residual of the second order z-equation for ytilde,
//!   -(1+z^2) y'' - z y' + (-(lM)^2/(1+z^2) + w^2 + lM eps z/(1+z^2)) y,
//! with analytic derivatives; vanishes when the eigencondition holds.
inline double temporal_ode_residual(const TimeSolution& s, double z) {
  const double q = 1.0 + z * z;
  const double x = s.consts.ellM * s.consts.ellM;
  const double pot = -x / q + s.omega2() + s.consts.ellM * s.consts.eps * z / q;
  return -q * s.ytilde_second(z) - z * s.ytilde_prime(z) + pot * s.ytilde(z);
}

//! Peels the branch factor off with explicit complex powers and checks
//! that the quotient satisfies the polynomial equation
//!   (1+z^2) Q'' + (z(1-2A) - 2B) Q' + (A^2 - w^2) Q = 0,
//! derivatives by 4th order central differences.  The quotient is a
//! polynomial, so the stencil is exact and the residual is pure
//! rounding noise; it is reported relative to the local scale of Q.
inline double transform_chain_residual(const TimeSolution& s, double z,
                                       double h = 1e-2) {
  auto Q = [&](double t) {
    const cplx inv = std::pow(cplx(t, 1.0), 0.5 * cplx(s.consts.A, s.consts.B)) *
                     std::pow(cplx(t, -1.0), 0.5 * cplx(s.consts.A, -s.consts.B));
    return inv * cplx(s.ytilde(t), 0.0);
  };
  const cplx q1 =
      (-Q(z + 2 * h) + 8.0 * Q(z + h) - 8.0 * Q(z - h) + Q(z - 2 * h)) /
      (12.0 * h);
  const cplx q2 = (-Q(z + 2 * h) + 16.0 * Q(z + h) - 30.0 * Q(z) +
                   16.0 * Q(z - h) - Q(z - 2 * h)) /
                  (12.0 * h * h);
  const double A = s.consts.A, B = s.consts.B;
  const cplx res = (1.0 + z * z) * q2 + (z * (1.0 - 2.0 * A) - 2.0 * B) * q1 +
                   (A * A - s.omega2()) * Q(z);
  return std::abs(res) / std::max(1.0, std::abs(Q(z)));
}

}  // namespace dsdirac
