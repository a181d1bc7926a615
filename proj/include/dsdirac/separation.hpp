#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dsdirac/common.hpp"
#include "dsdirac/susy_angular.hpp"

namespace dsdirac {

// =====================================================================
//  Separated Dirac system
//
//  After writing Psi = (T_1(tau) Y_1, T_2(tau) Y_2) with
//  Y_j = e^{i m phi} Theta_j(theta), the Dirac equation splits into a
//  pair of first order radial-like equations in tau and a pair in
//  theta, coupled through a single separation constant omega.  The
//  gauge potential A_1(theta) = i cot(theta)/(2e) removes the cot/2
//  drift and leaves Schroedinger form with the potentials V_[+-] below.
// =====================================================================

inline void require_off_axis(double theta) {
  if (std::abs(std::sin(theta)) < 1e-14)
    throw std::domain_error("separation: theta on a coordinate pole");
}

struct GaugeChoice {
  double e = 1.0;  // coupling charge, nonzero

  cplx A1(double theta) const {
    require_off_axis(theta);
    return iu * std::cos(theta) / std::sin(theta) / (2.0 * e);
  }

  cplx A1_derivative(double theta) const {
    require_off_axis(theta);
    const double s = std::sin(theta);
    return -iu / (s * s) / (2.0 * e);
  }
};

struct AngularPotentialPair {
  double m = 1.0;

  double v_plus(double theta) const {
    require_off_axis(theta);
    const double s = std::sin(theta);
    return (m * m - m * std::cos(theta)) / (s * s);
  }

  double v_minus(double theta) const {
    require_off_axis(theta);
    const double s = std::sin(theta);
    return (m * m + m * std::cos(theta)) / (s * s);
  }
};

inline AngularPotentialPair angular_potentials(double m) { return {m}; }

//! Complex potential of the second order temporal equation for y_k,
//!   U_k(tau) = 1/4 - (lM)^2 + eps*i lM coth(tau) - (w^2 + 1/4) csch^2(tau)
//! with eps = -1 for the first component and +1 for the second.
struct TemporalPotential {
  double ellM = 1.0;
  double omega2 = 0.0;
  int k = 1;

  int eps() const { return k == 1 ? -1 : +1; }

  cplx operator()(double tau) const {
    if (std::abs(tau) < 1e-300)
      throw std::domain_error("TemporalPotential: tau = 0 is singular");
    const double csch = 1.0 / std::sinh(tau);
    const double coth = std::cosh(tau) * csch;
    return cplx(0.25 - ellM * ellM - (omega2 + 0.25) * csch * csch,
                eps() * ellM * coth);
  }
};

inline TemporalPotential temporal_potential(double ellM, double omega2,
                                            int k) {
  if (k != 1 && k != 2)
    throw std::invalid_argument("temporal_potential: k must be 1 or 2");
  return {ellM, omega2, k};
}

//! Coefficients of the reduced second order theta equation after the
//! gauge substitution: the first-derivative coefficient -2ieA1 - cot
//! collapses to zero and the multiplicative part collapses to V_[+-].
//! Returns (|drift|, |potential - closed form|) for component j in {1,2}.
struct ReducedThetaCheck {
  double drift;
  double potential_mismatch;
};

inline ReducedThetaCheck reduced_theta_check(double m, double theta, int j,
                                             const GaugeChoice& gauge = {}) {
  require_off_axis(theta);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double cot = c / s;
  const cplx a1 = gauge.A1(theta);
  const cplx drift = -2.0 * iu * gauge.e * a1 - cot;
  const double sign = (j == 1) ? -1.0 : 1.0;
  const cplx sq = gauge.e * a1 - iu * cot / 2.0;
  const cplx pot = sq * sq + sign * m * cot / s + (m * m + 0.5) / (s * s) -
                   iu * gauge.e * gauge.A1_derivative(theta);
  const AngularPotentialPair pair{m};
  const double closed = (j == 1) ? pair.v_plus(theta) : pair.v_minus(theta);
  return {std::abs(drift), std::abs(pot - closed)};
}

using TemporalFn = std::function<cplx(double)>;
using AngularFn = std::function<cplx(double)>;

//! Max-norm residual of the four first order separated equations over
//! uniform interior grids, derivatives by 4th order central differences
//! applied to the callables.  Stencil points stay inside the open
//! domain by skipping two cells at each end.
inline double first_order_residual(const TemporalFn& T1, const TemporalFn& T2,
                                   const AngularFn& Th1, const AngularFn& Th2,
                                   double m, double omega, double ellM,
                                   int grid_points = 2000,
                                   double tau_lo = 0.25, double tau_hi = 3.0,
                                   const GaugeChoice& gauge = {}) {
  if (grid_points < 16)
    throw std::invalid_argument("first_order_residual: grid too small");
  if (!(tau_lo > 0.0))
    throw std::domain_error("first_order_residual: tau grid touches 0");

  auto d4 = [](const std::function<cplx(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) /
           (12.0 * h);
  };

  double worst = 0.0;

  const double ht = (tau_hi - tau_lo) / (grid_points + 1);
  for (int i = 2; i < grid_points - 2; ++i) {
    const double tau = tau_lo + (i + 1) * ht;
    const double csch = 1.0 / std::sinh(tau);
    const double coth = std::cosh(tau) * csch;
    const cplx t1 = T1(tau), t2 = T2(tau);
    const cplx e15 = d4(T1, tau, ht) + (coth + iu * ellM) * t1 -
                     iu * omega * csch * t2;
    const cplx e16 = -(d4(T2, tau, ht) + (coth - iu * ellM) * t2) +
                     iu * omega * csch * t1;
    worst = std::max({worst, std::abs(e15), std::abs(e16)});
  }

  const double hq = pi / (grid_points + 1);
  for (int i = 2; i < grid_points - 2; ++i) {
    const double theta = (i + 1) * hq;
    const double cot = std::cos(theta) / std::sin(theta);
    const double csc = 1.0 / std::sin(theta);
    const cplx a1 = gauge.A1(theta);
    const cplx th1 = Th1(theta), th2 = Th2(theta);
    const cplx e20 = -d4(Th2, theta, hq) -
                     (0.5 * cot + m * csc + iu * gauge.e * a1) * th2 -
                     omega * th1;
    const cplx e21 = d4(Th1, theta, hq) +
                     (0.5 * cot - m * csc + iu * gauge.e * a1) * th1 -
                     omega * th2;
    worst = std::max({worst, std::abs(e20), std::abs(e21)});
  }
  return worst;
}

//! Exact solution pair of the first order theta system.  Theta1 is the
//! normalized level-n bound mode of sector m; the ladder image
//! Theta2 = (d/dtheta - m csc) Theta1 / omega solves the partner
//! equation at the same omega.  The system's separation constant is
//! omega = m + n + 1/2: the ladder factorization carries no additive
//! constant, unlike the superpotential convention whose ground level
//! sits at zero.
struct AngularSolutionPair {
  AngularSector sector{1.0};
  int n = 0;

  double omega() const { return sector.m + n + 0.5; }

  double theta1(double theta) const { return sector.mode(n, theta); }

  double theta2(double theta) const {
    return (sector.mode_derivative(n, theta) -
            sector.m / std::sin(theta) * sector.mode(n, theta)) /
           omega();
  }
};

//! Two component field psi_j(tau, theta, phi) = T_j e^{i m phi} Theta_j.
struct SeparatedSpinor {
  TemporalFn T1, T2;
  AngularFn Th1, Th2;
  double m = 1.0;

  cplx psi1(double tau, double theta, double phi) const {
    return T1(tau) * std::exp(iu * m * phi) * Th1(theta);
  }
  cplx psi2(double tau, double theta, double phi) const {
    return T2(tau) * std::exp(iu * m * phi) * Th2(theta);
  }
};

inline SeparatedSpinor assemble_spinor(TemporalFn T1, TemporalFn T2,
                                       AngularFn Th1, AngularFn Th2,
                                       double m) {
  return {std::move(T1), std::move(T2), std::move(Th1), std::move(Th2), m};
}

}  // namespace dsdirac
