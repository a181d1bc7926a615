#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dsdirac/common.hpp"
#include "dsdirac/gamma_algebra.hpp"

namespace dsdirac {

// =====================================================================
//  Three dimensional expanding background
//
//    ds^2 = l^2 dtau^2 - l^2 sinh^2(tau) dtheta^2
//                      - l^2 sinh^2(tau) sin^2(theta) dphi^2
//
//  Coordinates are indexed (0,1,2) = (tau, theta, phi).  The module
//  exposes the metric, the inverse vierbein e_a^mu, the Christoffel
//  symbols, and the spin connection, both as closed forms and through
//  the generic formula
//
//    Gamma_mu = (1/4) g_{lambda rho}
//               ( d_mu e^a_nu e_a^rho - Gamma^rho_{nu mu} ) S^{lambda nu}
//
//  so the two can be cross-checked on arbitrary sample points.
// =====================================================================

//! Interior-point guard shared by all geometric evaluators.  The metric
//! degenerates at sinh tau = 0 and on the axis sin theta = 0; evaluation
//! there is rejected instead of returning infinities.
inline void require_interior(double tau, double theta) {
  if (!(tau > 0.0))
    throw std::domain_error("geometry: tau must be positive");
  if (std::abs(std::sin(theta)) < 1e-14)
    throw std::domain_error("geometry: theta on a coordinate pole");
}

struct Background {
  double l = 1.0;  // curvature radius

  // --- metric ---------------------------------------------------------

  Eigen::Matrix3d metric(double tau, double theta) const {
    require_interior(tau, theta);
    const double sh = std::sinh(tau);
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    g(0, 0) = l * l;
    g(1, 1) = -l * l * sh * sh;
    g(2, 2) = -l * l * sh * sh * std::sin(theta) * std::sin(theta);
    return g;
  }

  Eigen::Matrix3d metric_inverse(double tau, double theta) const {
    Eigen::Matrix3d g = metric(tau, theta);
    Eigen::Matrix3d ginv = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) ginv(i, i) = 1.0 / g(i, i);
    return ginv;
  }

  // --- vierbein ---------------------------------------------------------
  // Frame index a labels rows, coordinate index mu labels columns.
  // e^a_mu is diagonal: diag(l, l sinh tau, l sinh tau sin theta).

  Eigen::Matrix3d vierbein(double tau, double theta) const {
    require_interior(tau, theta);
    const double sh = std::sinh(tau);
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    e(0, 0) = l;
    e(1, 1) = l * sh;
    e(2, 2) = l * sh * std::sin(theta);
    return e;
  }

  //! Inverse vierbein e_a^mu with e_a^mu e^a_nu = delta^mu_nu.
  Eigen::Matrix3d vierbein_inverse(double tau, double theta) const {
    Eigen::Matrix3d e = vierbein(tau, theta);
    Eigen::Matrix3d einv = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) einv(i, i) = 1.0 / e(i, i);
    return einv;
  }

  //! Coordinate derivative d_mu e^a_nu, analytic.
  //! Index order: deriv[mu](a, nu).
  std::array<Eigen::Matrix3d, 3> vierbein_derivative(double tau,
                                                     double theta) const {
    const double ch = std::cosh(tau);
    const double sh = std::sinh(tau);
    std::array<Eigen::Matrix3d, 3> d;
    d.fill(Eigen::Matrix3d::Zero());
    d[0](1, 1) = l * ch;
    d[0](2, 2) = l * ch * std::sin(theta);
    d[1](2, 2) = l * sh * std::cos(theta);
    return d;
  }

  // --- Christoffel symbols ---------------------------------------------
  //! Gamma^rho_{mu nu}; index order christoffel(tau,theta)[rho](mu,nu).
  std::array<Eigen::Matrix3d, 3> christoffel(double tau, double theta) const {
    require_interior(tau, theta);
    const double sh = std::sinh(tau);
    const double ch = std::cosh(tau);
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    std::array<Eigen::Matrix3d, 3> G;
    G.fill(Eigen::Matrix3d::Zero());
    // rho = tau
    G[0](1, 1) = sh * ch;
    G[0](2, 2) = sh * ch * st * st;
    // rho = theta
    G[1](0, 1) = G[1](1, 0) = ch / sh;
    G[1](2, 2) = -st * ct;
    // rho = phi
    G[2](0, 2) = G[2](2, 0) = ch / sh;
    G[2](1, 2) = G[2](2, 1) = ct / st;
    return G;
  }

  //! Same symbols from the metric by finite differences, for testing.
  std::array<Eigen::Matrix3d, 3> christoffel_fd(double tau, double theta,
                                                double h = 1e-5) const {
    auto gat = [&](double t, double q) { return metric(t, q); };
    // d_mu g_{ab}; only tau and theta derivatives are nonzero.
    std::array<Eigen::Matrix3d, 3> dg;
    dg[0] = (gat(tau + h, theta) - gat(tau - h, theta)) / (2 * h);
    dg[1] = (gat(tau, theta + h) - gat(tau, theta - h)) / (2 * h);
    dg[2] = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d ginv = metric_inverse(tau, theta);
    std::array<Eigen::Matrix3d, 3> G;
    G.fill(Eigen::Matrix3d::Zero());
    for (int r = 0; r < 3; ++r)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          double s = 0.0;
          for (int k = 0; k < 3; ++k)
            s += 0.5 * ginv(r, k) * (dg[m](k, n) + dg[n](k, m) - dg[k](m, n));
          G[r](m, n) = s;
        }
    return G;
  }

  // --- spin connection ---------------------------------------------------

  //! Gamma_mu from the general formula with S^{lambda nu} built from the
  //! curved gammas gamma^mu = e_a^mu gamma^a.
  std::array<Mat2, 3> spin_connection(double tau, double theta,
                                      const GammaSet& gs) const {
    require_interior(tau, theta);
    Eigen::Matrix3d einv = vierbein_inverse(tau, theta);
    auto deriv = vierbein_derivative(tau, theta);
    auto chris = christoffel(tau, theta);
    Eigen::Matrix3d g = metric(tau, theta);

    std::array<Mat2, 3> gamma_up;  // curved gamma^mu
    for (int mu = 0; mu < 3; ++mu) {
      gamma_up[mu] = Mat2::Zero();
      for (int a = 0; a < 3; ++a) gamma_up[mu] += einv(a, mu) * gs.gamma[a];
    }

    std::array<Mat2, 3> res;
    for (int mu = 0; mu < 3; ++mu) {
      Mat2 acc = Mat2::Zero();
      for (int lam = 0; lam < 3; ++lam)
        for (int nu = 0; nu < 3; ++nu) {
          // coefficient g_{lambda rho} ( d_mu e^a_nu e_a^rho - Gamma^rho_{nu mu} )
          double coeff = 0.0;
          for (int rho = 0; rho < 3; ++rho) {
            double t = -chris[rho](nu, mu);
            for (int a = 0; a < 3; ++a)
              t += deriv[mu](a, nu) * einv(a, rho);
            coeff += g(lam, rho) * t;
          }
          if (coeff == 0.0) continue;
          Mat2 S = 0.5 * (gamma_up[lam] * gamma_up[nu] -
                          gamma_up[nu] * gamma_up[lam]);
          acc += 0.25 * coeff * S;
        }
      res[mu] = acc;
    }
    return res;
  }

  //! Closed forms: Gamma_0 = 0,
  //!   Gamma_1 = -(1/2) cosh(tau) gamma^0 gamma^1,
  //!   Gamma_2 = -(1/2) ( cosh(tau) sin(theta) gamma^0 gamma^2
  //!                      + cos(theta) gamma^1 gamma^2 ).
  std::array<Mat2, 3> spin_connection_closed(double tau, double theta,
                                             const GammaSet& gs) const {
    std::array<Mat2, 3> res;
    res[0] = Mat2::Zero();
    res[1] = -0.5 * std::cosh(tau) * gs.gamma[0] * gs.gamma[1];
    res[2] = -0.5 * (std::cosh(tau) * std::sin(theta) * gs.gamma[0] * gs.gamma[2] +
                     std::cos(theta) * gs.gamma[1] * gs.gamma[2]);
    return res;
  }
};

}  // namespace dsdirac
