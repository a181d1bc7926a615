#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dsdirac/separation.hpp"

using namespace dsdirac;

TEST_CASE("gauge choice cancels the reduction drift", "[separation]") {
  for (double e : {1.0, 2.5}) {
    const GaugeChoice gauge{e};
    for (double th : {0.5, 1.2, 2.4}) {
      const cplx drift = -2.0 * iu * e * gauge.A1(th) -
                         std::cos(th) / std::sin(th);
      REQUIRE(std::abs(drift) < 1e-14);
    }
  }
  // derivative member against finite differences
  const GaugeChoice gauge;
  const double h = 1e-6, th = 1.1;
  const cplx fd = (gauge.A1(th + h) - gauge.A1(th - h)) / (2 * h);
  REQUIRE(std::abs(gauge.A1_derivative(th) - fd) < 1e-7);
}

TEST_CASE("second order reduction lands on the ladder potentials",
          "[separation]") {
  for (double m : {1.0, 2.0}) {
    for (double th : {0.5, 1.2, 2.4}) {
      for (int j : {1, 2}) {
        const ReducedThetaCheck c = reduced_theta_check(m, th, j);
        REQUIRE(c.drift < 1e-12);
        REQUIRE(c.potential_mismatch < 1e-12);
      }
    }
  }
}

TEST_CASE("angular pair solves the first order system exactly",
          "[separation]") {
  const AngularSolutionPair pair{AngularSector{1.0}, 1};
  auto zero = [](double) { return cplx(0.0, 0.0); };
  auto th1 = [&](double t) { return cplx(pair.theta1(t), 0.0); };
  auto th2 = [&](double t) { return cplx(pair.theta2(t), 0.0); };
  const double r = first_order_residual(zero, zero, th1, th2, 1.0,
                                        pair.omega(), 1.0);
  REQUIRE(r < 1e-7);
}

TEST_CASE("temporal pair at zero separation constant", "[separation]") {
  // With omega = 0 the system decouples and integrates in closed form:
  // T_1 = csch(tau) e^{-i lM tau}, T_2 = csch(tau) e^{+i lM tau}.
  const double ellM = 1.0;
  auto t1 = [&](double tau) {
    return std::exp(-iu * ellM * tau) / std::sinh(tau);
  };
  auto t2 = [&](double tau) {
    return std::exp(iu * ellM * tau) / std::sinh(tau);
  };
  auto zero = [](double) { return cplx(0.0, 0.0); };
  const double r = first_order_residual(t1, t2, zero, zero, 1.0, 0.0, ellM,
                                        2000, 0.5, 3.0);
  REQUIRE(r < 1e-7);
}

TEST_CASE("residual detects a perturbed solution", "[separation]") {
  const AngularSolutionPair pair{AngularSector{1.0}, 1};
  auto zero = [](double) { return cplx(0.0, 0.0); };
  auto th1 = [&](double t) {
    return cplx(pair.theta1(t) + 1e-3 * std::sin(t), 0.0);
  };
  auto th2 = [&](double t) { return cplx(pair.theta2(t), 0.0); };
  const double r = first_order_residual(zero, zero, th1, th2, 1.0,
                                        pair.omega(), 1.0);
  REQUIRE(r > 1e-3);
}

TEST_CASE("residual is invariant under a global phase", "[separation]") {
  const AngularSolutionPair pair{AngularSector{1.0}, 2};
  auto zero = [](double) { return cplx(0.0, 0.0); };
  const cplx phase = std::exp(iu * 0.7);
  auto th1 = [&](double t) { return cplx(pair.theta1(t), 0.0); };
  auto th2 = [&](double t) { return cplx(pair.theta2(t), 0.0); };
  auto th1p = [&](double t) { return phase * pair.theta1(t); };
  auto th2p = [&](double t) { return phase * pair.theta2(t); };
  const double r0 = first_order_residual(zero, zero, th1, th2, 1.0,
                                         pair.omega(), 1.0);
  const double r1 = first_order_residual(zero, zero, th1p, th2p, 1.0,
                                         pair.omega(), 1.0);
  REQUIRE(std::abs(r0 - r1) < 1e-12);
}

TEST_CASE("separation constant tracks the level", "[separation]") {
  for (int n = 0; n <= 3; ++n) {
    const AngularSolutionPair pair{AngularSector{1.0}, n};
    REQUIRE(pair.omega() == Catch::Approx(1.5 + n));
  }
  const AngularSolutionPair pair{AngularSector{2.0}, 1};
  REQUIRE(pair.omega() == Catch::Approx(3.5));
}

TEST_CASE("assembled spinor factorizes", "[separation]") {
  auto t1 = [](double tau) { return cplx(std::cos(tau), 0.2); };
  auto t2 = [](double tau) { return cplx(0.1, std::sin(tau)); };
  auto q1 = [](double th) { return cplx(th * th, 0.0); };
  auto q2 = [](double th) { return cplx(1.0 + th, 0.0); };
  const SeparatedSpinor s = assemble_spinor(t1, t2, q1, q2, 2.0);
  const double tau = 1.2, th = 0.8, phi = 0.5;
  REQUIRE(std::abs(s.psi1(tau, th, phi) -
                   t1(tau) * std::exp(iu * 2.0 * phi) * q1(th)) < 1e-15);
  REQUIRE(std::abs(s.psi2(tau, th, phi) -
                   t2(tau) * std::exp(iu * 2.0 * phi) * q2(th)) < 1e-15);
}

TEST_CASE("domain guards", "[separation]") {
  auto zero = [](double) { return cplx(0.0, 0.0); };
  REQUIRE_THROWS_AS(
      first_order_residual(zero, zero, zero, zero, 1.0, 1.5, 1.0, 8),
      std::invalid_argument);
  REQUIRE_THROWS_AS(first_order_residual(zero, zero, zero, zero, 1.0, 1.5,
                                         1.0, 2000, 0.0, 3.0),
                    std::domain_error);
  REQUIRE_THROWS_AS(reduced_theta_check(1.0, 0.0, 1), std::domain_error);
}
