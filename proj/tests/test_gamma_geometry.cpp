#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dsdirac/gamma_algebra.hpp"
#include "dsdirac/geometry.hpp"

using namespace dsdirac;

TEST_CASE("Clifford relation holds without rounding", "[gamma]") {
  const GammaSet gs;
  REQUIRE(gs.anticommutator_defect() == 0.0);
  REQUIRE(gs.adjoint_defect() == 0.0);
}

TEST_CASE("products land on single Pauli directions", "[gamma]") {
  const GammaSet gs;
  Mat2 s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, cplx(0, -1), cplx(0, 1), 0;
  s3 << 1, 0, 0, -1;

  // gamma^0 gamma^1 = -sigma2 and gamma^0 gamma^2 = sigma1, both
  // Hermitian; the theta and phi channels of the Hamiltonian live on
  // exactly these two directions.
  const Mat2 g01 = gs.gamma[0] * gs.gamma[1];
  const Mat2 g02 = gs.gamma[0] * gs.gamma[2];
  REQUIRE((g01 + s2).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((g02 - s1).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((g01.adjoint() - g01).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((g02.adjoint() - g02).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE(pauli_coefficient(s2, g01) == cplx(-1.0, 0.0));
  REQUIRE(pauli_coefficient(s1, g01) == cplx(0.0, 0.0));
  REQUIRE(pauli_coefficient(s3, g01) == cplx(0.0, 0.0));
  REQUIRE(pauli_coefficient(s1, g02) == cplx(1.0, 0.0));
}

TEST_CASE("metric, vierbein and Christoffels are mutually consistent",
          "[geometry]") {
  const Background bg{1.3};
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> utau(0.2, 3.0);
  std::uniform_real_distribution<double> uth(0.1, pi - 0.1);

  for (int trial = 0; trial < 25; ++trial) {
    const double tau = utau(rng), theta = uth(rng);

    // e^T eta e reproduces the metric
    const Eigen::Matrix3d e = bg.vierbein(tau, theta);
    Eigen::Matrix3d eta = Eigen::Matrix3d::Zero();
    eta(0, 0) = 1.0;
    eta(1, 1) = eta(2, 2) = -1.0;
    const Eigen::Matrix3d g = e.transpose() * eta * e;
    REQUIRE((g - bg.metric(tau, theta)).cwiseAbs().maxCoeff() < 1e-12);

    // inverse pair
    const Eigen::Matrix3d id = bg.vierbein_inverse(tau, theta) * e;
    REQUIRE((id - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);

    // closed-form Christoffels against the metric derivative route
    const auto Gc = bg.christoffel(tau, theta);
    const auto Gf = bg.christoffel_fd(tau, theta);
    for (int r = 0; r < 3; ++r)
      REQUIRE((Gc[r] - Gf[r]).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("spin connection general formula matches the closed forms",
          "[geometry]") {
  const GammaSet gs;
  const Background bg{1.0};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> utau(0.2, 3.0);
  std::uniform_real_distribution<double> uth(0.1, pi - 0.1);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double tau = utau(rng), theta = uth(rng);
    const auto a = bg.spin_connection(tau, theta, gs);
    const auto b = bg.spin_connection_closed(tau, theta, gs);
    for (int mu = 0; mu < 3; ++mu)
      worst = std::max(worst, (a[mu] - b[mu]).cwiseAbs().maxCoeff());
  }
  REQUIRE(worst < 1e-10);
}

TEST_CASE("vierbein derivative is the analytic one", "[geometry]") {
  const Background bg{0.9};
  const double tau = 1.1, theta = 0.8, h = 1e-6;
  const auto d = bg.vierbein_derivative(tau, theta);
  const Eigen::Matrix3d dt =
      (bg.vierbein(tau + h, theta) - bg.vierbein(tau - h, theta)) / (2 * h);
  const Eigen::Matrix3d dq =
      (bg.vierbein(tau, theta + h) - bg.vierbein(tau, theta - h)) / (2 * h);
  REQUIRE((d[0] - dt).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE((d[1] - dq).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE(d[2].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate points are rejected", "[geometry]") {
  const Background bg;
  REQUIRE_THROWS_AS(bg.metric(0.0, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(bg.metric(-0.5, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(bg.metric(1.0, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(bg.metric(1.0, pi), std::domain_error);
  const GammaSet gs;
  REQUIRE_THROWS_AS(bg.spin_connection(0.0, 1.0, gs), std::domain_error);
}
