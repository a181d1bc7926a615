#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "dsdirac/romanovski.hpp"

using namespace dsdirac;
using boost::multiprecision::cpp_rational;

TEST_CASE("degree three polynomial in closed form", "[romanovski]") {
  // hand recurrence at (a, b) = (-2, -4): R_3 = x^3 + (3/2) x^2 - 1/6
  const RomanovskiPoly r = romanovski_poly(3, -2.0, -4.0);
  REQUIRE(r.coeffs.size() == 4);
  REQUIRE(r.coeffs[3] == 1.0);
  REQUIRE(r.coeffs[2] == Catch::Approx(1.5).margin(1e-15));
  REQUIRE(r.coeffs[1] == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(r.coeffs[0] == Catch::Approx(-1.0 / 6.0).margin(1e-15));
  REQUIRE(r.eigen_term() == Catch::Approx(3.0 * (3.0 - 1.0 - 8.0)));

  // evaluation and derivatives at a point
  const double x = 0.7;
  REQUIRE(r(x) == Catch::Approx(x * x * x + 1.5 * x * x - 1.0 / 6.0));
  REQUIRE(r.derivative(x) == Catch::Approx(3.0 * x * x + 3.0 * x));
  REQUIRE(r.second_derivative(x) == Catch::Approx(6.0 * x + 3.0));
}

TEST_CASE("recurrence flags the degenerate degree", "[romanovski]") {
  // at (a, b) = (-2, -4) the degree five recurrence divides by zero at
  // index four
  try {
    romanovski_coefficients<double>(5, -2.0, -4.0);
    FAIL("expected DegeneracyError");
  } catch (const DegeneracyError& e) {
    REQUIRE(e.k == 4);
  }
  REQUIRE_NOTHROW(romanovski_coefficients<double>(4, -2.0, -4.0));
}

TEST_CASE("exact arithmetic residuals vanish identically", "[romanovski]") {
  // rational parameter b = -22/7 keeps 1 - 2b away from the integers, so
  // every degree through eight is regular and the recurrence output can
  // be pushed back through the differential equation without rounding
  const cpp_rational a(-2), b(-22, 7);
  for (int nubar = 0; nubar <= 8; ++nubar) {
    const std::vector<cpp_rational> c =
        romanovski_coefficients<cpp_rational>(nubar, a, b);
    REQUIRE(static_cast<int>(c.size()) == nubar + 1);
    REQUIRE(c[nubar] == 1);
    const std::vector<cpp_rational> res = romanovski_ode_residual(c, a, b);
    for (const cpp_rational& v : res) REQUIRE(v == 0);
  }
}

TEST_CASE("weight normalization", "[romanovski]") {
  // degree zero at b = -4: integral of (1+z^2)^{-5} over the line
  const double exact = 35.0 * pi / 128.0;
  REQUIRE(std::abs(orthogonality_integral(0, 0, 0.0, -4.0) - exact) < 1e-10);
}

TEST_CASE("finite orthogonality of the low degrees", "[romanovski]") {
  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = n1; n2 <= 4; ++n2) {
      const double I = orthogonality_integral(n1, n2, -2.0, -4.0);
      if (n1 == n2)
        REQUIRE(I > 0.0);
      else
        REQUIRE(std::abs(I) < 1e-8);
    }
  }
}

TEST_CASE("divergent pairings are refused", "[romanovski]") {
  // convergence needs nu1 + nu2 + 2(b-1) < -1
  REQUIRE_THROWS_AS(orthogonality_integral(4, 4, -2.0, -22.0 / 7.0),
                    DivergenceError);
  REQUIRE_THROWS_AS(orthogonality_integral(0, 0, 0.0, 0.75), DivergenceError);
}

TEST_CASE("model constants at unit mass", "[constants]") {
  const ModelConstants c = model_constants(1.0, +1);
  REQUIRE(c.a1 == Catch::Approx(6.4031242374328485).epsilon(1e-14));
  REQUIRE(c.A == Catch::Approx(0.6938972023080989).epsilon(1e-12));
  REQUIRE(c.B == Catch::Approx(0.4187965253904407).epsilon(1e-12));
  REQUIRE(c.a == Catch::Approx(-2.0 * c.B).epsilon(1e-14));
  REQUIRE(c.b == Catch::Approx(0.5 - c.A).epsilon(1e-14));
}

TEST_CASE("constants satisfy their defining identities", "[constants]") {
  for (double ellM : {0.3, 1.0, 2.5}) {
    for (int eps : {-1, +1}) {
      const ModelConstants c = model_constants(ellM, eps);
      const ConstantsIdentityResiduals r = constants_identity_residuals(c);
      REQUIRE(r.linear < 1e-12);
      REQUIRE(r.quadratic < 1e-12);
      const double x = ellM * ellM;
      REQUIRE(c.a1 >= 1.0 + 4.0 * x);
    }
  }
  REQUIRE_THROWS_AS(model_constants(0.0, +1), std::invalid_argument);
  REQUIRE_THROWS_AS(model_constants(1.0, 0), std::invalid_argument);
}

TEST_CASE("plus branch collapses to the short form", "[constants]") {
  for (double ellM : {0.4, 1.0, 3.0}) {
    const ModelConstants c = model_constants(ellM, +1);
    const double x = ellM * ellM;
    const double shortA =
        0.5 * (-1.0 + std::sqrt(0.5 * (1.0 + c.a1 + 4.0 * x)));
    REQUIRE(c.A == Catch::Approx(shortA).epsilon(1e-12));
  }
}

TEST_CASE("eigencondition roots", "[constants]") {
  const ModelConstants c = model_constants(1.0, +1);
  const double w2 = (c.A - 2.0) * (c.A - 2.0);
  const EigenconditionRoots r = eigencondition(c.A, w2);
  REQUIRE(r.roots.size() == 2);
  REQUIRE(std::abs(r.roots[0] - (2.0 * c.A - 2.0)) < 1e-12);
  REQUIRE(std::abs(r.roots[1] - 2.0) < 1e-12);
  REQUIRE(r.quantizable == std::vector<int>{2});

  const EigenconditionRoots zero = eigencondition(1.0, 0.0);
  REQUIRE(zero.roots.size() == 1);
  REQUIRE(zero.quantizable == std::vector<int>{1});

  REQUIRE(eigencondition(1.0, -0.5).roots.empty());
}

TEST_CASE("frequency map inverts on both branches", "[constants]") {
  for (double ellM : {0.3, 1.0, 2.5}) {
    for (int eps : {-1, +1}) {
      const double nu = nu_of_ellM(ellM, eps);
      const double back = ellM_from_nu(nu, eps);
      REQUIRE(std::abs(back - ellM) < 1e-10);
    }
  }
  REQUIRE_THROWS_AS(ellM_from_nu(1e9, +1), std::domain_error);
}

TEST_CASE("quantum consistency solves for the azimuthal number",
          "[constants]") {
  const ModelConstants c = model_constants(1.0, +1);
  const QuantumConsistencyReport r1 =
      quantum_consistency(-0.75, 1.0, nu_of_ellM(1.0, +1), c);
  REQUIRE(r1.m_solved == Catch::Approx(-0.75).margin(1e-14));
  REQUIRE(r1.res_half < 1e-12);
  REQUIRE(r1.nu_roundtrip_err < 1e-10);

  const QuantumConsistencyReport r2 =
      quantum_consistency(-1.375, 2.0, nu_of_ellM(1.0, +1), c);
  REQUIRE(r2.m_solved == Catch::Approx(-1.375).margin(1e-14));
  REQUIRE(r2.res_half < 1e-12);

  REQUIRE_THROWS_AS(quantum_consistency(1.0, 0.0, 1.0, c),
                    std::invalid_argument);
}

TEST_CASE("time solution satisfies its z-space equation", "[timepart]") {
  const ModelConstants c = model_constants(1.0, +1);
  for (int nubar = 0; nubar <= 3; ++nubar) {
    const TimeSolution s = time_solution(2, nubar, c);
    for (int i = 0; i <= 100; ++i) {
      const double z = -10.0 + 0.2 * i;
      REQUIRE(std::abs(temporal_ode_residual(s, z)) < 1e-8);
    }
  }
}

TEST_CASE("branch product is real on the line", "[timepart]") {
  const ModelConstants c = model_constants(1.0, +1);
  const TimeSolution s = time_solution(2, 2, c);
  for (double z : {-5.0, -1.0, 0.0, 0.3, 4.0}) {
    const cplx w = s.branch_complex(z);
    REQUIRE(std::abs(w.imag()) < 1e-14);
    REQUIRE(std::abs(w.real() - s.branch(z)) < 1e-12);
  }
}

TEST_CASE("peeling the branch factor leaves a polynomial solution",
          "[timepart]") {
  const ModelConstants c = model_constants(1.0, +1);
  for (int nubar = 0; nubar <= 3; ++nubar) {
    const TimeSolution s = time_solution(2, nubar, c);
    for (double z : {-3.0, -1.0, 0.5, 2.0})
      REQUIRE(transform_chain_residual(s, z) < 1e-8);
  }
}

TEST_CASE("analytic branch derivatives", "[timepart]") {
  const ModelConstants c = model_constants(1.0, +1);
  const TimeSolution s = time_solution(2, 1, c);
  const double h = 1e-4;
  for (double z : {-2.0, 0.4, 3.0}) {
    auto lb = [&](double t) { return std::log(s.branch(t)); };
    const double d1 = (lb(z + h) - lb(z - h)) / (2 * h);
    REQUIRE(std::abs(s.branch_log_d1(z) - d1) < 1e-8);
    // branch_log_d2 + branch_log_d1^2 reassembles f''/f
    const double fd2 =
        (s.branch(z + h) - 2.0 * s.branch(z) + s.branch(z - h)) / (h * h);
    REQUIRE(std::abs(fd2 / s.branch(z) -
                     (s.branch_log_d2(z) +
                      s.branch_log_d1(z) * s.branch_log_d1(z))) < 1e-6);
  }
}

TEST_CASE("tau maps and their domains", "[timepart]") {
  const ModelConstants c = model_constants(1.0, +1);
  const TimeSolution trig = time_solution(2, 1, c, TauMap::trig_cot);
  const TimeSolution hyper = time_solution(2, 1, c, TauMap::hyper_coth);

  REQUIRE(trig.map_covers_real_line());
  REQUIRE_FALSE(hyper.map_covers_real_line());

  REQUIRE(trig.z_of_tau(pi / 4.0) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(hyper.z_of_tau(1.0) ==
          Catch::Approx(std::cosh(1.0) / std::sinh(1.0)).margin(1e-14));
  REQUIRE(hyper.z_of_tau(5.0) > 1.0);

  REQUIRE_THROWS_AS(trig.z_of_tau(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(trig.z_of_tau(pi), std::domain_error);
  REQUIRE_THROWS_AS(hyper.z_of_tau(0.0), std::domain_error);

  // T evaluator composes prefactor and map
  const double tau = 1.2;
  REQUIRE(trig.T_of_tau(tau) ==
          Catch::Approx(std::pow(1.0 / std::sinh(tau), 1.5) *
                        trig.y(trig.z_of_tau(tau))));
}

TEST_CASE("component sign pairing is enforced", "[timepart]") {
  const ModelConstants plus = model_constants(1.0, +1);
  const ModelConstants minus = model_constants(1.0, -1);
  REQUIRE_NOTHROW(time_solution(2, 1, plus));
  REQUIRE_NOTHROW(time_solution(1, 1, minus));
  REQUIRE_THROWS_AS(time_solution(1, 1, plus), std::invalid_argument);
  REQUIRE_THROWS_AS(time_solution(2, 1, minus), std::invalid_argument);
  REQUIRE_THROWS_AS(time_solution(3, 1, plus), std::invalid_argument);
}

TEST_CASE("trig composition solves the continued equation", "[timepart]") {
  // y(cot tau) satisfies -y'' + (-1/4 - (lM)^2 + lM eps cot tau
  //                             + (w^2 - 1/4) csc^2 tau) y = 0 in tau;
  // the sin^{1/2} hidden in y removes the first derivative term.
  const ModelConstants c = model_constants(1.0, +1);
  const TimeSolution s = time_solution(2, 2, c, TauMap::trig_cot);
  auto f = [&](double tau) { return s.y(s.z_of_tau(tau)); };
  const double h = 1e-3;
  double worst = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double tau = 0.4 + (pi - 0.8) * i / 41.0;
    const double d2 = (-f(tau + 2 * h) + 16.0 * f(tau + h) - 30.0 * f(tau) +
                       16.0 * f(tau - h) - f(tau - 2 * h)) /
                      (12.0 * h * h);
    const double csc = 1.0 / std::sin(tau);
    const double cot = std::cos(tau) * csc;
    const double x = c.ellM * c.ellM;
    const double pot = -0.25 - x + c.ellM * c.eps * cot +
                       (s.omega2() - 0.25) * csc * csc;
    worst = std::max(worst, std::abs(-d2 + pot * f(tau)));
  }
  REQUIRE(worst < 1e-6);
}
