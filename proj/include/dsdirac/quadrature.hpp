#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dsdirac {

//! Adaptive Gauss-Kronrod 15(7) quadrature on a finite interval.
//!
//! Bisection recursion driven by the |GK15 - G7| error estimate. Plenty for
//! the smooth, endpoint-vanishing integrands this project produces
//! (normalization integrals, finite orthogonality weights after the tangent
//! substitution).
namespace gk {

// Kronrod-15 nodes on [-1,1] (symmetric; nonnegative half listed).
inline constexpr double xk[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};

inline constexpr double wk[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589695};

// Gauss-7 weights; the embedded G7 rule uses the even-index nodes above.
inline constexpr double wg[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820};

struct Estimate {
  double value;
  double error;
};

template <class F>
Estimate gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double resk = wk[0] * f0;
  double resg = wg[0] * f0;
  for (int j = 1; j < 8; ++j) {
    const double f1 = f(c - h * xk[j]);
    const double f2 = f(c + h * xk[j]);
    resk += wk[j] * (f1 + f2);
    if (j % 2 == 0) resg += wg[j / 2] * (f1 + f2);
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

}  // namespace gk

//! Integrate f over [a,b] to absolute tolerance abstol.
//! Throws std::runtime_error if the recursion depth limit is hit before the
//! local error estimates are under control.
template <class F>
double integrate(const F& f, double a, double b, double abstol = 1e-12,
                 int max_depth = 48) {
  struct Rec {
    static double go(const F& f, double a, double b, double tol, int depth) {
      const auto e = gk::gk15(f, a, b);
      if (e.error <= tol || e.error <= 1e-16 * std::abs(e.value)) return e.value;
      if (depth <= 0)
        throw std::runtime_error("integrate: recursion depth exhausted");
      const double c = 0.5 * (a + b);
      return go(f, a, c, 0.5 * tol, depth - 1) +
             go(f, c, b, 0.5 * tol, depth - 1);
    }
  };
  return Rec::go(f, a, b, abstol, max_depth);
}

}  // namespace dsdirac
