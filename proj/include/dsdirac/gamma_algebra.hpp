#pragma once

#include <Eigen/Dense>
#include <array>

#include "dsdirac/common.hpp"

namespace dsdirac {

using Mat2 = Eigen::Matrix2cd;

//! Flat gamma matrices for signature (+,-,-) built on the Pauli triple:
//! gamma^0 = sigma3, gamma^1 = i sigma1, gamma^2 = i sigma2.
//! Entries are exact complex integers, so the Clifford relation
//! {gamma^a, gamma^b} = 2 eta^{ab} I holds without rounding.
struct GammaSet {
  std::array<Mat2, 3> gamma;
  std::array<double, 3> eta_diag{1.0, -1.0, -1.0};

  GammaSet() {
    Mat2 s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, cplx(0, -1), cplx(0, 1), 0;
    s3 << 1, 0, 0, -1;
    gamma[0] = s3;
    gamma[1] = iu * s1;
    gamma[2] = iu * s2;
  }

  //! Max |{gamma^a, gamma^b} - 2 eta^{ab} I| over all index pairs.
  //! Exactly zero for this representation.
  double anticommutator_defect() const {
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Mat2 ac = gamma[a] * gamma[b] + gamma[b] * gamma[a];
        const double target = (a == b) ? 2.0 * eta_diag[a] : 0.0;
        ac -= target * Mat2::Identity();
        worst = std::max(worst, ac.cwiseAbs().maxCoeff());
      }
    return worst;
  }

  //! Max deviation of gamma^{a,dagger} from the actual adjoint relation of
  //! this representation: gamma^0 Hermitian, gamma^{1,2} anti-Hermitian.
  double adjoint_defect() const {
    double worst = (gamma[0].adjoint() - gamma[0]).cwiseAbs().maxCoeff();
    for (int a : {1, 2})
      worst = std::max(worst,
                       (gamma[a].adjoint() + gamma[a]).cwiseAbs().maxCoeff());
    return worst;
  }
};

//! Trace coefficient of X along a basis direction G with tr(G G) = 2:
//! X = sum_G coeff(G) * G for the orthogonal set {I, sigma1, sigma2, sigma3}.
inline cplx pauli_coefficient(const Mat2& G, const Mat2& X) {
  return (G * X).trace() / 2.0;
}

}  // namespace dsdirac
