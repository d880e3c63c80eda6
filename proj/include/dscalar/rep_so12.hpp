#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "dscalar/nu.hpp"
#include "dscalar/one_particle.hpp"

namespace dscalar::rep {

// c_k(nu) = Gamma(1/2+i nu)/Gamma(1/2-i nu) * Gamma(|k|+1/2-i nu)/Gamma(|k|+1/2+i nu)
cplx intertwiner_coeff(const NuParameter& nu, int k);

// rho_nu(alpha) = pi Gamma(1/2+i nu)/(Gamma(1/2) Gamma(i nu)) (sin^2(alpha/2))^{-1/2+i nu}
cplx intertwiner_kernel(const NuParameter& nu, double alpha);

// (1/2pi) int rho_nu(alpha) e^{-ik alpha} d alpha for Re(i nu) > 0, with u = sin^2(alpha/2) and an n-point
// Gauss-Jacobi rule carrying u^{i nu - 1} (1-u)^{-1/2}; exact once n > |k|/2
cplx intertwiner_kernel_fourier(const NuParameter& nu, int k, int n = 0);

// <h1, h2>_nu: L2(d alpha/2pi) for the principal series, <h1, A_nu h2> for the complementary series
cplx rep_inner(const NuParameter& nu, const CircleFunction& h1, const CircleFunction& h2);

struct BoostResult {
  CircleFunction h;
  double top_quarter_fraction = 0;
  bool aliasing_warning = false;
};
// u~_nu(Lambda_2(s)) on circle functions: e^{(-1/2 - i nu) t2} h(alpha_2), evaluated on `grid` points and
// projected back to the modes of h
BoostResult boost_action_circle(const NuParameter& nu, double s, const CircleFunction& h, int grid);

// anti-unitary time reflection
CircleFunction time_reflection(const NuParameter& nu, const CircleFunction& h);

struct GeneratorTriple {
  int K = 0;
  Eigen::MatrixXcd K0, L1, L2;
};

// generators on modes -K..K in the omega~-orthonormal basis f_k; L+ f_k = r sqrt(omega~(k) omega~(k+1)) f_{k+1}
GeneratorTriple build_generators(const NuParameter& nu, int K);
// cos(alpha) L1 + sin(alpha) L2
Eigen::MatrixXcd rotated_boost(const GeneratorTriple& g, double alpha);
// the same generator in L2 coefficients: D G D^{-1}, D = diag(sqrt(2 omega~))
Eigen::MatrixXcd to_l2_basis(const Eigen::MatrixXcd& G, const op::DispersionTable& d);

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};
// e^{itG} by scaling and squaring; throws OverflowError when the result exceeds 1e15 in norm
Eigen::MatrixXcd exponentiate_generator(const Eigen::MatrixXcd& G, cplx t);

struct RelationReport {
  double k0_l1 = 0;      // [K0, L1] - i L2
  double k0_l2 = 0;      // [K0, L2] + i L1
  double l1_l2 = 0;      // [L1, L2] + i K0
  double casimir = 0;    // -K0^2 + L1^2 + L2^2 - zeta^2
  double rotation = 0;   // e^{-i a K0} L1 e^{i a K0} - L^(a), over the samples
  double hermitian = 0;  // L1, L2 self-adjoint in the hhat inner product (L2 coefficients, weight 1/(2 omega~))
  double max() const;
};
// commutator and Casimir residuals are taken on interior modes |k| <= K-2
RelationReport group_relation_check(const NuParameter& nu, int K, int samples);

}  // namespace dscalar::rep
