#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dscalar/classical_kg.hpp"
#include "dscalar/nu.hpp"

namespace dscalar::op {

// omega~(k) = (k+s)/r * Gamma((k+s)/2)/Gamma((k-s)/2) * Gamma((k+1-s)/2)/Gamma((k+1+s)/2), s = s+, k -> |k|
double omega_tilde(const NuParameter& nu, int k);

struct DispersionTable {
  NuParameter nu;
  int K = 0;
  Eigen::VectorXd omega;  // omega~(-K..K)
  double operator()(int k) const { return omega(k + K); }
};

DispersionTable dispersion(const NuParameter& nu, int K);

// Fourier coefficients of P_{s+}(-cos psi) = sum_k p(k) e^{ik psi}
double legendre_fourier_coeff(const NuParameter& nu, int k);

// (1/2pi) int P_{s+}(-cos psi) e^{-ik psi} dpsi by a Q-point periodic rule. The nodes are graded
// towards the logarithmic singularity at psi = 0 by a sin^6 change of variables.
double legendre_fourier_quadrature(const NuParameter& nu, int k, int Q = 4096);
// finite-part Fourier coefficient of P'_{s+}(-cos psi); the 1/(2 sin^2(psi/2)) pole is removed
// analytically and the logarithmic remainder is integrated as above
double legendre_prime_fourier_quadrature(const NuParameter& nu, int k, int Q = 4096);

// weight in front of the double integrals c_nu r^2 int int dpsi dpsi' ... that reproduces the
// mode-sum inner product; fixed on the k = 0 mode
constexpr double kernel_constant = 0.5;

cplx hhat_inner(const CircleFunction& h1, const CircleFunction& h2, const DispersionTable& d);
cplx hhat_inner(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu);

// kernel_constant * c_nu r^2 int int conj(h1(psi)) P_{s+}(-cos(psi - psi')) h2(psi') dpsi dpsi' by direct
// double quadrature: uniform outer rule in psi', graded inner rule in psi - psi'
cplx hhat_inner_kernel(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu,
                       int Q_outer = 256, int Q_inner = 1024);
// the same with the derivative kernel P'_{s+}(-cos(psi - psi')) in finite-part sense
cplx derivative_kernel_form(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu,
                            int Q_outer = 256, int Q_inner = 1024);

// change of coordinates between L2 coefficients h_k and the omega~-orthonormal basis f_k
Eigen::VectorXcd to_hhat_basis(const CircleFunction& h, const DispersionTable& d);
CircleFunction from_hhat_basis(const Eigen::VectorXcd& b, const DispersionTable& d);

// multiplication by cos psi in L2 coefficients: 1/2 on k <-> k+-1
Eigen::MatrixXd cos_matrix(int K);
// omega r cos on hhat in the f_k basis: (r/2) sqrt(omega~(k) omega~(k+1)) on the off-diagonals
Eigen::MatrixXd boost_generator_hhat(const DispersionTable& d);

// <h1, exp(-theta omega r cos) h2>_hhat with the truncated tridiagonal generator
cplx time_shift_covariance(const CircleFunction& h1, const CircleFunction& h2, double theta,
                           const NuParameter& nu);
// the same through eps on the wedge grid:
// r^2 int du (cos psi f1) cosh((pi-theta)|eps|)/(2|eps| sinh(pi|eps|)) (cos psi f2), f1, f2 supported in I+
double time_shift_covariance_eps(const kg::EpsilonOperator& eps, const std::function<double(double)>& f1,
                                 const std::function<double(double)>& f2, double theta);

struct MagicReport {
  double deviation = 0;         // max_{k,l} |<e_l, W e_k> - omega~(k) delta_kl| / omega~(l)
  double parity_residual = 0;   // ||P1 W P1 - W|| / ||W|| on the grid
  double smallest_eps = 0;
};
// W = |r cos|^{-1} |eps| (coth(pi|eps|) - P1/sinh(pi|eps|)) built on the M-point wedge grid
MagicReport magic_formula_check(const NuParameter& nu, int M, int Kcmp);

struct SharpTimeReport {
  double hhat_norm2 = 0;   // ||h1 + i omega r h2||^2_hhat
  double covariant = 0;    // kernel_constant c_nu r^2 int int (h1 P h1 + h2 P' h2)
};
SharpTimeReport sharp_time_embed(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu,
                                 int Q_outer = 256, int Q_inner = 1024);

struct KmsReport {
  double defect = 0;
  double rhs_abs = 0;
  double lambda_min = 0, lambda_max = 0;
  bool overflow = false;
};
// |<f, e^{i(t+2 pi i)A} g> - <e^{itA} g, f>|, A = omega r cos truncated to modes -K..K
KmsReport one_particle_kms(const NuParameter& nu, int K, double t, const CircleFunction& f,
                           const CircleFunction& g);

// functions on the sphere of radius r, in polar angle theta (from the north pole) and azimuth phi
using SphereFunction = std::function<double(double, double)>;

struct SphereReport {
  double mode_sum = 0;      // <f, (-Delta + mu^2)^{-1} g> on L2(S^2_r, dA)
  double kernel_form = 0;   // int int dA dA' f (c_nu/2) P_{s+}(-x.y/r^2) g, by Funk-Hecke
  double tail_fraction = 0; // share of the mode sum carried by l > Lmax/2
};
SphereReport sphere_covariance(const SphereFunction& f, const SphereFunction& g, const NuParameter& nu,
                               int Lmax);

// <delta x h, delta x h>_{H^-1}: h placed on the equator theta = pi/2, through the spherical harmonic
// sum with l up to L and a Richardson step on the 1/L tail
double time_zero_restriction(const CircleFunction& h, const NuParameter& nu, int L = 100000);

}  // namespace dscalar::op
