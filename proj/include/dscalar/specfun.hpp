#pragma once

#include <complex>
#include <stdexcept>

namespace dscalar {

using cplx = std::complex<double>;

struct pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace specfun {

struct Tolerances {
  double pole = 1e-14;
  int max_terms = 200000;
};

cplx gamma(cplx z, const Tolerances& tol = {});
// 1/Gamma, entire; exactly zero at the poles of Gamma
cplx rgamma(cplx z);
cplx lgamma(cplx z);
cplx digamma(cplx z);

// Gamma(x+a)/Gamma(x+b), accurate also when x is large and the Gammas overflow
cplx gamma_ratio(cplx x, cplx a, cplx b);

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const Tolerances& tol = {});

enum class Branch { principal, upper, lower };

struct EvalPoint {
  cplx z;
  Branch branch = Branch::principal;
};

cplx legendre_p(cplx s, EvalPoint p);
cplx legendre_p_prime(cplx s, EvalPoint p);
inline cplx legendre_p(cplx s, cplx z) { return legendre_p(s, EvalPoint{z}); }
inline cplx legendre_p_prime(cplx s, cplx z) { return legendre_p_prime(s, EvalPoint{z}); }

// P_s(2 x2 - 1) with x2 = (1+z)/2 supplied directly, so that z near -1 keeps full relative accuracy
cplx legendre_p_x2(cplx s, cplx x2);
// P'_s(2 x2 - 1) - (sin(pi s)/pi) / (2 x2): derivative with its non-integrable part removed
cplx legendre_p_prime_remainder(cplx s, cplx x2);

// Ferrers-type P_s^k(z) = Gamma(s+k+1)/Gamma(s-k+1) (z^2-1)^{k/2} F(k-s,k+s+1;k+1;(1-z)/2) / (2^k k!),
// with (z^2-1)^{1/2} principal; requires |1-z| < 2
cplx assoc_legendre(cplx s, int k, cplx z);

// lim_{eps->0+} P_s^k(eps(1 +- i))
cplx assoc_legendre_boundary(cplx s, int k, int sign);

}  // namespace specfun
}  // namespace dscalar
