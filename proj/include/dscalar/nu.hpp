#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>

#include "dscalar/specfun.hpp"

namespace dscalar {

enum class Series { principal, complementary };

struct NuParameter {
  double mu = 1.0;
  double r = 1.0;
  cplx nu;
  Series series = Series::principal;

  // nu from mu*r: sqrt(mu^2 r^2 - 1/4) (principal) or i sqrt(1/4 - mu^2 r^2) (complementary)
  static NuParameter from_mass(double mu, double r);
  // arbitrary complex nu, bypassing the unitarity constraints (kernel tests, analytic continuation)
  static NuParameter with_nu(double r, cplx nu);

  cplx s_plus() const { return -0.5 - cplx(0, 1) * nu; }
  cplx s_minus() const { return -0.5 + cplx(0, 1) * nu; }
  double zeta2() const { return (0.25 + nu * nu).real(); }
  // 1/(2 cos(i nu pi))
  cplx c_nu() const;
  std::string describe() const;
};

enum class CoeffNorm { L2, h_hat };

// Fourier coefficients on modes -K..K; in the L2 convention
// h(psi) = sum_k coeffs(k+K) e^{ik psi} / sqrt(2 pi r)
struct CircleFunction {
  int K = 0;
  double r = 1.0;
  Eigen::VectorXcd coeffs;
  CoeffNorm norm = CoeffNorm::L2;

  CircleFunction() = default;
  CircleFunction(int K_, double r_) : K(K_), r(r_), coeffs(Eigen::VectorXcd::Zero(2 * K_ + 1)) {}

  cplx& operator[](int k) { return coeffs(k + K); }
  cplx operator[](int k) const { return (k < -K || k > K) ? cplx(0) : coeffs(k + K); }

  cplx eval(double psi) const;
  bool is_real(double tol = 1e-12) const;
  // modes -K..K of a function given pointwise, by the Q-point periodic trapezoid rule
  static CircleFunction sample(const std::function<cplx(double)>& f, int K, double r, int Q = 0);
  static CircleFunction mode(int k, int K, double r);
};

using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;

// dense or sparse operator with a tag of the basis it acts on
struct OperatorMatrix {
  std::string basis;
  Eigen::MatrixXcd dense;
  SpMat sparse;
  bool is_sparse = false;
};

}  // namespace dscalar
