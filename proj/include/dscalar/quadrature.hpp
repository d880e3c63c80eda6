#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace dscalar::quad {

struct Rule {
  Eigen::VectorXd x, w;
};

// nodes/weights on [-1,1] for the weight (1-x)^alpha (1+x)^beta, alpha, beta > -1
Rule gauss_jacobi(int n, double alpha, double beta);
inline Rule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// rule mapped affinely to [a,b] (weights scaled, weight function not rescaled)
Rule mapped(const Rule& r, double a, double b);

// double-exponential rule on [a,b]; f receives the abscissa and its distance to the
// nearer endpoint, so singular endpoints can be evaluated without cancellation
std::complex<double> tanh_sinh(const std::function<std::complex<double>(double, double)>& f, double a,
                               double b, int level = 7);

}  // namespace dscalar::quad
