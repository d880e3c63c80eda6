#include "dscalar/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dscalar::quad {

Rule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be positive");
  if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double d = 2.0 * k + ab;
    J(k, k) = k == 0 ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (d * (d + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double dm = 2.0 * m + ab;
      const double b2 = k == 0 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / (dm * dm * (dm + 1.0))
                               : 4.0 * m * (m + alpha) * (m + beta) * (m + ab) /
                                     (dm * dm * (dm + 1.0) * (dm - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                                          std::lgamma(ab + 2.0));
  Rule r;
  r.x = es.eigenvalues();
  r.w = mu0 * es.eigenvectors().row(0).array().square().transpose();
  return r;
}

Rule mapped(const Rule& r, double a, double b) {
  Rule out;
  out.x = (0.5 * (b - a)) * (r.x.array() + 1.0) + a;
  out.w = 0.5 * (b - a) * r.w;
  return out;
}

std::complex<double> tanh_sinh(const std::function<std::complex<double>(double, double)>& f, double a,
                               double b, int level) {
  const double h = std::ldexp(1.0, -level);
  const double half = 0.5 * (b - a);
  const double hp = 0.5 * std::numbers::pi;
  std::complex<double> sum = 0.0;
  const int nmax = int(std::ceil(3.2 / h));
  for (int j = -nmax; j <= nmax; ++j) {
    const double t = j * h;
    const double u = hp * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = hp * std::cosh(t) / (ch * ch);
    // distance of the node to the nearer endpoint, computed without cancellation
    const double comp = half * 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
    if (comp <= 0.0) continue;
    const double x = t < 0 ? a + comp : b - comp;
    sum += half * w * f(x, comp);
  }
  return h * sum;
}

}  // namespace dscalar::quad
