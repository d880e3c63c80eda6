#include "dscalar/nu.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dscalar {

NuParameter NuParameter::from_mass(double mu, double r) {
  if (!(mu > 0.0) || !(r > 0.0)) throw std::invalid_argument("NuParameter: mu and r must be positive");
  NuParameter p;
  p.mu = mu;
  p.r = r;
  const double z2 = mu * mu * r * r;
  if (z2 >= 0.25) {
    p.nu = std::sqrt(z2 - 0.25);
    p.series = Series::principal;
  } else {
    p.nu = cplx(0.0, std::sqrt(0.25 - z2));
    p.series = Series::complementary;
  }
  return p;
}

NuParameter NuParameter::with_nu(double r, cplx nu) {
  NuParameter p;
  p.r = r;
  p.nu = nu;
  const cplx z2 = 0.25 + nu * nu;
  p.mu = std::sqrt(std::abs(z2.real())) / r;
  p.series = std::abs(nu.imag()) > 0.0 && nu.real() == 0.0 ? Series::complementary : Series::principal;
  return p;
}

cplx NuParameter::c_nu() const {
  return 1.0 / (2.0 * std::cos(cplx(0, 1) * nu * std::numbers::pi));
}

std::string NuParameter::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "mu=" << mu << " r=" << r << " nu=(" << nu.real() << "," << nu.imag() << ") "
     << (series == Series::principal ? "principal" : "complementary");
  return os.str();
}

cplx CircleFunction::eval(double psi) const {
  cplx acc = 0.0;
  for (int k = -K; k <= K; ++k) acc += coeffs(k + K) * std::exp(cplx(0, k * psi));
  return acc / std::sqrt(2.0 * std::numbers::pi * r);
}

bool CircleFunction::is_real(double tol) const {
  double scale = coeffs.cwiseAbs().maxCoeff();
  for (int k = 1; k <= K; ++k)
    if (std::abs(coeffs(K + k) - std::conj(coeffs(K - k))) > tol * std::max(scale, 1e-300)) return false;
  return std::abs(coeffs(K).imag()) <= tol * std::max(scale, 1e-300);
}

CircleFunction CircleFunction::sample(const std::function<cplx(double)>& f, int K, double r, int Q) {
  if (Q <= 0) Q = std::max(8 * K, 1024);
  CircleFunction h(K, r);
  std::vector<cplx> v(Q);
  const double d = 2.0 * std::numbers::pi / Q;
  for (int j = 0; j < Q; ++j) v[j] = f(-std::numbers::pi + j * d);
  const double scale = std::sqrt(r / (2.0 * std::numbers::pi)) * d;
  for (int k = -K; k <= K; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < Q; ++j) acc += v[j] * std::exp(cplx(0, -k * (-std::numbers::pi + j * d)));
    h[k] = scale * acc;
  }
  return h;
}

CircleFunction CircleFunction::mode(int k, int K, double r) {
  CircleFunction h(K, r);
  h[k] = 1.0;
  return h;
}

}  // namespace dscalar
