#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dscalar/quadrature.hpp"
#include "dscalar/specfun.hpp"

using namespace dscalar;
using namespace dscalar::quad;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  const Rule r = gauss_legendre(8);
  for (int p = 0; p <= 15; ++p) {
    double s = 0;
    for (int i = 0; i < 8; ++i) s += r.w(i) * std::pow(r.x(i), p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}

TEST_CASE("Gauss-Jacobi weights integrate the weight function") {
  for (auto [a, b] : {std::pair{0.5, -0.5}, std::pair{-0.3, 1.7}, std::pair{-0.9, -0.9}}) {
    const Rule r = gauss_jacobi(20, a, b);
    // int (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    const double exact = std::pow(2.0, a + b + 1) *
                         (specfun::gamma(a + 1) * specfun::gamma(b + 1) / specfun::gamma(a + b + 2)).real();
    CHECK(std::abs(r.w.sum() - exact) < 1e-13 * exact);
    double m1 = 0;
    for (int i = 0; i < 20; ++i) m1 += r.w(i) * r.x(i);
    CHECK(std::abs(m1 - exact * (b - a) / (a + b + 2)) < 1e-13 * exact);
  }
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("mapped rule scales weights") {
  const Rule r = mapped(gauss_legendre(6), 1.0, 4.0);
  CHECK(std::abs(r.w.sum() - 3.0) < 1e-14);
  CHECK(r.x.minCoeff() > 1.0);
  CHECK(r.x.maxCoeff() < 4.0);
}

TEST_CASE("tanh-sinh handles endpoint singularities through the distance argument") {
  // int_0^1 x^{-1/2} dx = 2; the finite abscissa range leaves a tail of order sqrt(x_min)
  const auto f = [](double x, double d) -> std::complex<double> { return 1.0 / std::sqrt(x < 0.5 ? d : x); };
  CHECK(std::abs(tanh_sinh(f, 0.0, 1.0) - 2.0) < 1e-7);
  // int_0^1 log(1-x) dx = -1
  const auto g = [](double x, double d) -> std::complex<double> { return std::log(x > 0.5 ? d : 1.0 - x); };
  CHECK(std::abs(tanh_sinh(g, 0.0, 1.0) + 1.0) < 1e-12);
  const auto h = [](double x, double) -> std::complex<double> { return std::exp(std::complex<double>(0, x)); };
  const std::complex<double> want = (std::exp(std::complex<double>(0, 2.0)) - 1.0) / std::complex<double>(0, 1);
  CHECK(std::abs(tanh_sinh(h, 0.0, 2.0) - want) < 1e-14);
}
