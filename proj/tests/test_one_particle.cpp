#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "dscalar/classical_kg.hpp"
#include "dscalar/one_particle.hpp"

using namespace dscalar;
using namespace dscalar::op;

namespace {
constexpr double pi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
CircleFunction smooth(int K, double r, double c) {
  return CircleFunction::sample([c](double p) { return cplx(std::exp(std::cos(p - c)), 0.0); }, K, r);
}
}  // namespace

// oracles frozen from mpmath: the Gamma-ratio formula at 25 digits, and direct quadrature of P_{s+}(-cos psi)
TEST_CASE("omega~ against high-precision Gamma ratios") {
  const NuParameter n1 = NuParameter::from_mass(1.0, 1.0), n3 = NuParameter::from_mass(0.3, 1.0);
  CHECK(rel(omega_tilde(n1, 0), 0.7394628242670489594) < 1e-13);
  CHECK(rel(omega_tilde(n1, 1), 1.352333027682891158) < 1e-13);
  CHECK(rel(omega_tilde(n1, -7), 7.070386325875562457) < 1e-13);
  CHECK(rel(omega_tilde(n3, 0), 0.08700240868988695759) < 1e-13);
  CHECK(rel(omega_tilde(n3, 2), 2.020389268465152825) < 1e-13);
  CHECK(rel(omega_tilde(NuParameter::from_mass(2.5 / 1.7, 1.7), 3), 2.282683543430906473) < 1e-13);
}

TEST_CASE("Legendre Fourier coefficients against direct quadrature") {
  const NuParameter n1 = NuParameter::from_mass(1.0, 1.0), n3 = NuParameter::from_mass(0.3, 1.0);
  CHECK(rel(legendre_fourier_coeff(n1, 0), 3.2837212533377494333) < 1e-12);
  CHECK(rel(legendre_fourier_coeff(n1, 2), 1.0945737511125792106) < 1e-12);
  CHECK(rel(legendre_fourier_coeff(n3, 0), 1.1305797826696281615) < 1e-12);
  CHECK(rel(legendre_fourier_coeff(n3, -2), 0.048685253799170326291) < 1e-12);
  CHECK(rel(legendre_fourier_quadrature(n1, 2), 1.0945737511125792106) < 1e-10);
}

TEST_CASE("property: dispersion identities for random masses and radii") {
  for (double mr : {0.05, 0.3, 0.49, 0.5, 0.8, 1.0, 2.5, 7.0})
    for (double r : {0.6, 1.0, 2.3}) {
      const NuParameter nu = NuParameter::from_mass(mr / r, r);
      const DispersionTable d = dispersion(nu, 65);
      for (int k = -64; k <= 64; ++k) {
        CHECK(std::abs(r * r * d(k) * d(k + 1) - (k * (k + 1.0) + mr * mr)) <= 1e-12 * (k * k + 1.0 + mr * mr));
        CHECK(d(k) == d(-k));
        CHECK(d(k) > 0);
        if (k >= 0) CHECK(d(k + 1) > d(k));
      }
      CHECK(std::abs(d(64) * r / std::sqrt(64.0 * 64 + mr * mr) - 1.0) < 1e-3);
    }
}

TEST_CASE("omega~ from p(k) at r != 1") {
  const NuParameter nu = NuParameter::from_mass(1.0 / 1.7, 1.7);
  const double sinps = std::sin(pi * nu.s_plus()).real();
  for (int k = 0; k <= 10; ++k)
    CHECK(rel(-sinps / (pi * nu.r * legendre_fourier_coeff(nu, k)), omega_tilde(nu, k)) < 1e-12);
}

TEST_CASE("cos multiplication and the boost generator") {
  const Eigen::MatrixXd C = cos_matrix(4);
  CHECK(C.rows() == 9);
  CHECK(C(0, 1) == 0.5);
  CHECK(C(1, 0) == 0.5);
  CHECK(C(0, 0) == 0.0);
  CHECK(C(0, 2) == 0.0);
  const NuParameter nu = NuParameter::from_mass(1.0, 1.3);
  const DispersionTable d = dispersion(nu, 6);
  const Eigen::MatrixXd B = boost_generator_hhat(d);
  CHECK((B - B.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(B(6, 7) - 0.5 * nu.r * std::sqrt(d(0) * d(1))) < 1e-15);
}

TEST_CASE("hhat basis round trip and inner product") {
  const NuParameter nu = NuParameter::from_mass(0.3, 1.0);
  const DispersionTable d = dispersion(nu, 8);
  const CircleFunction h = smooth(8, 1.0, 0.2);
  const CircleFunction back = from_hhat_basis(to_hhat_basis(h, d), d);
  CHECK((back.coeffs - h.coeffs).norm() < 1e-14 * h.coeffs.norm());
  // <h, h>_hhat = sum |h_k|^2 / (2 omega~(k))
  double want = 0;
  for (int k = -8; k <= 8; ++k) want += std::norm(h[k]) / (2.0 * d(k));
  CHECK(rel(hhat_inner(h, h, d), cplx(want)) < 1e-14);
}

TEST_CASE("kernel double integral reproduces the mode sum") {
  for (double mr : {0.3, 1.0})
    for (double r : {1.0, 1.7}) {
      const NuParameter nu = NuParameter::from_mass(mr / r, r);
      const CircleFunction h1 = smooth(12, r, 0.4), h2 = smooth(12, r, -1.0);
      CHECK(rel(hhat_inner_kernel(h1, h2, nu), hhat_inner(h1, h2, nu)) < 1e-8);
      const SharpTimeReport st = sharp_time_embed(h1, h2, nu);
      CHECK(std::abs(st.hhat_norm2 - st.covariant) < 1e-8 * st.hhat_norm2);
    }
}

TEST_CASE("sharp-time data with h1 = 0 gives r^2 |omega h2|^2") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const CircleFunction h2 = smooth(12, 1.0, 0.7);
  const DispersionTable d = dispersion(nu, 12);
  CircleFunction wh(12, 1.0);
  for (int k = -12; k <= 12; ++k) wh[k] = d(k) * h2[k];
  const SharpTimeReport st = sharp_time_embed(CircleFunction(12, 1.0), h2, nu);
  CHECK(std::abs(st.covariant - hhat_inner(wh, wh, d).real()) < 1e-8 * st.covariant);
}

TEST_CASE("time-shift covariance at theta = 0 is the inner product and decreases in theta") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const CircleFunction h = CircleFunction::sample([](double p) { return cplx(kg::bump(p, 0.2, 0.9), 0.0); }, 32, 1.0);
  CHECK(rel(time_shift_covariance(h, h, 0.0, nu), hhat_inner(h, h, nu)) < 1e-12);
  const double a = time_shift_covariance(h, h, 0.1, nu).real(), b = time_shift_covariance(h, h, 0.3, nu).real();
  CHECK(b < a);
  CHECK(a < hhat_inner(h, h, nu).real());
}

TEST_CASE("magic formula converges under grid refinement") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const MagicReport a = magic_formula_check(nu, 256, 20), b = magic_formula_check(nu, 512, 20);
  CHECK(b.deviation < a.deviation);
  CHECK(b.deviation < 1e-4);
  CHECK(b.parity_residual < 1e-12);
  CHECK_THROWS_AS(magic_formula_check(nu, 128, 20), std::invalid_argument);
}

TEST_CASE("one-particle KMS report is finite") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const auto f = CircleFunction::sample([](double p) { return cplx(kg::bump(p, 0.2, 0.9), 0.0); }, 32, 1.0);
  const auto g = CircleFunction::sample([](double p) { return cplx(kg::bump(p, -0.3, 0.8), 0.0); }, 32, 1.0);
  const KmsReport k = one_particle_kms(nu, 32, 0.3, f, g);
  CHECK(std::isfinite(k.defect));
  CHECK(k.rhs_abs > 0);
  CHECK(k.lambda_min == doctest::Approx(-k.lambda_max).epsilon(1e-10));
}

TEST_CASE("sphere covariance: constants and smooth functions") {
  for (double r : {1.0, 1.7}) {
    const NuParameter nu = NuParameter::from_mass(1.0 / r, r);
    const auto one = [](double, double) { return 1.0; };
    const SphereReport s = sphere_covariance(one, one, nu, 16);
    const double exact = std::pow(r, 4) * 4 * pi / (nu.mu * nu.mu * r * r);
    CHECK(rel(s.mode_sum, exact) < 1e-12);
    CHECK(rel(s.kernel_form, exact) < 1e-8);
    const auto f = [](double th, double ph) { return std::exp(std::sin(th) * std::cos(ph) + 0.3 * std::cos(th)); };
    const auto g = [](double th, double ph) { return std::cos(th) * std::cos(th) + std::sin(th) * std::sin(ph); };
    const SphereReport t = sphere_covariance(f, g, nu, 24);
    CHECK(rel(t.kernel_form, t.mode_sum) < 1e-8);
  }
}

TEST_CASE("time-zero restriction reproduces the one-particle norm") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const CircleFunction h = smooth(12, 1.0, 0.4);
  CHECK(rel(time_zero_restriction(h, nu), hhat_inner(h, h, nu).real()) < 1e-6);
}
