#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "dscalar/harmonic.hpp"

using namespace dscalar;
using namespace dscalar::harm;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
const Eigen::Matrix3d eta = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
}  // namespace

TEST_CASE("chart and tuboid points lie on the hyperboloid") {
  for (double r : {0.5, 1.0, 2.0}) {
    CHECK(DeSitterPoint::chart(0.7, 2.1, r).constraint_residual(r) < 1e-15);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
      const DeSitterPoint z = DeSitterPoint::tuboid(random_lorentz(rng, 1.0), 0.6, r, i % 2 ? 1 : -1);
      CHECK(z.constraint_residual(r) < 1e-13);
      const Eigen::Vector3d y = z.x.imag();
      CHECK((i % 2 ? 1.0 : -1.0) * y(0) > std::hypot(y(1), y(2)));
    }
  }
}

TEST_CASE("property: generated transformations preserve the Minkowski form") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d L = random_lorentz(rng, 1.5);
    CHECK((L.transpose() * eta * L - eta).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(L.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(L(0, 0) >= 1.0);
  }
  // rotation0(a) shifts psi by -a in the chart
  const DeSitterPoint x = DeSitterPoint::chart(0.3, 1.0, 1.0);
  CHECK((rotation0(0.4).cast<cplx>() * x.x - DeSitterPoint::chart(0.3, 0.6, 1.0).x).norm() < 1e-15);
}

TEST_CASE("plane waves: branches, homogeneity and singular points") {
  const cplx s(-0.5, -0.8);
  const PlaneWave neg = plane_wave_from_dot(-2.0, s, +1);
  CHECK(rel(neg.value, std::pow(cplx(2.0), s)) < 1e-15);
  const PlaneWave pos = plane_wave_from_dot(2.0, s, +1), posm = plane_wave_from_dot(2.0, s, -1);
  CHECK(rel(pos.value, std::exp(I * pi * s) * std::pow(cplx(2.0), s)) < 1e-15);
  CHECK(rel(posm.value, std::exp(-I * pi * s) * std::pow(cplx(2.0), s)) < 1e-15);
  CHECK(plane_wave_from_dot(0.0, s, +1).singular);
  CHECK(plane_wave_from_dot(0.0, cplx(0.5, 0.0), +1).value == cplx(0.0));
  CHECK_THROWS_AS(plane_wave_from_dot(1.0, cplx(-1.0, 0.0), +1), std::domain_error);
  const DeSitterPoint x = DeSitterPoint::chart(0.2, 0.9, 1.0);
  const LightconePoint p{0.4, 1.0}, p3{0.4, 3.0};
  CHECK(rel(plane_wave(x, p3, s, +1).value, std::pow(3.0, s) * plane_wave(x, p, s, +1).value) < 1e-14);
  DeSitterPoint z = x;
  z.x(0) += cplx(0.0, 0.1);
  CHECK_THROWS_AS(plane_wave(z, p, s, +1), std::domain_error);
}

TEST_CASE("plane waves solve the Klein-Gordon equation") {
  for (double mr : {0.3, 1.0, 2.0}) {
    const NuParameter nu = NuParameter::from_mass(mr / 1.3, 1.3);
    const auto u = [&](double x0, double psi) {
      return plane_wave(DeSitterPoint::chart(x0, psi, nu.r), LightconePoint{0.4, 1.0}, nu.s_plus(), +1).value;
    };
    CHECK(std::abs(kg_operator_fd(u, 0.3, 1.1, nu, 1e-3)) < 1e-6 * std::abs(u(0.3, 1.1)));
    // a function that is not a solution is detected
    const auto v = [](double x0, double psi) { return cplx(std::exp(-x0 * x0) * std::cos(psi), 0.0); };
    CHECK(std::abs(kg_operator_fd(v, 0.3, 1.1, nu, 1e-3)) > 1e-2);
  }
}

// frozen from mpmath: c_nu P_{s+}(-cos 1.2)
TEST_CASE("two-point function at a closed-form pair") {
  const DeSitterPoint z1 = DeSitterPoint::tuboid(Eigen::Matrix3d::Identity(), 0.5, 1.0, +1);
  const DeSitterPoint z2 = DeSitterPoint::tuboid(Eigen::Matrix3d::Identity(), 0.7, 1.0, -1);
  const NuParameter n1 = NuParameter::from_mass(1.0, 1.0), n3 = NuParameter::from_mass(0.3, 1.0);
  CHECK(rel(two_point_legendre(z1, z2, n1), cplx(0.161342291050200872666)) < 1e-13);
  CHECK(rel(two_point_legendre(z1, z2, n3), cplx(1.78828056198335503337)) < 1e-13);
  CHECK(rel(two_point_contour(z1, z2, n1, 2048), cplx(0.161342291050200872666)) < 1e-10);
  CHECK(rel(two_point_contour(z1, z2, n3, 2048), cplx(1.78828056198335503337)) < 1e-10);
}

TEST_CASE("property: contour form equals the Legendre form and is Lorentz invariant") {
  for (double mr : {0.3, 1.0, 2.0}) {
    const NuParameter nu = NuParameter::from_mass(mr / 1.3, 1.3);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> eu(0.2, 1.4);
    for (int i = 0; i < 10; ++i) {
      const DeSitterPoint z1 = DeSitterPoint::tuboid(random_lorentz(rng, 1.0), eu(rng), nu.r, +1);
      const DeSitterPoint z2 = DeSitterPoint::tuboid(random_lorentz(rng, 1.0), eu(rng), nu.r, -1);
      const cplx b = two_point_legendre(z1, z2, nu);
      CHECK(rel(two_point_contour(z1, z2, nu, 2048), b) < 1e-6);
      const Eigen::Matrix3cd L = random_lorentz(rng, 1.5).cast<cplx>();
      CHECK(rel(two_point_legendre(DeSitterPoint{L * z1.x}, DeSitterPoint{L * z2.x}, nu), b) < 1e-8);
    }
  }
}

TEST_CASE("commutator normalization") {
  for (double mr : {0.3, 1.0, 2.0}) {
    const NuParameter nu = NuParameter::from_mass(mr, 1.0);
    CHECK(std::abs(commutator_normalization(nu) + I) < 1e-12);
    CHECK(std::abs(commutator_jump(nu) + I) < 1e-8);
  }
}

TEST_CASE("Fourier-Helgason transform: rotation covariance, guards and annihilation") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const ChartFunction g{[](double x0, double psi) {
                          return std::exp(-4 * x0 * x0) * (1 + 0.5 * std::cos(psi) + 0.3 * std::sin(2 * psi));
                        },
                        -3.0, 3.0};
  const double beta = 0.7;
  const ChartFunction gr{[&](double x0, double psi) { return g.f(x0, psi + beta); }, -3.0, 3.0};
  const std::vector<cplx> A = fh_evaluate(gr, nu, 256, {0.1, 2.5}), B = fh_evaluate(g, nu, 256, {0.1 - beta, 2.5 - beta});
  for (int i = 0; i < 2; ++i) CHECK(rel(A[i], B[i]) < 1e-12);
  CHECK_THROWS_AS(fh_transform(g, nu, 32), std::invalid_argument);

  const auto bump = [](double x) { return std::abs(x) >= 1 ? 0.0 : std::exp(-1.0 / (1 - x * x)); };
  const ChartFunction c{[&](double x0, double psi) { return bump(x0 / 0.8) * (1 + 0.5 * std::cos(psi)); }, -0.8, 0.8};
  const FhResult F = fh_transform(c, nu, 128, 16);
  CHECK(!F.quadrature_warning);
  const FhResult Fk = fh_transform(kg_applied(c, nu, 1e-3), nu, 512, 16);
  CHECK(fh_norm(Fk) < 1e-4 * fh_norm(F));
}
