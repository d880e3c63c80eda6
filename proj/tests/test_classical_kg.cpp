#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "dscalar/classical_kg.hpp"

using namespace dscalar;
using namespace dscalar::kg;

namespace {
constexpr double pi = std::numbers::pi;
CauchyData bump_data(const WedgeGrid& g) {
  return sample_data(g, [](double p) { return bump(p, 0.3, 0.5); }, [](double p) { return 0.5 * bump(p, 0.2, 0.4); });
}
}  // namespace

TEST_CASE("wedge grid layout") {
  const WedgeGrid g = WedgeGrid::make(256);
  CHECK(g.n == 128);
  CHECK(g.psi.size() == 256);
  for (int j = 0; j < g.n; ++j) {
    CHECK(g.cos_psi(j) > 0.0);
    CHECK(g.cos_psi(j + g.n) < 0.0);
    // node j of I- is the reflection of node j of I+
    CHECK(std::abs(std::remainder(g.psi(j + g.n) - (pi - g.psi(j)), 2 * pi)) < 1e-14);
    CHECK(std::abs(std::sin(g.psi(j)) - std::tanh(g.u(j))) < 1e-15);
  }
  CHECK_THROWS_AS(WedgeGrid::make(63), std::invalid_argument);
}

TEST_CASE("epsilon operator: positivity, decoupling, symmetry") {
  for (double mr : {0.3, 1.0}) {
    const EpsilonOperator e = build_epsilon(WedgeGrid::make(256), NuParameter::from_mass(mr, 1.0));
    CHECK(e.min_eigenvalue() > 0.0);
    CHECK(e.decoupling_residual() == 0.0);
    CHECK((e.block - e.block.transpose()).cwiseAbs().maxCoeff() < 1e-10 * e.block.cwiseAbs().maxCoeff());
    // the eigenvectors diagonalize the block
    CHECK((e.block * e.V - e.V * e.lam.asDiagonal()).cwiseAbs().maxCoeff() < 1e-8 * e.lam.maxCoeff());
  }
}

TEST_CASE("propagator: vanishes at t = 0, normal derivative is -delta, antisymmetric in t") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const WedgeGrid g = WedgeGrid::make(512);
  const EpsilonOperator e = build_epsilon(g, nu);
  CHECK(propagator(e, 0.0, 5).cwiseAbs().maxCoeff() == 0.0);
  CHECK((propagator(e, 0.4, 17) + propagator(e, -0.4, 17)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd K = propagator_normal_derivative_t0(e);
  double err = 0;
  for (int i = 0; i < g.M; ++i)
    for (int j = 0; j < g.M; ++j) {
      const double w = nu.r * g.h * std::abs(g.cos_psi(i));
      err = std::max(err, std::abs(K(i, j) * w + (i == j ? 1.0 : 0.0)));
    }
  CHECK(err < 1e-8);
}

TEST_CASE("property: evolution is a group and conserves the boost charge") {
  for (double mr : {0.3, 1.0, 2.5}) {
    const NuParameter nu = NuParameter::from_mass(mr, 1.0);
    const EpsilonOperator e = build_epsilon(WedgeGrid::make(512), nu);
    const CauchyData d = bump_data(e.grid);
    const CauchyData a = cauchy_evolve(e, cauchy_evolve(e, d, 0.3), 0.4), b = cauchy_evolve(e, d, 0.7);
    CHECK((a.phi - b.phi).norm() < 1e-10 * b.phi.norm());
    const CauchyData back = cauchy_evolve(e, b, -0.7);
    CHECK((back.phi - d.phi).norm() < 1e-10 * d.phi.norm());
    const double q0 = conserved_charge(e, d, Charge::boost);
    for (double t : {0.25, 0.5, 1.0})
      CHECK(std::abs(conserved_charge(e, cauchy_evolve(e, d, t), Charge::boost) - q0) < 1e-8 * std::abs(q0));
  }
}

TEST_CASE("finite propagation speed") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  double prev = 1.0;
  for (int M : {256, 512, 1024}) {
    const EpsilonOperator e = build_epsilon(WedgeGrid::make(M, 3.0), nu);
    const CauchyData d = sample_data(e.grid, [](double p) { return bump(p, 0.3, 0.6); },
                                     [](double p) { return 0.5 * bump(p, 0.2, 0.5); });
    const LeakageReport l = finite_speed_check(e, d, 0.3 - 0.6, 0.3 + 0.6, 0.5);
    CHECK(l.leakage < prev);
    CHECK(l.outside_Iplus < 1e-8);
    prev = l.leakage;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("light-cone interval follows the unit-speed boost in u") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const auto gd = [](double u) { return std::asin(std::tanh(u)); };
  for (double p : {-1.0, 0.3, 1.2}) {
    const Interval I = lightcone_interval(0.0, 0.5, p, nu);
    const double u = std::atanh(std::sin(p));
    CHECK(std::abs(I.psi_minus - gd(u - 0.5)) < 1e-12);
    CHECK(std::abs(I.psi_plus - gd(u + 0.5)) < 1e-12);
    CHECK(I.length == doctest::Approx(I.psi_plus - I.psi_minus));
  }
}

TEST_CASE("bump is smooth, compactly supported and normalized at the center") {
  CHECK(bump(0.3, 0.3, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump(0.81, 0.3, 0.5) == 0.0);
  CHECK(bump(-0.21, 0.3, 0.5) == 0.0);
}
