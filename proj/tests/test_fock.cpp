#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "checks.hpp"
#include "dscalar/fock.hpp"

using namespace dscalar;
using namespace dscalar::fock;

namespace {
constexpr double two_pi = 2 * std::numbers::pi, half_turn = std::numbers::pi;
const cplx I(0.0, 1.0);

double max_abs(const SpMat& m) {
  double x = 0.0;
  for (long j = 0; j < m.outerSize(); ++j)
    for (SpMat::InnerIterator it(m, j); it; ++it) x = std::max(x, std::abs(it.value()));
  return x;
}

// real test function with modes |q| <= 2
CircleFunction test_h(double r) {
  CircleFunction h(2, r);
  h[0] = 0.8;
  h[1] = cplx(0.3, -0.2);
  h[-1] = std::conj(h[1]);
  h[2] = cplx(-0.1, 0.25);
  h[-2] = std::conj(h[2]);
  return h;
}

// :phi^n:(h) by explicit products of ladder matrices on a larger basis, integrated with an exact trapezoid rule
Eigen::MatrixXcd wick_brute_force(const FockBasis& big, const NuParameter& nu, int n, const CircleFunction& h) {
  const op::DispersionTable d = op::dispersion(nu, big.K);
  std::vector<SpMat> a;
  for (int k = -big.K; k <= big.K; ++k) a.push_back(ladder(big, k, Ladder::annihilate).matrix);
  const int Q = 2 * (n * big.K + h.K) + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(big.dim(), big.dim());
  for (int j = 0; j < Q; ++j) {
    const double psi = two_pi * j / Q;
    SpMat A(big.dim(), big.dim());
    for (int k = -big.K; k <= big.K; ++k)
      A += (std::exp(I * double(k) * psi) / std::sqrt(2 * two_pi * nu.r * d(k))) * a[k + big.K];
    const SpMat Ad = A.adjoint();
    const Eigen::MatrixXcd Ad_dense(Ad), A_dense(A);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Zero(big.dim(), big.dim());
    for (int m = 0; m <= n; ++m) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(big.dim(), big.dim());
      for (int i = 0; i < m; ++i) p = p * Ad_dense;
      for (int i = 0; i < n - m; ++i) p = p * A_dense;
      double binom = 1;
      for (int i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
      term += binom * p;
    }
    out += (two_pi / Q) * nu.r * h.eval(psi) * term;
  }
  return out;
}
}  // namespace

TEST_CASE("basis dimensions, ordering and lookup") {
  CHECK(build_basis(0, 0).dim() == 1);
  CHECK(build_basis(1, 1).dim() == 4);
  CHECK(build_basis(2, 2).dim() == 21);
  CHECK(build_basis(6, 4).dim() == 2380);
  CHECK(basis_dimension(6, 4) == 2380);
  CHECK(basis_dimension(8, 5) == 26334);
  const FockBasis b = build_basis(3, 3);
  CHECK(b.total[0] == 0);
  for (long i = 1; i < b.dim(); ++i) CHECK(b.total[i] >= b.total[i - 1]);
  for (long i = 0; i < b.dim(); ++i) CHECK(b.find(b.states[i]) == i);
  Occupation too_many(b.modes(), 0);
  too_many[0] = 4;
  CHECK(b.find(too_many) == -1);
  CHECK_THROWS_AS(build_basis(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(40, 8), std::length_error);
}

TEST_CASE("ladder operators: adjointness and number operator") {
  const FockBasis b = build_basis(2, 3);
  for (int k = -2; k <= 2; ++k) {
    const SpMat a = ladder(b, k, Ladder::annihilate).matrix, ad = ladder(b, k, Ladder::create).matrix;
    CHECK(max_abs(SpMat(a.adjoint()) - ad) == 0.0);
    const SpMat n = ad * a;
    for (long i = 0; i < b.dim(); ++i) CHECK(std::abs(n.coeff(i, i) - double(b.states[i][k + 2])) < 1e-14);
  }
  CHECK_THROWS_AS(ladder(b, 3, Ladder::create), std::out_of_range);
}

TEST_CASE("CCR, ladder form of the boost, second-quantized algebra") {
  for (double mr : {0.3, 1.0}) {
    const cli::FockAlgebraReport a = cli::fock_algebra(6, 4, NuParameter::from_mass(mr, 1.0));
    CHECK(a.ccr < 1e-12);
    CHECK(a.ladder_vs_dgamma < 1e-12);
    CHECK(a.commutator < 1e-9);
    CHECK(a.casimir < 1e-9);
  }
}

TEST_CASE("Wick monomial n = 4 equals explicit ladder products") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.3);
  const FockBasis small = build_basis(2, 3), big = build_basis(2, 5);
  const CircleFunction h = test_h(nu.r);
  for (int n : {2, 3, 4}) {
    const Eigen::MatrixXcd W(wick_monomial(small, nu, n, h).matrix);
    const Eigen::MatrixXcd B = wick_brute_force(big, nu, n, h);
    double err = 0, scale = 0;
    for (long i = 0; i < small.dim(); ++i)
      for (long j = 0; j < small.dim(); ++j) {
        const cplx ref = B(big.find(small.states[i]), big.find(small.states[j]));
        err = std::max(err, std::abs(W(i, j) - ref));
        scale = std::max(scale, std::abs(ref));
      }
    CHECK(err < 1e-13 * scale);
  }
}

TEST_CASE("Wick monomials map the vacuum into the n-particle sector") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const FockBasis b = build_basis(3, 5);
  for (int n : {1, 2, 3, 4}) {
    const SpMat W = wick_monomial(b, nu, n, test_h(1.0)).matrix;
    double off = 0, on = 0;
    for (SpMat::InnerIterator it(W, 0); it; ++it)
      (b.total[it.row()] == n ? on : off) += std::norm(it.value());
    CHECK(off == 0.0);
    CHECK(on > 0.0);
  }
}

TEST_CASE("matrix-free node operator equals the assembled interaction") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const FockBasis b = build_basis(4, 4);
  const PolynomialInteraction P = PolynomialInteraction::parse("0,0.2,0.5,0,0.1");
  const CircleFunction h = half_cos(+1, 16, 1.0);
  const FockOperator V = interaction(b, nu, P, h);
  const WickNodeOperator Vn(b, nu, P, h, nu.r);
  const Eigen::VectorXcd v = Eigen::VectorXcd::Random(b.dim());
  CHECK((V.matrix * v - Vn.apply(v)).norm() < 1e-12 * (V.matrix * v).norm());
  CHECK(V.hermiticity_defect() < 1e-14);
}

TEST_CASE("reflection J: interaction split, boost antisymmetry, spectral symmetry") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const FockBasis b = build_basis(4, 3);
  const PolynomialInteraction P = PolynomialInteraction::parse("0,0,0,0,0.1");
  const FockOperator V0 = interaction(b, nu, P, half_cos(+1, 16, 1.0));
  const FockOperator V = interaction(b, nu, P, cos_alpha(0.0, 1, 1.0));
  CHECK(max_abs(SpMat(V.matrix - V0.matrix + modular_conjugate(b, V0).matrix)) < 1e-14);
  const FockOperator L = interacting_boost(b, nu, P, 0.0);
  CHECK(max_abs(SpMat(modular_conjugate(b, L).matrix + L.matrix)) < 1e-14);
  const Spectrum s = hermitian_spectrum(L, false);
  const long n = s.values.size();
  for (long i = 0; i < n; ++i) CHECK(std::abs(s.values(i) + s.values(n - 1 - i)) < 1e-10);
}

TEST_CASE("half-circle cosine coefficients") {
  const CircleFunction p = half_cos(+1, 40, 1.0), m = half_cos(-1, 40, 1.0);
  // chi_{cos > 0} cos at psi = 0 is 1, at psi = pi it is 0; truncation error decays like 1/K
  CHECK(std::abs(p.eval(0.0) - 1.0) < 5e-3);
  CHECK(std::abs(p.eval(half_turn)) < 5e-3);
  CHECK(std::abs(m.eval(half_turn) + 1.0) < 5e-3);
  const CircleFunction c = cos_alpha(0.0, 40, 1.0);
  CHECK((p.coeffs + m.coeffs - c.coeffs).norm() < 1e-15);
}

TEST_CASE("stress-energy charges reproduce the generators") {
  for (const char* poly : {"0", "0,0,0,0,0.1", "0,0,0.3,0,0,0,0.05"}) {
    const ChargeReport c =
        stress_energy_charges(build_basis(5, 3), NuParameter::from_mass(1.0, 1.0), PolynomialInteraction::parse(poly));
    CHECK(c.l_residual < 1e-10);
    CHECK(c.k_residual < 1e-10);
    CHECK(std::abs(c.l_pinned - 1.0) < 1e-10);
    CHECK(std::abs(c.k_pinned - 1.0) < 1e-10);
  }
}

TEST_CASE("free field equation holds exactly; first commutator carries the factor r") {
  for (double r : {1.0, 1.6}) {
    const NuParameter nu = NuParameter::from_mass(1.0 / r, r);
    CircleFunction h(1, r);
    h[0] = 1.0;
    h[1] = h[-1] = 0.3;
    const EomReport e = eom_residual(build_basis(5, 3), nu, PolynomialInteraction{{0.0}, true}, h);
    CHECK(e.residual < 1e-10);
    CHECK(e.first_commutator < 1e-10);
  }
  CircleFunction wide(4, 1.0);
  wide[4] = wide[-4] = 1.0;
  CHECK_THROWS_AS(eom_residual(build_basis(5, 3), NuParameter::from_mass(1.0, 1.0), PolynomialInteraction{{0.0}, true}, wide),
                  std::invalid_argument);
}

TEST_CASE("Krylov exponential agrees with the dense one") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const FockBasis b = build_basis(4, 4);
  const FockOperator H = hamiltonian_half(b, nu, PolynomialInteraction::parse("0,0,0,0,0.1"));
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(b.dim());
  e0(0) = 1.0;
  const auto ap = [&](const Eigen::VectorXcd& x) { return Eigen::VectorXcd(H.matrix * x); };
  const ExpReport d = exp_apply(ap, b.dim(), &H, e0, half_turn), k = exp_apply(ap, b.dim(), nullptr, e0, half_turn);
  CHECK(k.krylov);
  CHECK(!d.krylov);
  CHECK(std::abs(d.log_norm - k.log_norm) < 1e-8);
  CHECK(std::abs(std::abs(d.direction.dot(k.direction)) - 1.0) < 1e-10);
}

TEST_CASE("interacting vacuum and inequalities are well defined") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const PolynomialInteraction P = PolynomialInteraction::parse("0,0,0,0,0.1");
  const VacuumReport v = interacting_vacuum(build_basis(6, 4), nu, P);
  CHECK(std::abs(v.omega.norm() - 1.0) < 1e-12);
  CHECK(std::isfinite(v.log_norm));
  CHECK(v.k0_square >= 0.0);
  CHECK(v.vacuum_overlap > 0.0);
  CHECK(v.vacuum_overlap <= 1.0);
  const InequalityReport q = inequality_check(build_basis(4, 4), nu, P);
  CHECK(q.pb_margin >= -1e-12);
  CHECK(std::isfinite(q.gt));
}

TEST_CASE("boost split is additive") {
  const SplitReport s =
      boost_split(build_basis(4, 3), NuParameter::from_mass(1.0, 1.0), PolynomialInteraction::parse("0,0,0,0,0.1"));
  CHECK(s.additivity < 1e-12);
  CHECK(s.c0 >= 0.0);
  CHECK(std::isfinite(s.min_plus));
}

TEST_CASE("polynomial parsing and validation") {
  const PolynomialInteraction P = PolynomialInteraction::parse("0, 0, 0, 0, 0.1");
  CHECK(P.degree() == 4);
  CHECK(P.bounded_below);
  CHECK(P.derivative().degree() == 3);
  CHECK(P.derivative().coefficients[3] == doctest::Approx(0.4));
  CHECK(PolynomialInteraction::parse("0").is_zero());
  CHECK(!PolynomialInteraction::parse("0,0,0,1").bounded_below);
  CHECK(!PolynomialInteraction::parse("0,0,0,0,-1").bounded_below);
  CHECK_THROWS_AS(PolynomialInteraction::parse("0,a"), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialInteraction::parse("0,,1"), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialInteraction::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialInteraction::parse("0,0,0,0,0,0,0,0,0,1"), std::invalid_argument);
  PolynomialInteraction bad{{0, 0, 0, 1}, true};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("rotation generator counts momentum") {
  const FockBasis b = build_basis(3, 2);
  const SpMat K0 = rotation_generator(b).matrix;
  for (long i = 0; i < b.dim(); ++i) CHECK(K0.coeff(i, i) == cplx(double(b.sum_k(i))));
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(7, 7);
  for (int k = -3; k <= 3; ++k) h(k + 3, k + 3) = double(k);
  CHECK(max_abs(SpMat(dGamma(b, h).matrix - K0)) < 1e-14);
}

TEST_CASE("semigroups refuse interactions unbounded from below") {
  const NuParameter nu = NuParameter::from_mass(1.0, 1.0);
  const FockBasis b = build_basis(2, 2);
  for (const char* poly : {"0,0,0,1", "0,0,0,0,-0.1"}) {
    const PolynomialInteraction P = PolynomialInteraction::parse(poly);
    CHECK_THROWS_AS(interacting_vacuum(b, nu, P), std::invalid_argument);
    CHECK_THROWS_AS(hamiltonian_half(b, nu, P), std::invalid_argument);
    CHECK_THROWS_AS(inequality_check(b, nu, P), std::invalid_argument);
    CHECK_NOTHROW(interaction(b, nu, P, cos_alpha(0.0, 1, 1.0)));
  }
}
