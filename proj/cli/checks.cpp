#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dscalar/classical_kg.hpp"
#include "dscalar/fock.hpp"
#include "dscalar/harmonic.hpp"
#include "dscalar/one_particle.hpp"
#include "dscalar/rep_so12.hpp"
#include "dscalar/specfun.hpp"

namespace dscalar::cli {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

double rel(cplx a, cplx b) {
  const double s = std::abs(b);
  return s > 0 ? std::abs(a - b) / s : std::abs(a - b);
}

double max_abs(const SpMat& m) {
  double x = 0.0;
  for (long j = 0; j < m.outerSize(); ++j)
    for (SpMat::InnerIterator it(m, j); it; ++it) x = std::max(x, std::abs(it.value()));
  return x;
}

// distance of z from the poles 0, -1, -2, ...
double pole_distance(cplx z) {
  if (z.real() > 0.5) return std::abs(z);
  return std::abs(z - std::round(z.real()));
}

CircleFunction smooth_a(int K, double r) {
  return CircleFunction::sample([](double p) { return cplx(std::exp(std::cos(p - 0.4)), 0.0); }, K, r);
}
CircleFunction smooth_b(int K, double r) {
  return CircleFunction::sample([](double p) { return cplx(std::exp(-2.0 * (1.0 - std::cos(p + 1.0))), 0.0); },
                                K, r);
}
}  // namespace

NuParameter RunConfig::nu() const {
  if (!(mu > 0.0) || !(r > 0.0) || !std::isfinite(mu) || !std::isfinite(r))
    throw usage_error("mu and r must be positive and finite");
  const NuParameter p = NuParameter::from_mass(mu, r);
  if (series && *series != p.series)
    throw usage_error("series override contradicts mu r = " + std::to_string(mu * r) +
                      " (principal needs mu r >= 1/2, complementary 0 < mu r < 1/2)");
  return p;
}

void RunConfig::validate() const {
  nu();
  if (K > 4096) throw usage_error("K exceeds the size guard 4096");
  if (M > 8192) throw usage_error("M exceeds the size guard 8192");
  if (M > 0 && M % 2 != 0) throw usage_error("M must be even");
  if (N > 16) throw usage_error("N exceeds the size guard 16");
  if (format != "json" && format != "csv") throw usage_error("format must be json or csv");
  for (const auto& [name, v] : tol)
    if (!(v >= 0.0)) throw usage_error("tolerance " + name + " must be non-negative");
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tol.find(name);
  return it == tol.end() ? fallback : it->second;
}

void Report::add(const RunConfig& cfg, const std::string& name, double residual, double default_tol,
                 const std::string& reference) {
  CheckRow row;
  row.check_name = name;
  row.residual = residual;
  row.tolerance = cfg.tolerance(name, default_tol);
  row.pass = std::isfinite(residual) && residual <= row.tolerance;
  row.reference = reference;
  rows.push_back(row);
}

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

const CheckRow* Report::find(const std::string& name) const {
  for (const CheckRow& r : rows)
    if (r.check_name == name) return &r;
  return nullptr;
}

void check_specfun(const RunConfig& cfg, Report& rep) {
  using specfun::gamma;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> re(-10.0, 10.0), im(-10.0, 10.0);
  double rec = 0, refl = 0, dup = 0, conj = 0, dig = 0;
  int n = 0;
  while (n < 500) {
    const cplx z(re(rng), im(rng));
    if (pole_distance(z) < 0.05 || pole_distance(2.0 * z) < 0.05 || pole_distance(1.0 - z) < 0.05) continue;
    ++n;
    const cplx g = gamma(z);
    rec = std::max(rec, rel(z * g, gamma(z + 1.0)));
    refl = std::max(refl, std::abs(g * gamma(1.0 - z) * std::sin(pi * z) / pi - 1.0));
    const cplx dup_rhs = std::pow(cplx(2.0), 1.0 - 2.0 * z) * std::sqrt(pi) * gamma(2.0 * z);
    dup = std::max(dup, rel(g * gamma(z + 0.5), dup_rhs));
    conj = std::max(conj, rel(gamma(std::conj(z)), std::conj(g)));
    const cplx d1 = specfun::digamma(z + 1.0);
    dig = std::max(dig, std::abs(d1 - specfun::digamma(z) - 1.0 / z) / std::max(1.0, std::abs(d1)));
  }
  rep.add(cfg, "specfun.gamma.recurrence", rec, 1e-11, "Gamma(z+1) = z Gamma(z), 500 random points");
  rep.add(cfg, "specfun.gamma.reflection", refl, 1e-11, "Gamma(z) Gamma(1-z) = pi / sin(pi z)");
  rep.add(cfg, "specfun.gamma.duplication", dup, 1e-11, "Gamma(z) Gamma(z+1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)");
  rep.add(cfg, "specfun.gamma.conjugation", conj, 1e-11, "Gamma(conj z) = conj Gamma(z)");
  rep.add(cfg, "specfun.digamma.recurrence", dig, 1e-11, "psi(z+1) = psi(z) + 1/z");

  // P_s(1) = 1 and P_{s+} = P_{s-} for the configured degree
  const NuParameter nu = cfg.nu();
  double unit = std::abs(specfun::legendre_p(nu.s_plus(), cplx(1.0)) - 1.0), sym = 0;
  for (cplx z : {cplx(0.3, 0.0), cplx(-0.8, 0.05), cplx(0.1, 1.2), cplx(2.5, 0.3), cplx(-3.0, 0.5)})
    sym = std::max(sym, rel(specfun::legendre_p(nu.s_plus(), z), specfun::legendre_p(nu.s_minus(), z)));
  rep.add(cfg, "specfun.legendre.unit", unit, 1e-14, "P_s(1) = 1");
  rep.add(cfg, "specfun.legendre.degree_symmetry", sym, 1e-12, "P_s = P_{-1-s}");
}

void check_dispersion(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  const int K = cfg.K_or(256);
  const op::DispersionTable d = op::dispersion(nu, K + 1);
  const double r = nu.r, r2 = r * r, mr2 = nu.mu * nu.mu * r2;
  double e1 = 0, e2 = 0, e3 = 0, sym = 0;
  for (int k = -K; k <= K; ++k) {
    const double a = k * (k + 1.0) + mr2;
    e1 = std::max(e1, std::abs(r2 * d(k) * d(k + 1) - a) / std::max(1.0, std::abs(a)));
    const double t2 = r2 * d(k) * (d(k - 1) - d(k + 1));
    e2 = std::max(e2, std::abs(t2 + 2.0 * k) / std::max({1.0, std::abs(t2), 2.0 * std::abs(k)}));
    const double c = k * double(k) + mr2;
    e3 = std::max(e3, std::abs(0.5 * r2 * d(k) * (d(k + 1) + d(k - 1)) - c) / std::max(1.0, c));
    sym = std::max(sym, std::abs(d(k) - d(-k)) / d(k));
  }
  const double tol = 1e-10 * std::max(1.0, nu.mu * nu.mu);
  rep.add(cfg, "dispersion.product", e1, tol, "r^2 omega(k) omega(k+1) = k(k+1) + mu^2 r^2, |k| <= K");
  rep.add(cfg, "dispersion.difference", e2, tol, "r^2 omega(k) (omega(k-1) - omega(k+1)) = -2k");
  rep.add(cfg, "dispersion.average", e3, tol, "r^2 omega(k) (omega(k+1) + omega(k-1)) / 2 = k^2 + mu^2 r^2");
  rep.add(cfg, "dispersion.symmetry", sym, tol, "omega(-k) = omega(k)");
  const double ratio = op::omega_tilde(nu, 256) / std::sqrt(256.0 * 256.0 / r2 + nu.mu * nu.mu);
  rep.add(cfg, "dispersion.asymptotic_ratio", std::abs(ratio - 1.0), 1e-3,
          "omega(256) / sqrt(256^2/r^2 + mu^2) -> 1");
}

void check_legendre_coefficients(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  const int K = std::min(cfg.K_or(64), 64);
  const op::DispersionTable d = op::dispersion(nu, K);
  const double sinps = std::sin(pi * nu.s_plus()).real();
  double quad = 0, omega = 0, prime = 0;
  for (int k = 0; k <= K; ++k) {
    const double p = op::legendre_fourier_coeff(nu, k);
    quad = std::max(quad, std::abs(p - op::legendre_fourier_quadrature(nu, k, 4096)) / std::abs(p));
    omega = std::max(omega, std::abs(-sinps / (pi * nu.r * p) - d(k)) / d(k));
    const double want = nu.r * d(k) / (2.0 * pi * nu.c_nu().real());
    prime = std::max(prime, std::abs(op::legendre_prime_fourier_quadrature(nu, k, 4096) - want) / want);
  }
  rep.add(cfg, "legendre.fourier_closed_form", quad, 1e-8,
          "closed-form Fourier coefficients of P_{s+}(-cos psi) vs 4096-point quadrature");
  rep.add(cfg, "legendre.omega_relation", omega, 1e-10, "omega(k) = -sin(pi s+) / (pi r p(k))");
  rep.add(cfg, "legendre.derivative_kernel", prime, 1e-8,
          "Fourier coefficients of P'_{s+}(-cos psi) = r omega(k) / (2 pi c_nu)");
}

void check_kernel_form(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  const int K = 12;
  const CircleFunction h1 = smooth_a(K, nu.r), h2 = smooth_b(K, nu.r);
  const cplx mode = op::hhat_inner(h1, h2, nu), kern = op::hhat_inner_kernel(h1, h2, nu);
  rep.add(cfg, "one_particle.kernel_form", rel(kern, mode), 1e-8,
          "mode-sum inner product = c_nu r^2 double integral against P_{s+}(-cos(psi - psi'))");
  const op::SharpTimeReport st = op::sharp_time_embed(h1, h2, nu);
  rep.add(cfg, "one_particle.sharp_time", std::abs(st.hhat_norm2 - st.covariant) / st.hhat_norm2, 1e-8,
          "|h1 + i omega r h2|^2 equals the covariant double-integral form");
}

void check_intertwiners(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  if (nu.series == Series::principal) {
    double unit = 0;
    for (int k = 0; k <= 10000; ++k) unit = std::max(unit, std::abs(std::abs(rep::intertwiner_coeff(nu, k)) - 1.0));
    rep.add(cfg, "rep.ck_unit_modulus", unit, 1e-12, "|c_k(nu)| = 1 for real nu, k <= 10^4");
  }
  rep.add(cfg, "rep.c0", std::abs(rep::intertwiner_coeff(nu, 0) - 1.0), 1e-14, "c_0(nu) = 1");
  // the kernel rho_nu is integrable for Re(i nu) > 0, so the Fourier test runs at nu = -i t
  const double t = nu.series == Series::complementary ? std::abs(nu.nu.imag()) : 0.3;
  const NuParameter nc = NuParameter::with_nu(nu.r, cplx(0.0, -t));
  double four = 0;
  for (int k = 0; k <= 64; ++k) {
    const cplx c = rep::intertwiner_coeff(nc, k);
    four = std::max(four, rel(rep::intertwiner_kernel_fourier(nc, k), c));
  }
  rep.add(cfg, "rep.kernel_diagonalization", four, 1e-6, "Fourier coefficients of rho_nu equal c_k(nu), nu = -i t");
}

void check_lie_algebra(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  const rep::RelationReport r = rep::group_relation_check(nu, cfg.K_or(128), 8);
  rep.add(cfg, "rep.k0_l1", r.k0_l1, 1e-10, "[K0, L1] = i L2 on interior modes");
  rep.add(cfg, "rep.k0_l2", r.k0_l2, 1e-10, "[K0, L2] = -i L1 on interior modes");
  rep.add(cfg, "rep.l1_l2", r.l1_l2, 1e-10, "[L1, L2] = -i K0 on interior modes");
  rep.add(cfg, "rep.casimir", r.casimir, 1e-10, "-K0^2 + L1^2 + L2^2 = 1/4 + nu^2 on interior modes");
  rep.add(cfg, "rep.rotation_covariance", r.rotation, 1e-10, "e^{-i a K0} L1 e^{i a K0} = cos a L1 + sin a L2");
  rep.add(cfg, "rep.hermitian", r.hermitian, 1e-10, "L1, L2 self-adjoint in the one-particle inner product");
}

void check_two_point(const RunConfig& cfg, Report& rep) {
  using namespace harm;
  const NuParameter nu = cfg.nu();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> eta(0.2, 1.4);
  double cross = 0, lorentz = 0;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d L1 = random_lorentz(rng, 1.0), L2 = random_lorentz(rng, 1.0);
    const DeSitterPoint z1 = DeSitterPoint::tuboid(L1, eta(rng), nu.r, +1);
    const DeSitterPoint z2 = DeSitterPoint::tuboid(L2, eta(rng), nu.r, -1);
    const cplx leg = two_point_legendre(z1, z2, nu);
    cross = std::max(cross, rel(two_point_contour(z1, z2, nu, 2048), leg));
    const Eigen::Matrix3cd L = random_lorentz(rng, 1.5).cast<cplx>();
    lorentz = std::max(lorentz, rel(two_point_legendre(DeSitterPoint{L * z1.x}, DeSitterPoint{L * z2.x}, nu), leg));
  }
  rep.add(cfg, "harmonic.two_point_cross_form", cross, 1e-6,
          "lightcone contour integral (2048 points) = c_nu P_{s+}(z1.z2/r^2), 20 tuboid pairs");
  rep.add(cfg, "harmonic.lorentz_invariance", lorentz, 1e-8, "W(L z1, L z2) = W(z1, z2)");
  rep.add(cfg, "harmonic.commutator_normalization", std::abs(commutator_normalization(nu) + I), 1e-12,
          "c_nu 2i sin(pi s+) = -i");
  rep.add(cfg, "harmonic.commutator_jump", std::abs(commutator_jump(nu) + I), 1e-8,
          "jump of c_nu P_{s+} across the cut at z = -1 equals -i");
  const cplx s = nu.s_plus();
  double kg = 0;
  for (double alpha : {0.4, 2.0}) {
    const auto u = [&](double x0, double psi) {
      return plane_wave(DeSitterPoint::chart(x0, psi, nu.r), LightconePoint{alpha, 1.0}, s, +1).value;
    };
    for (auto [x0, psi] : {std::pair{0.3, 1.1}, std::pair{-0.5, 2.9}})
      kg = std::max(kg, std::abs(kg_operator_fd(u, x0, psi, nu, 1e-3)) / std::abs(u(x0, psi)));
  }
  rep.add(cfg, "harmonic.plane_wave_kg", kg, 1e-6, "(box + mu^2) (x.p)^{s+} = 0 away from the null line");
}

void check_fourier_helgason(const RunConfig& cfg, Report& rep) {
  using namespace harm;
  const NuParameter nu = cfg.nu();
  const auto bump = [](double x) { return std::abs(x) >= 1 ? 0.0 : std::exp(-1.0 / (1 - x * x)); };
  const ChartFunction g{[bump](double x0, double psi) {
                          return bump(x0 / 0.8) * (1 + 0.5 * std::cos(psi) + 0.3 * std::sin(2 * psi));
                        },
                        -0.8, 0.8};
  // rotation covariance on a smooth profile, so the comparison isolates the psi rule
  const ChartFunction gs{[](double x0, double psi) {
                           return std::exp(-4 * x0 * x0) * (1 + 0.5 * std::cos(psi) + 0.3 * std::sin(2 * psi));
                         },
                         -3.0, 3.0};
  const double beta = 0.7;
  const ChartFunction gr{[gs, beta](double x0, double psi) { return gs.f(x0, psi + beta); }, -3.0, 3.0};
  const std::vector<double> a{0.1, 1.0, 2.5};
  std::vector<double> ab;
  for (double x : a) ab.push_back(x - beta);
  const std::vector<cplx> A = fh_evaluate(gr, nu, 256, a), B = fh_evaluate(gs, nu, 256, ab);
  double rot = 0;
  for (size_t i = 0; i < A.size(); ++i) rot = std::max(rot, rel(A[i], B[i]));
  rep.add(cfg, "harmonic.fh_rotation_covariance", rot, 1e-12, "F[g o R(beta)](alpha) = F[g](alpha - beta)");
  const FhResult F = fh_transform(g, nu, 128, 16);
  const FhResult Fk = fh_transform(kg_applied(g, nu, 1e-3), nu, 512, 16);
  rep.add(cfg, "harmonic.fh_annihilation", fh_norm(Fk) / fh_norm(F), 1e-4,
          "Fourier-Helgason transform annihilates (box + mu^2) g");
}

void check_magic_formula(const RunConfig& cfg, Report& rep) {
  const NuParameter nu = cfg.nu();
  const op::MagicReport m = op::magic_formula_check(nu, cfg.M_or(1024), 20);
  rep.add(cfg, "one_particle.magic_formula", m.deviation, 1e-4,
          "grid operator |r cos|^{-1} |eps| (coth(pi|eps|) - P1/sinh(pi|eps|)) = diag omega, |k| <= 20");
  rep.add(cfg, "one_particle.magic_parity", m.parity_residual, 1e-12, "grid operator commutes with psi -> pi - psi");
}

void check_propagator(const RunConfig& cfg, Report& rep) {
  using namespace kg;
  const NuParameter nu = cfg.nu();
  const int M = cfg.M_or(512);
  const WedgeGrid g = WedgeGrid::make(M);
  const EpsilonOperator e = build_epsilon(g, nu);
  double zero = 0;
  for (int j = 0; j < M; j += std::max(1, M / 16)) zero = std::max(zero, propagator(e, 0.0, j).cwiseAbs().maxCoeff());
  rep.add(cfg, "kg.propagator_t0", zero, 0.0, "E(0, psi; 0, psi') = 0");
  const Eigen::MatrixXd Kn = propagator_normal_derivative_t0(e);
  double kerr = 0;
  for (int i = 0; i < M; ++i) {
    const double w = nu.r * g.h * std::abs(g.cos_psi(i));
    for (int j = 0; j < M; ++j) kerr = std::max(kerr, std::abs(Kn(i, j) * w + (i == j ? 1.0 : 0.0)));
  }
  rep.add(cfg, "kg.normal_derivative_t0", kerr, 1e-8, "normal derivative of E at t = 0 is -delta");
  const CauchyData d = sample_data(g, [](double p) { return bump(p, 0.3, 0.5); },
                                   [](double p) { return 0.5 * bump(p, 0.2, 0.4); });
  const double q0 = conserved_charge(e, d, Charge::boost);
  double dq = 0;
  for (double t : {0.25, 0.5, 0.75, 1.0})
    dq = std::max(dq, std::abs(conserved_charge(e, cauchy_evolve(e, d, t), Charge::boost) - q0) / std::abs(q0));
  rep.add(cfg, "kg.boost_charge_conservation", dq, 1e-8, "free boost charge constant over t in [0, 1]");

  const int Mf = cfg.M_or(1024);
  const EpsilonOperator ef = build_epsilon(WedgeGrid::make(Mf, 3.0), nu);
  const CauchyData df = sample_data(ef.grid, [](double p) { return bump(p, 0.3, 0.6); },
                                    [](double p) { return 0.5 * bump(p, 0.2, 0.5); });
  const LeakageReport l = finite_speed_check(ef, df, 0.3 - 0.6, 0.3 + 0.6, 0.5);
  rep.add(cfg, "kg.finite_speed_leakage", l.leakage, 1e-4, "evolved data stays inside the light-cone interval");
  rep.add(cfg, "kg.wedge_locality", l.outside_Iplus, 1e-8, "I+ data stays in I+ under the W1 boost");
}

FockAlgebraReport fock_algebra(int K, int N, const NuParameter& nu) {
  using namespace fock;
  const FockBasis b = build_basis(K, N);
  FockAlgebraReport rep;
  std::vector<FockOperator> a, ad;
  for (int k = -K; k <= K; ++k) {
    a.push_back(ladder(b, k, Ladder::annihilate));
    ad.push_back(ladder(b, k, Ladder::create));
  }
  for (int k = 0; k < b.modes(); ++k)
    for (int l = 0; l < b.modes(); ++l) {
      const SpMat c = a[k].matrix * ad[l].matrix - ad[l].matrix * a[k].matrix;
      for (long j = 0; j < c.outerSize(); ++j) {
        if (b.total[j] > N - 1) continue;
        double diag_seen = 0;
        for (SpMat::InnerIterator it(c, j); it; ++it) {
          const cplx want = (it.row() == j && k == l) ? 1.0 : 0.0;
          if (it.row() == j) diag_seen = 1;
          rep.ccr = std::max(rep.ccr, std::abs(it.value() - want));
        }
        if (k == l && diag_seen == 0) rep.ccr = std::max(rep.ccr, 1.0);
      }
    }
  rep.ladder_vs_dgamma = 0;
  for (double alpha : {0.0, 0.3, pi / 2})
    rep.ladder_vs_dgamma = std::max(
        rep.ladder_vs_dgamma, max_abs(SpMat(free_boost(b, nu, alpha).matrix - free_boost_ladder(b, nu, alpha).matrix)));
  const SpMat L1 = free_boost(b, nu, 0.0).matrix, L2 = free_boost(b, nu, pi / 2).matrix;
  const SpMat K0 = rotation_generator(b).matrix;
  const SpMat comm = SpMat(L1 * L2) - SpMat(L2 * L1) + I * K0;
  for (long j = 0; j < comm.outerSize(); ++j) {
    if (!b.interior(j, 2, 0)) continue;
    for (SpMat::InnerIterator it(comm, j); it; ++it) rep.commutator = std::max(rep.commutator, std::abs(it.value()));
  }
  const SpMat cas = SpMat(L1 * L1) + SpMat(L2 * L2) - SpMat(K0 * K0);
  for (long j = 0; j < cas.outerSize(); ++j) {
    if (b.total[j] != 1 || !b.interior(j, 2, 0)) continue;
    for (SpMat::InnerIterator it(cas, j); it; ++it) {
      const cplx want = it.row() == j ? cplx(nu.zeta2()) : cplx(0.0);
      rep.casimir = std::max(rep.casimir, std::abs(it.value() - want));
    }
  }
  return rep;
}

void check_fock_free(const RunConfig& cfg, Report& rep) {
  using namespace fock;
  const NuParameter nu = cfg.nu();
  const int K = cfg.K_or(6), N = cfg.N_or(4);
  const FockAlgebraReport a = fock_algebra(K, N, nu);
  rep.add(cfg, "fock.ccr", a.ccr, 1e-12, "[a_k, a*_l] = delta_kl on the sector with at most N-1 particles");
  rep.add(cfg, "fock.ladder_vs_dgamma", a.ladder_vs_dgamma, 1e-12,
          "free boost as ladder products equals its second quantization");
  rep.add(cfg, "fock.boost_commutator", a.commutator, 1e-9, "[L1, L2] = -i K0 on interior states");
  rep.add(cfg, "fock.casimir", a.casimir, 1e-9, "-K0^2 + L1^2 + L2^2 = 1/4 + nu^2 on interior one-particle states");

  const FockBasis b = build_basis(K, N);
  const PolynomialInteraction P = PolynomialInteraction::parse(cfg.poly);
  const ChargeReport ch = stress_energy_charges(b, nu, P);
  rep.add(cfg, "fock.boost_charge_density", ch.l_residual, 1e-10,
          "int r^2 dpsi cos T00 equals the interacting boost generator (interior)");
  rep.add(cfg, "fock.momentum_charge_density", ch.k_residual, 1e-10,
          "-int r dpsi :pi d_psi phi: equals dGamma(k)");
  rep.add(cfg, "fock.boost_pin", std::abs(ch.l_pinned - 1.0), 1e-10, "pinned constant of the boost charge at P = 0");
  rep.add(cfg, "fock.momentum_pin", std::abs(ch.k_pinned - 1.0), 1e-10,
          "pinned constant of the momentum charge at P = 0");

  const EomReport e = eom_residual(b, nu, PolynomialInteraction{{0.0}, true}, eom_test_function(nu.r));
  rep.add(cfg, "fock.free_eom", e.residual, 1e-10, "free field equation -[L,[L,phi(h)]] + phi(eps^2 h) = 0");
  rep.add(cfg, "fock.first_commutator", e.first_commutator, 1e-10, "[L, phi(h)] = -i r pi(cos h)");
}

void check_fock_interacting(const RunConfig& cfg, Report& rep) {
  using namespace fock;
  const NuParameter nu = cfg.nu();
  const FockBasis b = build_basis(cfg.K_or(6), cfg.N_or(4));
  const PolynomialInteraction P = PolynomialInteraction::parse(cfg.poly);
  P.validate();
  const int Kh = std::max(P.degree(), 1) * b.K;
  const FockOperator Vp = interaction(b, nu, P, half_cos(+1, Kh, nu.r));
  const FockOperator Vm = interaction(b, nu, P, half_cos(-1, Kh, nu.r));
  const FockOperator V = interaction(b, nu, P, cos_alpha(0.0, 1, nu.r));
  const FockOperator JVpJ = modular_conjugate(b, Vp);
  rep.add(cfg, "fock.modular_reflection", max_abs(SpMat(JVpJ.matrix + Vm.matrix)), 1e-12,
          "J V(cos chi+) J = -V(cos chi-) for the reflection psi -> pi - psi");
  rep.add(cfg, "fock.interaction_split", max_abs(SpMat(V.matrix - Vp.matrix + JVpJ.matrix)), 1e-12,
          "V(cos) = V0 - J V0 J");
  const FockOperator L = interacting_boost(b, nu, P, 0.0);
  rep.add(cfg, "fock.boost_reflection", max_abs(SpMat(modular_conjugate(b, L).matrix + L.matrix)), 1e-12,
          "J L J = -L");
  rep.add(cfg, "fock.boost_hermitian", L.hermiticity_defect(), 1e-12, "interacting boost generator is hermitian");
  const SpMat split = boost_charge_density(b, nu, P, +1).matrix + boost_charge_density(b, nu, P, -1).matrix -
                      boost_charge_density(b, nu, P, 0).matrix;
  rep.add(cfg, "fock.boost_additivity", max_abs(split), 1e-12, "L+ + L- = L");
}

namespace {
CircleFunction bump_function(int K, double r, double c, double w) {
  return CircleFunction::sample([c, w](double p) { return cplx(kg::bump(p, c, w), 0.0); }, K, r);
}

}  // namespace

op::KmsReport kms_at(const NuParameter& nu, int K, double t) {
  return op::one_particle_kms(nu, K, t, bump_function(K, nu.r, 0.2, 0.9), bump_function(K, nu.r, -0.3, 0.8));
}

CircleFunction eom_test_function(double r) {
  CircleFunction h(1, r);
  h[0] = 1.0;
  h[1] = h[-1] = 0.3;
  return h;
}

namespace {
const std::vector<std::pair<int, int>> cutoff_ladder{{4, 3}, {6, 4}, {8, 5}};


bool strictly_decreasing(const std::vector<double>& x) {
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] < x[i - 1])) return false;
  return true;
}
}  // namespace

Trend kms_trend(const RunConfig& cfg, double t) {
  const NuParameter nu = cfg.nu();
  Trend tr;
  tr.header = {"K", "defect", "rhs_abs", "defect_ratio"};
  tr.criterion = "defect decreases by at least 2x per doubling of K";
  tr.pass = true;
  double prev = NAN;
  for (int K : {32, 64, 128}) {
    const op::KmsReport k = kms_at(nu, K, t);
    const double ratio = std::isnan(prev) ? NAN : prev / k.defect;
    if (!std::isnan(ratio) && !(ratio >= 2.0)) tr.pass = false;
    if (k.overflow) tr.pass = false;
    tr.rows.push_back({double(K), k.defect, k.rhs_abs, ratio});
    prev = k.defect;
  }
  return tr;
}

Trend eom_trend(const RunConfig& cfg) {
  const NuParameter nu = cfg.nu();
  const fock::PolynomialInteraction P = fock::PolynomialInteraction::parse(cfg.poly);
  P.validate();
  Trend tr;
  tr.header = {"K", "N", "dim", "residual", "first_commutator"};
  std::vector<double> res;
  for (auto [K, N] : cutoff_ladder) {
    const fock::FockBasis b = fock::build_basis(K, N);
    const fock::EomReport e = fock::eom_residual(b, nu, P, eom_test_function(nu.r));
    tr.rows.push_back({double(K), double(N), double(b.dim()), e.residual, e.first_commutator});
    res.push_back(e.residual);
  }
  if (P.is_zero()) {
    tr.criterion = "free residual <= 1e-10 at every cutoff";
    tr.pass = std::all_of(res.begin(), res.end(), [&](double x) { return x <= cfg.tolerance("eom.free", 1e-10); });
  } else {
    tr.criterion = "residual strictly decreasing along the cutoff ladder";
    tr.pass = strictly_decreasing(res);
  }
  return tr;
}

Trend vacuum_trend(const RunConfig& cfg) {
  const NuParameter nu = cfg.nu();
  const fock::PolynomialInteraction P = fock::PolynomialInteraction::parse(cfg.poly);
  Trend tr;
  tr.header = {"K", "N", "dim", "k0_mean", "k0_square", "log_norm", "vacuum_overlap", "krylov"};
  tr.criterion = "|<Omega, K0 Omega>| strictly decreasing along the cutoff ladder";
  std::vector<double> k0;
  for (auto [K, N] : cutoff_ladder) {
    const fock::FockBasis b = fock::build_basis(K, N);
    const fock::VacuumReport v = fock::interacting_vacuum(b, nu, P);
    tr.rows.push_back({double(K), double(N), double(b.dim()), v.k0_mean, v.k0_square, v.log_norm, v.vacuum_overlap,
                       v.krylov ? 1.0 : 0.0});
    k0.push_back(std::abs(v.k0_mean));
  }
  tr.pass = strictly_decreasing(k0);
  return tr;
}

Trend finite_speed_trend(const RunConfig& cfg, double t) {
  const NuParameter nu = cfg.nu();
  Trend tr;
  tr.header = {"M", "leakage", "outside_Iplus"};
  tr.criterion = "leakage decreasing under M doubling and <= 1e-4 at M = 1024";
  std::vector<double> leak;
  for (int M : {256, 512, 1024}) {
    const kg::EpsilonOperator e = kg::build_epsilon(kg::WedgeGrid::make(M, 3.0), nu);
    const kg::CauchyData d = kg::sample_data(e.grid, [](double p) { return kg::bump(p, 0.3, 0.6); },
                                             [](double p) { return 0.5 * kg::bump(p, 0.2, 0.5); });
    const kg::LeakageReport l = kg::finite_speed_check(e, d, 0.3 - 0.6, 0.3 + 0.6, t);
    tr.rows.push_back({double(M), l.leakage, l.outside_Iplus});
    leak.push_back(l.leakage);
  }
  tr.pass = strictly_decreasing(leak) && leak.back() <= cfg.tolerance("kg.finite_speed_leakage", 1e-4);
  return tr;
}

Trend magic_trend(const RunConfig& cfg) {
  const NuParameter nu = cfg.nu();
  Trend tr;
  tr.header = {"M", "deviation", "parity_residual"};
  tr.criterion = "deviation decreasing under M doubling and <= 1e-4 at M = 1024";
  std::vector<double> dev;
  for (int M : {256, 512, 1024}) {
    const op::MagicReport m = op::magic_formula_check(nu, M, 20);
    tr.rows.push_back({double(M), m.deviation, m.parity_residual});
    dev.push_back(m.deviation);
  }
  tr.pass = strictly_decreasing(dev) && dev.back() <= cfg.tolerance("one_particle.magic_formula", 1e-4);
  return tr;
}

Report verify_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  check_specfun(cfg, rep);
  check_dispersion(cfg, rep);
  check_legendre_coefficients(cfg, rep);
  check_kernel_form(cfg, rep);
  check_intertwiners(cfg, rep);
  check_lie_algebra(cfg, rep);
  check_two_point(cfg, rep);
  check_fourier_helgason(cfg, rep);
  check_magic_formula(cfg, rep);
  check_propagator(cfg, rep);
  check_fock_free(cfg, rep);
  check_fock_interacting(cfg, rep);
  return rep;
}

}  // namespace dscalar::cli
