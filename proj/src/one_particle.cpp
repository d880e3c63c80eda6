#include "dscalar/one_particle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "dscalar/quadrature.hpp"
#include "dscalar/specfun.hpp"

namespace dscalar::op {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// sin^6 grading on t in (0, 1/2): psi(t) = 2 pi S(t) in (0, pi), S(t) = (16/5) int_0^t sin^6(pi tau) dtau.
// S is integrated by Gauss-Legendre on [0, t] so that psi keeps full relative accuracy as t -> 0.
struct GradedHalf {
  std::vector<double> psi, w;
};

GradedHalf graded_half(int Q) {
  static const quad::Rule gl = quad::gauss_legendre(20);
  GradedHalf g;
  const int half = Q / 2;
  for (int j = 0; j < half; ++j) {
    const double t = (j + 0.5) / Q;
    double S = 0.0;
    for (int i = 0; i < gl.x.size(); ++i) {
      const double tau = 0.5 * t * (gl.x(i) + 1.0);
      S += 0.5 * t * gl.w(i) * std::pow(std::sin(pi * tau), 6);
    }
    S *= 3.2;
    g.psi.push_back(2.0 * pi * S);
    g.w.push_back(2.0 * pi * 3.2 * std::pow(std::sin(pi * t), 6) / Q);
  }
  return g;
}

double sin2half(double psi) {
  const double s = std::sin(0.5 * psi);
  return s * s;
}

Eigen::VectorXd symmetric_exp(const Eigen::VectorXd& lam, double theta) {
  return (-theta * lam.array()).exp().matrix();
}

}  // namespace

double omega_tilde(const NuParameter& nu, int k) {
  const double kk = std::abs(k);
  const cplx s = nu.s_plus();
  const cplx v = (kk + s) / nu.r * specfun::gamma_ratio(0.5 * kk, 0.5 * s, -0.5 * s) *
                 specfun::gamma_ratio(0.5 * (kk + 1.0), -0.5 * s, 0.5 * s);
  return v.real();
}

DispersionTable dispersion(const NuParameter& nu, int K) {
  if (K < 0) throw std::invalid_argument("dispersion: K must be non-negative");
  DispersionTable d;
  d.nu = nu;
  d.K = K;
  d.omega.resize(2 * K + 1);
  for (int k = 0; k <= K; ++k) {
    const double w = omega_tilde(nu, k);
    if (!(w > 0.0)) throw pole_error("dispersion: non-positive omega~");
    d.omega(K + k) = d.omega(K - k) = w;
  }
  return d;
}

double legendre_fourier_coeff(const NuParameter& nu, int k) {
  const double kk = std::abs(k);
  const cplx s = nu.s_plus();
  const cplx v = -std::sin(pi * s) / pi / (kk + s) * specfun::gamma_ratio(0.5 * kk, -0.5 * s, 0.5 * s) *
                 specfun::gamma_ratio(0.5 * (kk + 1.0), 0.5 * s, -0.5 * s);
  return v.real();
}

double legendre_fourier_quadrature(const NuParameter& nu, int k, int Q) {
  const GradedHalf g = graded_half(Q);
  const cplx s = nu.s_plus();
  double acc = 0.0;
  for (size_t j = 0; j < g.psi.size(); ++j)
    acc += g.w[j] * specfun::legendre_p_x2(s, sin2half(g.psi[j])).real() * std::cos(k * g.psi[j]);
  return acc / pi;
}

double legendre_prime_fourier_quadrature(const NuParameter& nu, int k, int Q) {
  const GradedHalf g = graded_half(Q);
  const cplx s = nu.s_plus();
  double acc = 0.0;
  for (size_t j = 0; j < g.psi.size(); ++j)
    acc += g.w[j] * specfun::legendre_p_prime_remainder(s, sin2half(g.psi[j])).real() * std::cos(k * g.psi[j]);
  const double pole = (std::sin(pi * s) / pi).real();
  return acc / pi - pole * std::abs(k);
}

cplx hhat_inner(const CircleFunction& h1, const CircleFunction& h2, const DispersionTable& d) {
  if (h1.K != h2.K) throw std::invalid_argument("hhat_inner: cutoffs differ");
  if (d.K < h1.K) throw std::invalid_argument("hhat_inner: dispersion table too short");
  cplx acc = 0.0;
  for (int k = -h1.K; k <= h1.K; ++k) acc += std::conj(h1[k]) * h2[k] / (2.0 * d(k));
  return acc;
}

cplx hhat_inner(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu) {
  return hhat_inner(h1, h2, dispersion(nu, h1.K));
}

namespace {

// int int conj(h1(psi' + D)) F(D) h2(psi') dD dpsi' with F sampled on the graded nodes
cplx graded_double_integral(const CircleFunction& h1, const CircleFunction& h2, const GradedHalf& g,
                            const std::vector<double>& F, int Q_outer) {
  const int K = h1.K;
  const double nrm = 1.0 / (2.0 * pi * h1.r);
  cplx total = 0.0;
  const double dpo = 2.0 * pi / Q_outer;
  for (int a = 0; a < Q_outer; ++a) {
    const double p0 = -pi + a * dpo;
    const cplx h2v = h2.eval(p0);
    cplx inner = 0.0;
    for (size_t j = 0; j < g.psi.size(); ++j) {
      for (int sg : {1, -1}) {
        const double p = p0 + sg * g.psi[j];
        const cplx step = std::exp(cplx(0, -p));
        cplx e = std::exp(cplx(0, K * p));
        cplx h1c = 0.0;
        for (int k = -K; k <= K; ++k) {
          h1c += std::conj(h1[k]) * e;
          e *= step;
        }
        inner += g.w[j] * F[j] * h1c;
      }
    }
    total += dpo * inner * h2v;
  }
  // h1c carried conj(h1_k) e^{-ik p}; eval() normalizations folded in here
  return total * std::sqrt(nrm);
}

}  // namespace

cplx hhat_inner_kernel(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu, int Q_outer,
                       int Q_inner) {
  const GradedHalf g = graded_half(Q_inner);
  const cplx s = nu.s_plus();
  std::vector<double> F(g.psi.size());
  for (size_t j = 0; j < F.size(); ++j) F[j] = specfun::legendre_p_x2(s, sin2half(g.psi[j])).real();
  const double r = nu.r;
  return kernel_constant * nu.c_nu() * r * r * graded_double_integral(h1, h2, g, F, Q_outer);
}

cplx derivative_kernel_form(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu,
                            int Q_outer, int Q_inner) {
  const GradedHalf g = graded_half(Q_inner);
  const cplx s = nu.s_plus();
  std::vector<double> F(g.psi.size());
  for (size_t j = 0; j < F.size(); ++j)
    F[j] = specfun::legendre_p_prime_remainder(s, sin2half(g.psi[j])).real();
  cplx regular = graded_double_integral(h1, h2, g, F, Q_outer);
  // finite part of int e^{-ik D} / (2 sin^2(D/2)) dD is -2 pi |k|
  const double pole = (std::sin(pi * s) / pi).real();
  cplx singular = 0.0;
  for (int k = -h1.K; k <= h1.K; ++k)
    singular += std::conj(h1[k]) * h2[k] * (2.0 * pi) * (-std::abs(double(k)));
  singular *= pole / h1.r;
  const double r = nu.r;
  return kernel_constant * nu.c_nu() * r * r * (regular + singular);
}

Eigen::VectorXcd to_hhat_basis(const CircleFunction& h, const DispersionTable& d) {
  Eigen::VectorXcd b(2 * h.K + 1);
  for (int k = -h.K; k <= h.K; ++k) b(k + h.K) = h[k] / std::sqrt(2.0 * d(k));
  return b;
}

CircleFunction from_hhat_basis(const Eigen::VectorXcd& b, const DispersionTable& d) {
  const int K = (int(b.size()) - 1) / 2;
  CircleFunction h(K, d.nu.r);
  for (int k = -K; k <= K; ++k) h[k] = b(k + K) * std::sqrt(2.0 * d(k));
  return h;
}

Eigen::MatrixXd cos_matrix(int K) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * K + 1, 2 * K + 1);
  for (int i = 0; i < 2 * K; ++i) C(i, i + 1) = C(i + 1, i) = 0.5;
  return C;
}

Eigen::MatrixXd boost_generator_hhat(const DispersionTable& d) {
  const int K = d.K;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * K + 1, 2 * K + 1);
  for (int i = 0; i < 2 * K; ++i)
    A(i, i + 1) = A(i + 1, i) = 0.5 * d.nu.r * std::sqrt(d.omega(i) * d.omega(i + 1));
  return A;
}

cplx time_shift_covariance(const CircleFunction& h1, const CircleFunction& h2, double theta,
                           const NuParameter& nu) {
  const DispersionTable d = dispersion(nu, h1.K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(boost_generator_hhat(d));
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
  const Eigen::VectorXcd a = V.adjoint() * to_hhat_basis(h1, d);
  const Eigen::VectorXcd b = V.adjoint() * to_hhat_basis(h2, d);
  const Eigen::VectorXd e = symmetric_exp(es.eigenvalues(), theta);
  cplx acc = 0.0;
  for (int i = 0; i < e.size(); ++i) acc += std::conj(a(i)) * e(i) * b(i);
  return acc;
}

double time_shift_covariance_eps(const kg::EpsilonOperator& eps, const std::function<double(double)>& f1,
                                 const std::function<double(double)>& f2, double theta) {
  const auto& g = eps.grid;
  const int n = g.n;
  const double r = eps.nu.r;
  Eigen::VectorXd v1(n), v2(n);
  for (int j = 0; j < n; ++j) {
    v1(j) = g.cos_psi(j) * f1(g.psi(j));
    v2(j) = g.cos_psi(j) * f2(g.psi(j));
  }
  auto G = [theta](double x) {
    // cosh((pi - theta) x) / (2 x sinh(pi x)) without overflow
    return std::exp(-theta * x) * (1.0 + std::exp(-2.0 * (pi - theta) * x)) / (1.0 - std::exp(-2.0 * pi * x)) /
           (2.0 * x);
  };
  return r * r * g.h * v1.dot(eps.apply_half(G, v2, +1));
}

MagicReport magic_formula_check(const NuParameter& nu, int M, int Kcmp) {
  if (M < 256) throw std::invalid_argument("magic_formula_check: M must be >= 256");
  const auto grid = kg::WedgeGrid::make(M);
  const auto eps = kg::build_epsilon(grid, nu);
  const int n = grid.n;
  const double r = nu.r, z2 = nu.zeta2(), h = grid.h;
  const Eigen::VectorXd x = eps.lam.cwiseMax(0.0).cwiseSqrt();

  MagicReport rep;
  rep.smallest_eps = x.minCoeff();

  // even/odd parts under psi -> pi - psi: W acts as |eps| tanh(pi|eps|/2) resp. |eps| coth(pi|eps|/2)
  Eigen::VectorXd phi(n), fplus(n);
  for (int i = 0; i < n; ++i) {
    phi(i) = std::tanh(0.5 * pi * x(i)) / x(i);
    fplus(i) = x(i) / std::tanh(0.5 * pi * x(i));
  }
  const Eigen::MatrixXcd Phi = (eps.V * phi.asDiagonal() * eps.V.transpose()).cast<cplx>();
  const Eigen::MatrixXcd Fp = (eps.V * fplus.asDiagonal() * eps.V.transpose()).cast<cplx>();

  const int nk = 2 * Kcmp + 1;
  Eigen::MatrixXcd al(n, nk), bl(n, nk), A(n, nk), B(n, nk);
  for (int c = 0; c < nk; ++c) {
    const int k = c - Kcmp;
    Eigen::VectorXcd e2even(n);
    for (int j = 0; j < n; ++j) {
      const double p = grid.psi(j), q = pi - p;
      auto e = [k](double ps) { return std::exp(cplx(0, k * ps)); };
      auto eps2e = [&](double ps) {
        const double c_ = std::cos(ps), s_ = std::sin(ps);
        return (-(I * double(k) * c_ * (-s_ + I * double(k) * c_)) + z2 * c_ * c_) * e(ps);
      };
      al(j, c) = 0.5 * (e(p) + e(q));
      bl(j, c) = 0.5 * (e(p) - e(q));
      e2even(j) = 0.5 * (eps2e(p) + eps2e(q));
    }
    A.col(c) = Phi * e2even;
    B.col(c) = Fp * bl.col(c);
  }
  const Eigen::MatrixXcd W = (al.adjoint() * A + bl.adjoint() * B) * (2.0 * h / (2.0 * pi * r));
  const DispersionTable d = dispersion(nu, Kcmp);
  for (int c = 0; c < nk; ++c)
    for (int l = 0; l < nk; ++l) {
      const double ref = c == l ? d.omega(c) : 0.0;
      rep.deviation = std::max(rep.deviation, std::abs(W(l, c) - ref) / d.omega(l));
    }

  // full grid operator and its parity commutator
  Eigen::VectorXd ac(n), bc(n);
  for (int i = 0; i < n; ++i) {
    ac(i) = x(i) / std::tanh(pi * x(i));
    bc(i) = x(i) / std::sinh(pi * x(i));
  }
  const Eigen::MatrixXd Ab = eps.V * ac.asDiagonal() * eps.V.transpose();
  const Eigen::MatrixXd Bb = eps.V * bc.asDiagonal() * eps.V.transpose();
  Eigen::MatrixXd Wg(2 * n, 2 * n);
  Wg << Ab, -Bb, -Bb, Ab;
  for (int i = 0; i < 2 * n; ++i) Wg.row(i) /= r * std::abs(grid.cos_psi(i));
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) P(j, n + j) = P(n + j, j) = 1.0;
  rep.parity_residual = (P * Wg * P - Wg).norm() / Wg.norm();
  return rep;
}

SharpTimeReport sharp_time_embed(const CircleFunction& h1, const CircleFunction& h2, const NuParameter& nu,
                                 int Q_outer, int Q_inner) {
  if (!h1.is_real() || !h2.is_real()) throw std::invalid_argument("sharp_time_embed: h1, h2 must be real");
  const DispersionTable d = dispersion(nu, h1.K);
  CircleFunction v(h1.K, h1.r);
  for (int k = -h1.K; k <= h1.K; ++k) v[k] = h1[k] + I * nu.r * d(k) * h2[k];
  SharpTimeReport rep;
  rep.hhat_norm2 = hhat_inner(v, v, d).real();
  rep.covariant = (hhat_inner_kernel(h1, h1, nu, Q_outer, Q_inner) +
                   derivative_kernel_form(h2, h2, nu, Q_outer, Q_inner))
                      .real();
  return rep;
}

KmsReport one_particle_kms(const NuParameter& nu, int K, double t, const CircleFunction& f,
                           const CircleFunction& g) {
  const DispersionTable d = dispersion(nu, K);
  CircleFunction fk(K, nu.r), gk(K, nu.r);
  for (int k = -K; k <= K; ++k) {
    fk[k] = f[k];
    gk[k] = g[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(boost_generator_hhat(d));
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
  const Eigen::VectorXcd fe = V.adjoint() * to_hhat_basis(fk, d);
  const Eigen::VectorXcd ge = V.adjoint() * to_hhat_basis(gk, d);
  KmsReport rep;
  rep.lambda_min = lam.minCoeff();
  rep.lambda_max = lam.maxCoeff();
  cplx lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    const cplx u = std::exp(cplx(0, lam(i) * t));
    rhs += std::conj(u * ge(i)) * fe(i);
    if (std::abs(fe(i)) == 0.0 || std::abs(ge(i)) == 0.0) continue;
    if (-2.0 * pi * lam(i) > 700.0) {
      rep.overflow = true;
      continue;
    }
    lhs += std::conj(fe(i)) * u * std::exp(-2.0 * pi * lam(i)) * ge(i);
  }
  rep.rhs_abs = std::abs(rhs);
  rep.defect = rep.overflow ? std::numeric_limits<double>::infinity() : std::abs(lhs - rhs);
  return rep;
}

namespace {

// orthonormal P_lm(x) for 0 <= m <= l <= L, stored as P[m][l - m]
std::vector<std::vector<double>> normalized_alf(int L, double x) {
  std::vector<std::vector<double>> P(L + 1);
  const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = std::sqrt(1.0 / (4.0 * pi));
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx;
    auto& row = P[m];
    row.resize(L - m + 1);
    row[0] = pmm;
    if (m < L) row[1] = x * std::sqrt(2.0 * m + 3.0) * pmm;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt((2.0 * l + 1.0) * ((l - 1.0) * (l - 1.0) - double(m) * m) /
                                 ((2.0 * l - 3.0) * (double(l) * l - double(m) * m)));
      row[l - m] = a * x * row[l - 1 - m] - b * row[l - 2 - m];
    }
  }
  return P;
}

// f_lm = int dOmega conj(Y_lm) f for m >= 0
std::vector<std::vector<cplx>> sphere_coeffs(const SphereFunction& f, int L) {
  const int nt = 2 * L + 2, np = 4 * L + 4;
  const quad::Rule gl = quad::gauss_legendre(nt);
  std::vector<std::vector<cplx>> c(L + 1);
  for (int m = 0; m <= L; ++m) c[m].assign(L - m + 1, 0.0);
  for (int i = 0; i < nt; ++i) {
    const double x = gl.x(i), th = std::acos(x);
    const auto P = normalized_alf(L, x);
    std::vector<cplx> fm(L + 1, 0.0);
    for (int j = 0; j < np; ++j) {
      const double ph = 2.0 * pi * j / np;
      const double v = f(th, ph);
      for (int m = 0; m <= L; ++m) fm[m] += v * std::exp(cplx(0, -m * ph));
    }
    for (int m = 0; m <= L; ++m)
      for (int l = m; l <= L; ++l) c[m][l - m] += gl.w(i) * (2.0 * pi / np) * P[m][l - m] * fm[m];
  }
  return c;
}

}  // namespace

SphereReport sphere_covariance(const SphereFunction& f, const SphereFunction& g, const NuParameter& nu,
                               int Lmax) {
  if (Lmax < 8) throw std::invalid_argument("sphere_covariance: Lmax must be >= 8");
  const auto fc = sphere_coeffs(f, Lmax), gc = sphere_coeffs(g, Lmax);
  const double r = nu.r, z2 = nu.zeta2();
  const cplx s = nu.s_plus();
  // Funk-Hecke eigenvalues 2 pi int P_s(-t) P_l(t) dt, with x2 = (1 - t)/2
  std::vector<double> lamFH(Lmax + 1);
  {
    for (int l = 0; l <= Lmax; ++l) {
      auto integrand = [&](double x2, double dist) -> cplx {
        const double xe = x2 < 0.5 ? dist : x2;
        const double t = 1.0 - 2.0 * xe;
        double p0 = 1.0, p1 = t;
        if (l == 0) p1 = 1.0;
        for (int j = 2; j <= l; ++j) {
          const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        return specfun::legendre_p_x2(s, xe) * p1;
      };
      lamFH[l] = (4.0 * pi * quad::tanh_sinh(integrand, 0.0, 1.0, 8)).real();
    }
  }
  SphereReport rep;
  double tail = 0.0;
  const double cn = nu.c_nu().real();
  for (int l = 0; l <= Lmax; ++l) {
    double acc = 0.0;
    for (int m = 0; m <= l; ++m) {
      const double w = (std::conj(fc[m][l - m]) * gc[m][l - m]).real();
      acc += m == 0 ? w : 2.0 * w;
    }
    const double ms = std::pow(r, 4) * acc / (l * (l + 1.0) + z2);
    rep.mode_sum += ms;
    rep.kernel_form += std::pow(r, 4) * 0.5 * cn * lamFH[l] * acc;
    if (l > Lmax / 2) tail += ms;
  }
  rep.tail_fraction = std::abs(rep.mode_sum) > 0 ? std::abs(tail / rep.mode_sum) : 0.0;
  return rep;
}

double time_zero_restriction(const CircleFunction& h, const NuParameter& nu, int L) {
  const double z2 = nu.zeta2();
  auto partial = [&](int m, int Lc) {
    // sum over l >= m, l - m even, of Ybar_lm(pi/2)^2 / (l(l+1) + zeta^2)
    long double acc = 0.0L;
    for (int l = m; l <= Lc; l += 2) {
      const double lg = std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0) +
                        2.0 * (m * std::log(2.0) + std::lgamma(0.5 * (l + m + 1.0)) - 0.5 * std::log(pi) -
                               std::lgamma(0.5 * (l - m) + 1.0));
      const double y2 = (2.0 * l + 1.0) / (4.0 * pi) * std::exp(lg);
      acc += y2 / (l * (l + 1.0) + z2);
    }
    return double(acc);
  };
  double total = 0.0;
  for (int m = -h.K; m <= h.K; ++m) {
    const double w2 = std::norm(h[m]);
    if (w2 == 0.0) continue;
    const int am = std::abs(m);
    const double S = 2.0 * partial(am, 2 * L) - partial(am, L);
    total += w2 * S;
  }
  return 2.0 * pi * nu.r * total;
}

}  // namespace dscalar::op
