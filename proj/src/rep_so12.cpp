#include "dscalar/rep_so12.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "dscalar/quadrature.hpp"
#include "dscalar/specfun.hpp"

namespace dscalar::rep {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

cplx intertwiner_coeff(const NuParameter& nu, int k) {
  const cplx inu = I * nu.nu;
  const double kk = std::abs(k);
  return specfun::gamma_ratio(0.5, inu, -inu) * specfun::gamma_ratio(kk + 0.5, -inu, inu);
}

cplx intertwiner_kernel(const NuParameter& nu, double alpha) {
  const double s = std::sin(0.5 * alpha);
  const double s2 = s * s;
  if (s2 == 0.0) throw pole_error("intertwiner_kernel: singular at alpha = 0 mod 2pi");
  const cplx inu = I * nu.nu;
  const cplx pref = pi * specfun::gamma(0.5 + inu) * specfun::rgamma(inu) / std::sqrt(pi);
  return pref * std::pow(s2, -0.5 + inu);
}

cplx intertwiner_kernel_fourier(const NuParameter& nu, int k, int n) {
  const cplx inu = I * nu.nu;
  if (!(inu.real() > 0.0) || std::abs(inu.imag()) > 1e-14)
    throw std::domain_error("intertwiner_kernel_fourier: needs i nu real and positive");
  const double t = inu.real();
  const int kk = std::abs(k);
  if (n <= 0) n = kk / 2 + 8;
  // int_0^1 u^{t-1} (1-u)^{-1/2} T_k(1-2u) du with u = (1+x)/2
  const double a = -0.5, b = t - 1.0;
  const quad::Rule gj = quad::gauss_jacobi(n, a, b);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = -gj.x(i);
    acc += gj.w(i) * std::cos(kk * std::acos(std::clamp(y, -1.0, 1.0)));
  }
  acc *= std::pow(2.0, -(a + b + 1.0));
  const cplx C = pi * specfun::gamma(0.5 + inu) * specfun::rgamma(inu) / std::sqrt(pi);
  return C / pi * acc;
}

cplx rep_inner(const NuParameter& nu, const CircleFunction& h1, const CircleFunction& h2) {
  cplx acc = 0.0;
  const bool comp = nu.series == Series::complementary;
  for (int k = -h1.K; k <= h1.K; ++k) {
    const cplx w = comp ? intertwiner_coeff(nu, k) : cplx(1.0);
    acc += std::conj(h1[k]) * w * h2[k];
  }
  return acc;
}

BoostResult boost_action_circle(const NuParameter& nu, double s, const CircleFunction& h, int grid) {
  if (grid < 8 * h.K) throw std::invalid_argument("boost_action_circle: grid must be >= 8K");
  const double ch = std::cosh(s), sh = std::sinh(s);
  const cplx expo = -0.5 - I * nu.nu;
  auto out = [&](double a) {
    const double den = ch - sh * std::sin(a);
    const cplx e2 = cplx(std::cos(a), ch * std::sin(a) - sh) / den;
    return std::exp(expo * std::log(den)) * h.eval(std::arg(e2));
  };
  BoostResult res;
  res.h = CircleFunction::sample(out, h.K, h.r, grid);
  res.h.norm = h.norm;
  double top = 0.0, tot = res.h.coeffs.squaredNorm();
  for (int k = -h.K; k <= h.K; ++k)
    if (4 * std::abs(k) > 3 * h.K) top += std::norm(res.h[k]);
  res.top_quarter_fraction = tot > 0 ? top / tot : 0.0;
  res.aliasing_warning = res.top_quarter_fraction > 1e-6;
  return res;
}

CircleFunction time_reflection(const NuParameter& nu, const CircleFunction& h) {
  CircleFunction out(h.K, h.r);
  out.norm = h.norm;
  const bool principal = nu.series == Series::principal;
  for (int m = -h.K; m <= h.K; ++m) {
    const cplx c = principal ? intertwiner_coeff(nu, m) : cplx(1.0);
    out[m] = std::conj(c * h[-m]) * ((m % 2 == 0) ? 1.0 : -1.0);
  }
  return out;
}

GeneratorTriple build_generators(const NuParameter& nu, int K) {
  if (K < 2) throw std::invalid_argument("build_generators: K must be >= 2");
  const op::DispersionTable d = op::dispersion(nu, K);
  const int n = 2 * K + 1;
  GeneratorTriple g;
  g.K = K;
  g.K0 = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd Lp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) g.K0(i, i) = double(i - K);
  for (int i = 0; i + 1 < n; ++i) Lp(i + 1, i) = nu.r * std::sqrt(d.omega(i) * d.omega(i + 1));
  const Eigen::MatrixXcd Lm = Lp.adjoint();
  g.L1 = 0.5 * (Lp + Lm);
  g.L2 = (Lp - Lm) / (2.0 * I);
  return g;
}

Eigen::MatrixXcd rotated_boost(const GeneratorTriple& g, double alpha) {
  return std::cos(alpha) * g.L1 + std::sin(alpha) * g.L2;
}

Eigen::MatrixXcd to_l2_basis(const Eigen::MatrixXcd& G, const op::DispersionTable& d) {
  const Eigen::VectorXd D = (2.0 * d.omega.array()).sqrt().matrix();
  return D.asDiagonal() * G * D.cwiseInverse().asDiagonal();
}

Eigen::MatrixXcd exponentiate_generator(const Eigen::MatrixXcd& G, cplx t) {
  if (G.rows() != G.cols()) throw std::invalid_argument("exponentiate_generator: G must be square");
  const Eigen::MatrixXcd X = (I * t) * G;
  if (!X.allFinite()) throw OverflowError("exponentiate_generator: non-finite generator");
  const Eigen::MatrixXcd E = X.exp();
  if (!E.allFinite() || E.norm() > 1e15) throw OverflowError("exponentiate_generator: norm exceeds 1e15");
  return E;
}

double RelationReport::max() const {
  return std::max({k0_l1, k0_l2, l1_l2, casimir, rotation, hermitian});
}

RelationReport group_relation_check(const NuParameter& nu, int K, int samples) {
  const GeneratorTriple g = build_generators(nu, K);
  const int n = 2 * K + 1;
  const auto interior = [&](const Eigen::MatrixXcd& M) {
    return M.block(2, 2, n - 4, n - 4).cwiseAbs().maxCoeff();
  };
  RelationReport rep;
  rep.k0_l1 = interior(g.K0 * g.L1 - g.L1 * g.K0 - I * g.L2);
  rep.k0_l2 = interior(g.K0 * g.L2 - g.L2 * g.K0 + I * g.L1);
  rep.l1_l2 = interior(g.L1 * g.L2 - g.L2 * g.L1 + I * g.K0);
  const Eigen::MatrixXcd C = -g.K0 * g.K0 + g.L1 * g.L1 + g.L2 * g.L2 -
                             nu.zeta2() * Eigen::MatrixXcd::Identity(n, n);
  rep.casimir = interior(C);
  for (int j = 0; j < samples; ++j) {
    const double a = 2.0 * pi * j / std::max(samples, 1);
    Eigen::VectorXcd ph(n);
    for (int i = 0; i < n; ++i) ph(i) = std::exp(cplx(0, -a * (i - K)));
    const Eigen::MatrixXcd R = ph.asDiagonal() * g.L1 * ph.conjugate().asDiagonal();
    rep.rotation = std::max(rep.rotation, (R - rotated_boost(g, a)).cwiseAbs().maxCoeff());
  }
  const op::DispersionTable d = op::dispersion(nu, K);
  const Eigen::VectorXd W = (0.5 / d.omega.array()).matrix();
  for (const Eigen::MatrixXcd* G : {&g.L1, &g.L2, &g.K0}) {
    const Eigen::MatrixXcd WG = W.asDiagonal() * to_l2_basis(*G, d);
    rep.hermitian = std::max(rep.hermitian, (WG - WG.adjoint()).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace dscalar::rep
