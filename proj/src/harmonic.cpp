#include "dscalar/harmonic.hpp"

#include <cmath>
#include <numbers>

#include "dscalar/quadrature.hpp"

namespace dscalar::harm {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

cplx dot(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
  return a(0) * b(0) - a(1) * b(1) - a(2) * b(2);
}

DeSitterPoint DeSitterPoint::chart(double x0, double psi, double r) {
  const double rho = std::hypot(r, x0);
  DeSitterPoint p;
  p.x = Eigen::Vector3cd(x0, rho * std::sin(psi), rho * std::cos(psi));
  return p;
}

DeSitterPoint DeSitterPoint::tuboid(const Eigen::Matrix3d& Lambda, double eta, double r, int sign) {
  const double sg = sign >= 0 ? 1.0 : -1.0;
  DeSitterPoint p;
  p.x = Lambda.cast<cplx>() * Eigen::Vector3cd(sg * I * r * std::sin(eta), 0.0, r * std::cos(eta));
  return p;
}

double DeSitterPoint::constraint_residual(double r) const { return std::abs(dot(x, x) + r * r) / (r * r); }

Eigen::Vector3d LightconePoint::vec() const {
  return Eigen::Vector3d(p0, p0 * std::sin(alpha), -p0 * std::cos(alpha));
}

Eigen::Matrix3d boost1(double t) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = std::cosh(t);
  m(0, 1) = m(1, 0) = std::sinh(t);
  return m;
}

Eigen::Matrix3d boost2(double t) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(2, 2) = std::cosh(t);
  m(0, 2) = m(2, 0) = std::sinh(t);
  return m;
}

Eigen::Matrix3d rotation0(double a) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(1, 1) = m(2, 2) = std::cos(a);
  m(1, 2) = -std::sin(a);
  m(2, 1) = std::sin(a);
  return m;
}

Eigen::Matrix3d random_lorentz(std::mt19937_64& rng, double max_rapidity) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi), rap(-max_rapidity, max_rapidity);
  return rotation0(ang(rng)) * boost2(rap(rng)) * rotation0(ang(rng)) * boost1(rap(rng));
}

PlaneWave plane_wave_from_dot(double xp, cplx s, int branch) {
  if (s.real() <= -1.0) throw std::domain_error("plane_wave: Re s <= -1 is not locally integrable");
  PlaneWave w;
  if (xp == 0.0) {
    if (s.real() > 0.0) {
      w.value = 0.0;
    } else {
      w.singular = true;
      w.value = cplx(NAN, NAN);
    }
    return w;
  }
  const cplx mag = std::exp(s * std::log(std::abs(xp)));
  w.value = xp < 0.0 ? mag : std::exp((branch >= 0 ? 1.0 : -1.0) * I * pi * s) * mag;
  return w;
}

PlaneWave plane_wave(const DeSitterPoint& x, const LightconePoint& p, cplx s, int branch) {
  const cplx xp = dot(x.x, p.vec().cast<cplx>());
  if (std::abs(xp.imag()) > 1e-12 * (1.0 + std::abs(xp.real())))
    throw std::domain_error("plane_wave: x must be a real point");
  return plane_wave_from_dot(xp.real(), s, branch);
}

cplx kg_operator_fd(const std::function<cplx(double, double)>& u, double x0, double psi, const NuParameter& nu,
                    double h) {
  const double r = nu.r;
  auto a = [r](double x) { return (r * r + x * x) / (r * r); };
  // d/dx0 (a u_x0) in conservative fourth-order form: a u'' + a' u'
  auto d1 = [&](double x, double p) {
    return (-u(x + 2 * h, p) + 8.0 * u(x + h, p) - 8.0 * u(x - h, p) + u(x - 2 * h, p)) / (12.0 * h);
  };
  auto d2x = [&](double x, double p) {
    return (-u(x + 2 * h, p) + 16.0 * u(x + h, p) - 30.0 * u(x, p) + 16.0 * u(x - h, p) - u(x - 2 * h, p)) /
           (12.0 * h * h);
  };
  auto d2p = [&](double x, double p) {
    return (-u(x, p + 2 * h) + 16.0 * u(x, p + h) - 30.0 * u(x, p) + 16.0 * u(x, p - h) - u(x, p - 2 * h)) /
           (12.0 * h * h);
  };
  const double rho2 = r * r + x0 * x0;
  const cplx box = a(x0) * d2x(x0, psi) + (2.0 * x0 / (r * r)) * d1(x0, psi) - d2p(x0, psi) / rho2;
  return box + nu.mu * nu.mu * u(x0, psi);
}

ChartFunction kg_applied(const ChartFunction& g, const NuParameter& nu, double h) {
  ChartFunction out;
  out.x0_min = g.x0_min;
  out.x0_max = g.x0_max;
  auto f = g.f;
  out.f = [f, nu, h](double x0, double psi) {
    auto u = [&f](double x, double p) { return cplx(f(x, p), 0.0); };
    return kg_operator_fd(u, x0, psi, nu, h).real();
  };
  return out;
}

std::vector<cplx> fh_evaluate(const ChartFunction& f, const NuParameter& nu, int Q, const std::vector<double>& alphas) {
  const double r = nu.r;
  const cplx s = nu.s_plus();
  const cplx norm = std::sqrt(nu.c_nu() * std::exp(-pi * nu.nu) * r / pi);
  std::vector<cplx> out;
  const double lo = f.x0_min, hi = f.x0_max;
  for (double alpha : alphas) {
    cplx total = 0.0;
    for (int j = 0; j < Q; ++j) {
      const double psi = 2.0 * pi * j / Q;
      const double c = std::cos(psi + alpha), sn = std::sin(psi + alpha);
      auto xp_plain = [&](double x0) { return x0 + c * std::hypot(r, x0); };
      cplx line = 0.0;
      double xs = NAN;
      if (std::abs(sn) > 1e-300) xs = -c * r / std::abs(sn);
      if (std::isfinite(xs) && xs > lo && xs < hi) {
        const double rs = std::hypot(r, xs);
        // x.p at xs + d without cancellation
        auto xp_near = [&](double d) {
          const double rd = std::hypot(r, xs + d);
          return d + c * (2.0 * xs * d + d * d) / (rd + rs);
        };
        auto seg = [&](double a, double b, int side) {
          return quad::tanh_sinh(
              [&](double x0, double dist) -> cplx {
                const bool near_star = side < 0 ? (b - x0) < (x0 - a) : (x0 - a) < (b - x0);
                const double xp = near_star ? xp_near(side < 0 ? -dist : dist) : xp_plain(x0);
                const double fv = f.f(x0, psi);
                if (fv == 0.0) return 0.0;
                return fv * plane_wave_from_dot(xp, s, +1).value;
              },
              a, b, 6);
        };
        line = seg(lo, xs, -1) + seg(xs, hi, +1);
      } else {
        line = quad::tanh_sinh(
            [&](double x0, double) -> cplx {
              const double fv = f.f(x0, psi);
              if (fv == 0.0) return 0.0;
              return fv * plane_wave_from_dot(xp_plain(x0), s, +1).value;
            },
            lo, hi, 6);
      }
      total += line;
    }
    out.push_back(norm * r * (2.0 * pi / Q) * total);
  }
  return out;
}

FhResult fh_transform(const ChartFunction& f, const NuParameter& nu, int quad_points, int n_alpha) {
  if (quad_points < 64) throw std::invalid_argument("fh_transform: quad_points must be >= 64");
  FhResult res;
  for (int j = 0; j < n_alpha; ++j) res.alpha.push_back(2.0 * pi * j / n_alpha);
  res.value = fh_evaluate(f, nu, quad_points, res.alpha);
  const std::vector<cplx> fine = fh_evaluate(f, nu, 2 * quad_points, res.alpha);
  double dmax = 0.0, vmax = 0.0;
  for (size_t j = 0; j < fine.size(); ++j) {
    dmax = std::max(dmax, std::abs(fine[j] - res.value[j]));
    vmax = std::max(vmax, std::abs(fine[j]));
  }
  res.doubling_change = vmax > 0 ? dmax / vmax : dmax;
  res.quadrature_warning = res.doubling_change > 1e-4;
  return res;
}

double fh_norm(const FhResult& r) {
  double acc = 0.0;
  for (const cplx& v : r.value) acc += std::norm(v);
  return std::sqrt(acc / double(r.value.size()));
}

cplx two_point_contour(const DeSitterPoint& z1, const DeSitterPoint& z2, const NuParameter& nu, int quad_points) {
  const cplx sp = nu.s_plus(), sm = nu.s_minus();
  cplx acc = 0.0;
  for (int j = 0; j < quad_points; ++j) {
    const LightconePoint p{2.0 * pi * j / quad_points, 1.0};
    const Eigen::Vector3cd pv = p.vec().cast<cplx>();
    const cplx a = -dot(z1.x, pv), b = -dot(pv, z2.x);
    acc += std::exp(sm * std::log(a) + sp * std::log(b));
  }
  const cplx pref = nu.c_nu() * std::exp(-pi * nu.nu) * nu.r / pi;
  return pref * acc * (2.0 * pi / quad_points) * 0.5;
}

cplx two_point_legendre(const DeSitterPoint& z1, const DeSitterPoint& z2, const NuParameter& nu,
                        specfun::Branch branch) {
  const cplx z = dot(z1.x, z2.x) / (nu.r * nu.r);
  return nu.c_nu() * specfun::legendre_p(nu.s_plus(), specfun::EvalPoint{z, branch});
}

cplx commutator_jump(const NuParameter& nu) {
  const cplx s = nu.s_plus();
  // the jump across the cut is analytic in z at -1; polynomial extrapolation from e = h, 2h, 3h, 4h
  const double h = 1e-3;
  cplx d[4];
  for (int i = 0; i < 4; ++i) {
    const double z = -1.0 - (i + 1) * h;
    d[i] = specfun::legendre_p(s, specfun::EvalPoint{z, specfun::Branch::upper}) -
           specfun::legendre_p(s, specfun::EvalPoint{z, specfun::Branch::lower});
  }
  const cplx at0 = 4.0 * d[0] - 6.0 * d[1] + 4.0 * d[2] - d[3];
  return nu.c_nu() * at0;
}

cplx commutator_normalization(const NuParameter& nu) {
  return nu.c_nu() * 2.0 * I * std::sin(pi * nu.s_plus());
}

}  // namespace dscalar::harm
