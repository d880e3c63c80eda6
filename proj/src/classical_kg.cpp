#include "dscalar/classical_kg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace dscalar::kg {

namespace {
constexpr double pi = std::numbers::pi;
}

WedgeGrid WedgeGrid::make(int M, double U) {
  if (M < 64 || M % 2 != 0) throw std::invalid_argument("WedgeGrid: M must be even and >= 64");
  WedgeGrid g;
  g.M = M;
  g.n = M / 2;
  g.U = U > 0.0 ? U : 1.5 * std::log(double(M));
  g.h = 2.0 * g.U / g.n;
  g.u.resize(g.n);
  g.psi.resize(M);
  for (int j = 0; j < g.n; ++j) {
    g.u(j) = -g.U + (j + 0.5) * g.h;
    const double p = std::asin(std::tanh(g.u(j)));
    g.psi(j) = p;
    // pi - p folded into (-pi, pi]
    g.psi(g.n + j) = p >= 0.0 ? pi - p : -pi - p;
    g.mask_Iplus.push_back(j);
    g.mask_Iminus.push_back(g.n + j);
  }
  return g;
}

double WedgeGrid::cos_psi(int j) const {
  const double c = 1.0 / std::cosh(u(j % n));
  return j < n ? c : -c;
}

EpsilonOperator build_epsilon(const WedgeGrid& grid, const NuParameter& nu) {
  EpsilonOperator e;
  e.grid = grid;
  e.nu = nu;
  const int n = grid.n;
  // orthonormal DCT-II (C) and the matching sine basis (S)
  Eigen::MatrixXd C(n, n), S = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd k(n);
  for (int m = 0; m < n; ++m) {
    k(m) = m * pi / (2.0 * grid.U);
    for (int j = 0; j < n; ++j) {
      const double arg = m * pi * (j + 0.5) / n;
      C(m, j) = (m == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n)) * std::cos(arg);
      if (m > 0) S(m, j) = std::sqrt(2.0 / n) * std::sin(arg);
    }
  }
  const double z2 = nu.zeta2();
  e.block = C.transpose() * k.array().square().matrix().asDiagonal() * C;
  for (int j = 0; j < n; ++j) {
    const double sh = 1.0 / std::cosh(grid.u(j));
    e.block(j, j) += z2 * sh * sh;
  }
  e.block = 0.5 * (e.block + e.block.transpose());
  e.Du = -(S.transpose() * k.asDiagonal() * C);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.block);
  e.lam = es.eigenvalues();
  e.V = es.eigenvectors();
  return e;
}

Eigen::MatrixXd EpsilonOperator::matrix() const {
  const int n = grid.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = block;
  m.bottomRightCorner(n, n) = block;
  return m;
}

double EpsilonOperator::smallest_nonzero() const {
  double best = INFINITY;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > 1e-10 * lam.maxCoeff()) best = std::min(best, lam(i));
  return best;
}

double EpsilonOperator::decoupling_residual() const {
  const Eigen::MatrixXd m = matrix();
  const int n = grid.n;
  const double off = m.topRightCorner(n, n).squaredNorm() + m.bottomLeftCorner(n, n).squaredNorm();
  return std::sqrt(off / m.squaredNorm());
}

Eigen::VectorXd EpsilonOperator::apply_half(const std::function<double(double)>& f, const Eigen::VectorXd& v,
                                            int sign) const {
  Eigen::VectorXd fl(lam.size());
  for (int i = 0; i < lam.size(); ++i) fl(i) = f(sign * std::sqrt(std::max(lam(i), 0.0)));
  return V * (fl.asDiagonal() * (V.transpose() * v));
}

Eigen::VectorXd EpsilonOperator::apply(const std::function<double(double)>& f, const Eigen::VectorXd& v) const {
  const int n = grid.n;
  Eigen::VectorXd out(2 * n);
  out.head(n) = apply_half(f, v.head(n), +1);
  out.tail(n) = apply_half(f, v.tail(n), -1);
  return out;
}

namespace {
double sin_over(double x, double t) {
  // sin(x t)/|x| with the t * sign limit at x = 0
  if (std::abs(x) < 1e-300) return t;
  return std::sin(x * t) / std::abs(x);
}
}  // namespace

Eigen::VectorXd propagator(const EpsilonOperator& eps, double t, int psi_src) {
  const auto& g = eps.grid;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(g.M);
  delta(psi_src) = 1.0 / (eps.nu.r * g.h);
  return -eps.nu.r * eps.apply([t](double x) { return sin_over(x, t); }, delta);
}

Eigen::MatrixXd propagator_normal_derivative_t0(const EpsilonOperator& eps) {
  // d/dt sin(eps t)/|eps| at t = 0 is sign(eps); the spectral representation keeps it as V diag V^T
  const auto& g = eps.grid;
  const int n = g.n;
  const double r = eps.nu.r;
  Eigen::MatrixXd half = eps.V * eps.V.transpose();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(g.M, g.M);
  // the kernel itself is measure independent; the grid delta of r du is 1/(r h) on the diagonal
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double kdu = -r * half(i, j) / (r * g.h);
      K(i, j) = kdu / (r * g.cos_psi(i));
      K(n + i, n + j) = -kdu / (r * g.cos_psi(n + i));
    }
  return K;
}

CauchyData cauchy_evolve(const EpsilonOperator& eps, const CauchyData& data, double t) {
  const auto& g = eps.grid;
  const double r = eps.nu.r;
  Eigen::VectorXd P(g.M);
  for (int j = 0; j < g.M; ++j) P(j) = r * g.cos_psi(j) * data.pi(j);
  CauchyData out;
  out.phi = eps.apply([t](double x) { return std::cos(x * t); }, data.phi) -
            eps.apply([t](double x) { return x == 0.0 ? t : std::sin(x * t) / x; }, P);
  Eigen::VectorXd Pt = eps.apply([t](double x) { return x * std::sin(x * t); }, data.phi) +
                       eps.apply([t](double x) { return std::cos(x * t); }, P);
  out.pi.resize(g.M);
  for (int j = 0; j < g.M; ++j) {
    out.pi(j) = Pt(j) / (r * g.cos_psi(j));
    if (!std::isfinite(out.pi(j)) || std::abs(out.pi(j)) > 1e12)
      throw EvolveError("cauchy_evolve: normal derivative blew up next to a fixed point");
  }
  return out;
}

Interval lightcone_interval(double alpha, double tau, double psi, const NuParameter& nu) {
  const double a = std::sinh(std::abs(tau)) * std::cos(psi);
  const double half = std::atan(a);
  const double center = std::asin(std::sin(psi) / std::sqrt(1.0 + a * a));
  return {alpha + center - half, alpha + center + half, 2.0 * nu.r * half};
}

LeakageReport finite_speed_check(const EpsilonOperator& eps, const CauchyData& data, double a, double b,
                                 double t) {
  const auto& g = eps.grid;
  const CauchyData ev = cauchy_evolve(eps, data, t);
  const double r = eps.nu.r;
  double tot = 0, out = 0, minus = 0;
  for (int j = 0; j < g.M; ++j) {
    const double P = r * g.cos_psi(j) * ev.pi(j);
    const double w = ev.phi(j) * ev.phi(j) + P * P;
    tot += w;
    if (j >= g.n) {
      out += w;
      minus += w;
      continue;
    }
    const Interval I = lightcone_interval(0.0, t, g.psi(j), eps.nu);
    if (I.psi_plus < a || I.psi_minus > b) out += w;
  }
  LeakageReport rep;
  if (tot > 0) {
    rep.leakage = std::sqrt(out / tot);
    rep.outside_Iplus = std::sqrt(minus / tot);
  }
  return rep;
}

double conserved_charge(const EpsilonOperator& eps, const CauchyData& data, Charge which,
                        const std::vector<double>& P) {
  const auto& g = eps.grid;
  const int n = g.n;
  const double r = eps.nu.r;
  double q = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double sg = half == 0 ? 1.0 : -1.0;
    const Eigen::VectorXd phi = data.phi.segment(half * n, n);
    const Eigen::VectorXd pin = data.pi.segment(half * n, n);
    double acc = 0.0;
    if (which == Charge::boost) {
      Eigen::VectorXd Pi(n);
      for (int j = 0; j < n; ++j) Pi(j) = r * g.sech(j) * pin(j);
      acc = 0.5 * (Pi.squaredNorm() + phi.dot(eps.block * phi));
      for (int j = 0; j < n; ++j) {
        double pv = 0.0, xp = 1.0;
        for (double c : P) {
          pv += c * xp;
          xp *= phi(j);
        }
        acc += r * r * g.sech(j) * g.sech(j) * pv;
      }
    } else {
      const Eigen::VectorXd dphi = eps.Du * phi;
      acc = r * pin.dot(dphi);
    }
    q += sg * g.h * acc;
  }
  return q;
}

double bump(double psi, double c, double w) {
  double d = std::remainder(psi - c, 2.0 * pi);
  const double x = d / w;
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

CauchyData sample_data(const WedgeGrid& g, const std::function<double(double)>& phi,
                       const std::function<double(double)>& pi_) {
  CauchyData d;
  d.phi.resize(g.M);
  d.pi.resize(g.M);
  for (int j = 0; j < g.M; ++j) {
    d.phi(j) = phi(g.psi(j));
    d.pi(j) = pi_(g.psi(j));
  }
  return d;
}

}  // namespace dscalar::kg
