#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <vector>

#include "dscalar/nu.hpp"
#include "dscalar/specfun.hpp"

namespace dscalar::harm {

// x.y = x0 y0 - x1 y1 - x2 y2 (bilinear, no conjugation)
cplx dot(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b);

struct DeSitterPoint {
  Eigen::Vector3cd x;
  // real point in the global chart: (x0, rho sin psi, rho cos psi), rho = sqrt(r^2 + x0^2)
  static DeSitterPoint chart(double x0, double psi, double r);
  // Lambda (i r sin eta, 0, r cos eta) conj-ed for sign < 0: Im x in V+ (sign > 0) or V- (sign < 0)
  static DeSitterPoint tuboid(const Eigen::Matrix3d& Lambda, double eta, double r, int sign);
  double constraint_residual(double r) const;  // |x.x + r^2| / r^2
};

struct LightconePoint {
  double alpha = 0, p0 = 1;
  Eigen::Vector3d vec() const;
};

Eigen::Matrix3d boost1(double t);    // acts on (x0, x1)
Eigen::Matrix3d boost2(double t);    // acts on (x0, x2)
Eigen::Matrix3d rotation0(double a); // R0(a): psi -> psi - a in the chart
Eigen::Matrix3d random_lorentz(std::mt19937_64& rng, double max_rapidity);

struct PlaneWave {
  cplx value;
  bool singular = false;  // x.p = 0 with Re s <= 0: only the L1 class is defined there
};
// (x_+- . p)^s = 1[-x.p >= 0] |x.p|^s + e^{+- i pi s} 1[x.p > 0] |x.p|^s
PlaneWave plane_wave(const DeSitterPoint& x, const LightconePoint& p, cplx s, int branch);
PlaneWave plane_wave_from_dot(double xp, cplx s, int branch);

// compactly supported real function on the chart, support in [x0_min, x0_max] x S^1
struct ChartFunction {
  std::function<double(double, double)> f;
  double x0_min = -1, x0_max = 1;
};

// (box + mu^2) u at a chart point by fourth-order central differences with step h;
// box = d_x0 (rho^2/r^2) d_x0 - rho^{-2} d_psi^2
cplx kg_operator_fd(const std::function<cplx(double, double)>& u, double x0, double psi, const NuParameter& nu,
                    double h);
ChartFunction kg_applied(const ChartFunction& g, const NuParameter& nu, double h);

struct FhResult {
  std::vector<double> alpha;
  std::vector<cplx> value;
  double doubling_change = 0;   // max |F(Q) - F(2Q)| / max |F(2Q)|
  bool quadrature_warning = false;
};
// sqrt(c_nu e^{-pi nu} r/pi) int dmu(x) f(x) (x_+ . p(alpha))^{s+}, dmu = r dx0 dpsi; trapezoid in psi with
// quad_points nodes, tanh-sinh in x0 split at the null line x.p = 0
FhResult fh_transform(const ChartFunction& f, const NuParameter& nu, int quad_points, int n_alpha = 64);
// the same quadrature at arbitrary angles, without the doubling check
std::vector<cplx> fh_evaluate(const ChartFunction& f, const NuParameter& nu, int quad_points,
                              const std::vector<double>& alphas);
double fh_norm(const FhResult& r);  // (int |F|^2 d alpha / 2pi)^{1/2} by trapezoid

// c_nu e^{-pi nu} r/pi int_{gamma_0} (d alpha/2) (z1.p)^{s-} (p.z2)^{s+}, powers taken as (-w)^s principal,
// z1 in T+, z2 in T-
cplx two_point_contour(const DeSitterPoint& z1, const DeSitterPoint& z2, const NuParameter& nu, int quad_points);
// c_nu P_{s+}(z1.z2/r^2)
cplx two_point_legendre(const DeSitterPoint& z1, const DeSitterPoint& z2, const NuParameter& nu,
                        specfun::Branch branch = specfun::Branch::principal);

// c_nu [P_{s+}(-1 + i0) - P_{s+}(-1 - i0)] from the cut discontinuity at -1 - e, extrapolated e -> 0
cplx commutator_jump(const NuParameter& nu);
// c_nu 2i sin(pi s+) in closed form
cplx commutator_normalization(const NuParameter& nu);

}  // namespace dscalar::harm
