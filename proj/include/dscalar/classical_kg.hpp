#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dscalar/nu.hpp"

namespace dscalar::kg {

// Time-zero circle grid adapted to the wedge W1. Each half circle I+- is parametrized by
// u = gd^{-1}(psi) (I+) resp. u = gd^{-1}(pi - psi) (I-), in which the boost acts with unit speed
// and cos(psi) d/dpsi = d/du. n = M/2 staggered nodes u_j = -U + (j+1/2) h per half; node j of I-
// is the reflection psi -> pi - psi of node j of I+, so the fixed points +-pi/2 are never sampled.
struct WedgeGrid {
  int M = 0, n = 0;
  double U = 0, h = 0;
  Eigen::VectorXd u;         // n nodes
  Eigen::VectorXd psi;       // M angles in (-pi, pi]: [0,n) in I+, [n,2n) in I-
  std::vector<int> mask_Iplus, mask_Iminus;

  static WedgeGrid make(int M, double U = 0.0);
  double cos_psi(int j) const;  // signed cos(psi_j)
  double sech(int j) const { return 1.0 / std::cosh(u(j % n)); }
};

// eps^2 = -d_u^2 + mu^2 r^2 sech^2 u on each half with Neumann cosine collocation; identical blocks
// on I+ and I-, with eps = +sqrt on I+ and -sqrt on I-
struct EpsilonOperator {
  WedgeGrid grid;
  NuParameter nu;
  Eigen::MatrixXd block;    // n x n, symmetric w.r.t. the uniform r du weights
  Eigen::VectorXd lam;      // eigenvalues of the block (eps^2)
  Eigen::MatrixXd V;        // orthonormal eigenvectors
  Eigen::MatrixXd Du;       // spectral d/du on the nodes

  Eigen::MatrixXd matrix() const;  // full M x M eps^2
  double min_eigenvalue() const { return lam.minCoeff(); }
  double smallest_nonzero() const;
  // off-block (I+ <-> I-) mass of eps^2 relative to its total; zero by construction
  double decoupling_residual() const;
  // f applied to the signed eps on a grid function of length M
  Eigen::VectorXd apply(const std::function<double(double)>& f, const Eigen::VectorXd& v) const;
  // same, on an n-vector living on one half (sign +1 for I+, -1 for I-)
  Eigen::VectorXd apply_half(const std::function<double(double)>& f, const Eigen::VectorXd& v, int sign) const;
};

EpsilonOperator build_epsilon(const WedgeGrid& grid, const NuParameter& nu);

struct CauchyData {
  Eigen::VectorXd phi;  // field on the M grid nodes
  Eigen::VectorXd pi;   // normal derivative (future unit normal), per unit proper time
};

// column psi_src of E(t, psi; 0, psi_src) = -r (sin(eps t)/|eps|)(psi, psi_src) as a kernel
// w.r.t. the measure r du
Eigen::VectorXd propagator(const EpsilonOperator& eps, double t, int psi_src);
// (r cos psi)^{-1} d/dt E at t = 0 on the grid; the exact value is -delta_{r dpsi}, i.e.
// -1/(r h |cos psi_j|) on the diagonal
Eigen::MatrixXd propagator_normal_derivative_t0(const EpsilonOperator& eps);

struct EvolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pull-back flow of the boost Lambda_1: phi_t = cos(eps t) phi - sin(eps t) eps^{-1} r cos(psi) pi,
// pi_t = (r cos psi)^{-1} (eps sin(eps t) phi + cos(eps t) r cos(psi) pi)
CauchyData cauchy_evolve(const EpsilonOperator& eps, const CauchyData& data, double t);

struct Interval {
  double psi_minus, psi_plus, length;
};
// points of the time-zero circle causally connected to the W_alpha wedge point (tau, psi)
Interval lightcone_interval(double alpha, double tau, double psi, const NuParameter& nu);

struct LeakageReport {
  double leakage = 0;  // fraction of the weighted norm outside the predicted support
  double outside_Iplus = 0;
};
// data supported in the angular interval [a, b] of I+ (relative to W_alpha); evolution under the
// W_alpha boost for boost time t
LeakageReport finite_speed_check(const EpsilonOperator& eps, const CauchyData& data, double a, double b,
                                 double t);

enum class Charge { boost, rotation };
// polynomial P(x) = sum_n P[n] x^n
double conserved_charge(const EpsilonOperator& eps, const CauchyData& data, Charge which,
                        const std::vector<double>& P = {});

// C^infinity bump exp(-1/(1-x^2)), x = (psi - c)/w, supported in |psi - c| < w
double bump(double psi, double c, double w);
CauchyData sample_data(const WedgeGrid& g, const std::function<double(double)>& phi,
                       const std::function<double(double)>& pi);

}  // namespace dscalar::kg
