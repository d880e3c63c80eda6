#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dscalar/nu.hpp"
#include "dscalar/one_particle.hpp"

namespace dscalar::fock {

using Occupation = std::vector<std::uint8_t>;  // n_k for k = -K..K

// all occupation vectors with sum n_k <= N, graded by total particle number, descending lexicographic within
// a grade; state 0 is the vacuum
struct FockBasis {
  int K = 0, N = 0;
  std::vector<Occupation> states;
  std::vector<int> total;  // particle number per state
  // lowering table: for state i, entries low_ptr[i]..low_ptr[i+1] give (mode index, target state, sqrt(n))
  std::vector<long> low_ptr;
  std::vector<int> low_mode;
  std::vector<long> low_target;
  std::vector<double> low_amp;

  long dim() const { return long(states.size()); }
  int modes() const { return 2 * K + 1; }
  long find(const Occupation& n) const;  // -1 if outside the truncation
  // no particles in modes |k| > K - mode_margin and at most N - particle_margin particles
  bool interior(long i, int mode_margin, int particle_margin) const;
  long sum_k(long i) const;  // sum_k k n_k

 private:
  std::unordered_map<std::string, long> index_;
  friend FockBasis build_basis(int K, int N);
};

constexpr double max_basis_states = 2e6;
double basis_dimension(int K, int N);  // C(2K+1+N, N)
FockBasis build_basis(int K, int N);

struct FockOperator {
  SpMat matrix;
  bool hermitian = false;
  double hermiticity_defect() const;  // max |A - A^dagger|
};

enum class Ladder { create, annihilate };

FockOperator ladder(const FockBasis& b, int k, Ladder which);
// sum_kl h_kl a*_k a_l
FockOperator dGamma(const FockBasis& b, const Eigen::MatrixXcd& h);

// X(psi) = sum_k (alpha_k a_k e^{ik psi} + beta_k a*_k e^{-ik psi})
struct LinearField {
  Eigen::VectorXcd alpha, beta;
  LinearField derivative() const;  // d/dpsi
};
LinearField phi_density(const op::DispersionTable& d);  // alpha = beta = (4 pi r omega~)^{-1/2}
LinearField pi_density(const op::DispersionTable& d);   // alpha = -beta = -i (omega~/(4 pi r))^{1/2}

// int r^2 dpsi w(psi) :X(psi) Y(psi): with w given by its Fourier coefficients w^(q) = (1/2pi) int w e^{-iq psi}
FockOperator quadratic_charge(const FockBasis& b, const LinearField& X, const LinearField& Y, double r,
                              const std::function<cplx(int)>& w_hat);

// phi(h) = int r dpsi h phi(psi), pi(h) likewise; [phi(h), pi(g)] = i <h, g>_{L2(r dpsi)} on the untruncated space
FockOperator phi(const FockBasis& b, const NuParameter& nu, const CircleFunction& h);
FockOperator pi(const FockBasis& b, const NuParameter& nu, const CircleFunction& h);

struct PolynomialInteraction {
  std::vector<double> coefficients;  // P(x) = sum_n c_n x^n
  bool bounded_below = false;

  static PolynomialInteraction parse(const std::string& csv);  // "c0,c1,...", throws std::invalid_argument
  int degree() const;
  PolynomialInteraction derivative() const;
  bool is_zero() const;
  void validate() const;  // bounded_below requires even degree and a positive leading coefficient
  void require_bounded_below() const;  // semigroups e^{-tH} need P bounded from below
};

constexpr int max_wick_degree = 8;

// exact Fourier coefficients on modes -Kh..Kh of cos(psi - alpha), and of cos restricted to one half circle
CircleFunction cos_alpha(double alpha, int Kh, double r);
CircleFunction half_cos(int sign, int Kh, double r);  // chi_{cos > 0} cos (sign > 0) or chi_{cos < 0} cos

// :phi^n:(h) = int r dpsi h(psi) sum_m C(n,m) A*(psi)^m A(psi)^{n-m}, A(psi) = sum_k (4 pi r omega~)^{-1/2} e^{ik psi} a_k,
// mode sums truncated to |k| <= K; h coefficients beyond h.K count as zero
FockOperator wick_monomial(const FockBasis& b, const NuParameter& nu, int n, const CircleFunction& h);

// matrix-free sum_n c_n :phi^n:(h), for bases too large to store the operator; exact trapezoid nodes in psi
class WickNodeOperator {
 public:
  WickNodeOperator(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P, const CircleFunction& h,
                   double scale);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

 private:
  const FockBasis* b_;
  std::vector<double> c_;
  Eigen::MatrixXcd node_coef_;  // nodes x modes: A(psi_j) = sum_k node_coef_(j,k) a_k
  Eigen::VectorXd weight_;
  double scale_;
  Eigen::VectorXcd lower(const Eigen::VectorXcd& v, int j) const;
  Eigen::VectorXcd raise(const Eigen::VectorXcd& v, int j) const;
};

// one-particle boost generator r sqrt(omega~) cos_alpha sqrt(omega~) on modes -K..K, cos_alpha = cos(psi - alpha)
Eigen::MatrixXcd boost_one_particle(const op::DispersionTable& d, double alpha);
FockOperator free_boost(const FockBasis& b, const NuParameter& nu, double alpha);         // dGamma form
FockOperator free_boost_ladder(const FockBasis& b, const NuParameter& nu, double alpha);  // products of ladders
FockOperator rotation_generator(const FockBasis& b);                                       // dGamma(diag k)

// V(h) = int r^2 dpsi h :P(phi): = r sum_n c_n :phi^n:(h)
FockOperator interaction(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                         const CircleFunction& h);
FockOperator interacting_boost(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P, double alpha);
FockOperator hamiltonian_half(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P);

// antiunitary implementer of psi -> pi - psi (with time reversal): J X J = S conj(X) S, S = diag((-1)^{sum k n_k})
FockOperator modular_conjugate(const FockBasis& b, const FockOperator& X);

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // empty when only values were requested
};
constexpr long dense_limit = 3000;
Spectrum hermitian_spectrum(const FockOperator& A, bool vectors);

struct ExpReport {
  Eigen::VectorXcd direction;  // e^{-t A} v / |e^{-t A} v|
  double log_norm = 0;         // log |e^{-t A} v|
  bool krylov = false;
  int krylov_dim = 0;
};
// e^{-t A} v for hermitian A: dense eigendecomposition up to dense_limit, Lanczos with full reorthogonalization
// beyond; `apply` is used in the Krylov case
ExpReport exp_apply(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, long dim,
                    const FockOperator* dense_source, const Eigen::VectorXcd& v, double t);

struct VacuumReport {
  Eigen::VectorXcd omega;
  double log_norm = 0;      // log |e^{-pi H} Omega0|
  double k0_mean = 0;       // <Omega^, K0 Omega^>
  double k0_square = 0;     // <Omega^, K0^2 Omega^>
  double vacuum_overlap = 0;
  bool krylov = false;
};
VacuumReport interacting_vacuum(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P);

struct InequalityReport {
  double pb = 0;      // exp(-pi <Omega0, V0 Omega0>)
  double mid = 0;     // |e^{-pi H} Omega0|
  double gt = 0;      // |e^{-pi V0} Omega0|
  double pb_margin = 0, gt_margin = 0;  // (mid - pb) / max, (gt - mid) / max
};
InequalityReport inequality_check(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P);

struct ChargeReport {
  double l_residual = 0;  // |L_check - interacting_boost(0)|, interior sector
  double k_residual = 0;  // |K_check - dGamma(diag k)|
  double l_pinned = 0;    // constant relating the P = 0 quadratic charge to free_boost
  double k_pinned = 0;
};
ChargeReport stress_energy_charges(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P);
// int r^2 dpsi w T00 from the field densities, and -int r dpsi :pi d_psi phi:
FockOperator boost_charge_density(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                                  int half);  // half = 0 full circle, +1 I+, -1 I-
FockOperator momentum_charge_density(const FockBasis& b, const NuParameter& nu);

struct SplitReport {
  double min_plus = 0;    // min spec(L+ + c0)
  double max_minus = 0;   // max spec(L- - c0)
  double c0 = 0;
  double additivity = 0;  // max |L+ + L- - L|
};
SplitReport boost_split(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P);

struct EomReport {
  double residual = 0;          // |R Omega_ref| / |phi(eps2 h) Omega_ref|
  double first_commutator = 0;  // |([L, phi(h)] + i r pi(cos h)) Omega_ref|
};
// R = -[L, [L, phi(h)]] + phi(eps2^T h) + r^2 :P'(phi):(cos^2 h) applied to Omega0,
// eps2^T h = -d(cos d(cos h)) + mu^2 r^2 cos^2 h; h must be band-limited to |k| <= K - 2
EomReport eom_residual(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                       const CircleFunction& h);

}  // namespace dscalar::fock
