#include "dscalar/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dscalar::fock {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

using Triplets = std::vector<Eigen::Triplet<cplx, long>>;

std::string key_of(const Occupation& n) { return std::string(n.begin(), n.end()); }

SpMat from_triplets(long D, const Triplets& t) {
  SpMat m(D, D);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// a*_{k_1} ... a*_{k_m} a_{l_1} ... a_{l_p} applied to basis state s, all ordered index tuples; modes given as
// indices 0..2K, ks[0] is applied last
template <class F>
void enumerate_monomials(const FockBasis& b, long s, int p, int m, F&& emit) {
  if (b.total[s] - p + m > b.N || b.total[s] < p) return;
  std::vector<int> ls(p), ks(m);
  Occupation occ;
  std::function<void(long, int, double)> lower_step;
  std::function<void(int, double)> raise_step = [&](int depth, double amp) {
    if (depth == m) {
      const long t = b.find(occ);
      if (t >= 0) emit(t, amp, ks.data(), ls.data());
      return;
    }
    for (int k = 0; k < b.modes(); ++k) {
      ks[m - 1 - depth] = k;
      occ[k] += 1;
      raise_step(depth + 1, amp * std::sqrt(double(occ[k])));
      occ[k] -= 1;
    }
  };
  lower_step = [&](long cur, int depth, double amp) {
    if (depth == p) {
      occ = b.states[cur];
      raise_step(0, amp);
      return;
    }
    for (long e = b.low_ptr[cur]; e < b.low_ptr[cur + 1]; ++e) {
      ls[p - 1 - depth] = b.low_mode[e];
      lower_step(b.low_target[e], depth + 1, amp * b.low_amp[e]);
    }
  };
  lower_step(s, 0, 1.0);
}

template <class C>
SpMat assemble(const FockBasis& b, int p, int m, C&& coef) {
  Triplets t;
  for (long s = 0; s < b.dim(); ++s)
    enumerate_monomials(b, s, p, m, [&](long target, double amp, const int* ks, const int* ls) {
      const cplx c = coef(ks, ls);
      if (c != 0.0) t.emplace_back(target, s, c * amp);
    });
  return from_triplets(b.dim(), t);
}

Eigen::VectorXd field_weight(const op::DispersionTable& d) {
  return (4.0 * kPi * d.nu.r * d.omega.array()).rsqrt().matrix();
}

}  // namespace

double basis_dimension(int K, int N) { return binomial(2 * K + 1 + N, N); }

long FockBasis::find(const Occupation& n) const {
  auto it = index_.find(key_of(n));
  return it == index_.end() ? -1 : it->second;
}

bool FockBasis::interior(long i, int mode_margin, int particle_margin) const {
  if (total[i] > N - particle_margin) return false;
  for (int j = 0; j < modes(); ++j)
    if (states[i][j] > 0 && std::abs(j - K) > K - mode_margin) return false;
  return true;
}

long FockBasis::sum_k(long i) const {
  long acc = 0;
  for (int j = 0; j < modes(); ++j) acc += long(j - K) * states[i][j];
  return acc;
}

FockBasis build_basis(int K, int N) {
  if (K < 0 || N < 0) throw std::invalid_argument("build_basis: K and N must be non-negative");
  if (N > 255) throw std::invalid_argument("build_basis: N must be <= 255");
  if (basis_dimension(K, N) > max_basis_states)
    throw std::length_error("build_basis: more than 2e6 states requested");
  FockBasis b;
  b.K = K;
  b.N = N;
  const int M = 2 * K + 1;
  Occupation cur(M, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == M - 1) {
      cur[i] = std::uint8_t(left);
      b.states.push_back(cur);
      return;
    }
    for (int n = left; n >= 0; --n) {
      cur[i] = std::uint8_t(n);
      rec(i + 1, left - n);
    }
  };
  for (int n = 0; n <= N; ++n) rec(0, n);
  for (long i = 0; i < b.dim(); ++i) {
    b.index_.emplace(key_of(b.states[i]), i);
    int t = 0;
    for (auto x : b.states[i]) t += x;
    b.total.push_back(t);
  }
  b.low_ptr.push_back(0);
  for (long i = 0; i < b.dim(); ++i) {
    Occupation o = b.states[i];
    for (int j = 0; j < M; ++j) {
      if (o[j] == 0) continue;
      const double amp = std::sqrt(double(o[j]));
      o[j] -= 1;
      b.low_mode.push_back(j);
      b.low_target.push_back(b.find(o));
      b.low_amp.push_back(amp);
      o[j] += 1;
    }
    b.low_ptr.push_back(long(b.low_mode.size()));
  }
  return b;
}

double FockOperator::hermiticity_defect() const {
  const SpMat d = matrix - SpMat(matrix.adjoint());
  double m = 0.0;
  for (long j = 0; j < d.outerSize(); ++j)
    for (SpMat::InnerIterator it(d, j); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

FockOperator ladder(const FockBasis& b, int k, Ladder which) {
  if (std::abs(k) > b.K) throw std::out_of_range("ladder: |k| > K");
  const int j = k + b.K;
  Triplets t;
  for (long s = 0; s < b.dim(); ++s)
    for (long e = b.low_ptr[s]; e < b.low_ptr[s + 1]; ++e)
      if (b.low_mode[e] == j) t.emplace_back(b.low_target[e], s, b.low_amp[e]);
  FockOperator op;
  op.matrix = from_triplets(b.dim(), t);
  if (which == Ladder::create) op.matrix = SpMat(op.matrix.adjoint());
  return op;
}

FockOperator dGamma(const FockBasis& b, const Eigen::MatrixXcd& h) {
  if (h.rows() != b.modes() || h.cols() != b.modes()) throw std::invalid_argument("dGamma: h must be (2K+1)^2");
  FockOperator op;
  op.matrix = assemble(b, 1, 1, [&](const int* ks, const int* ls) { return h(ks[0], ls[0]); });
  op.hermitian = (h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0;
  return op;
}

LinearField LinearField::derivative() const {
  const long M = alpha.size(), K = (M - 1) / 2;
  LinearField d{alpha, beta};
  for (long i = 0; i < M; ++i) {
    d.alpha(i) *= I * double(i - K);
    d.beta(i) *= -I * double(i - K);
  }
  return d;
}

LinearField phi_density(const op::DispersionTable& d) {
  const Eigen::VectorXcd f = field_weight(d).cast<cplx>();
  return {f, f};
}

LinearField pi_density(const op::DispersionTable& d) {
  const Eigen::VectorXcd g = (d.omega.array() / (4.0 * kPi * d.nu.r)).sqrt().matrix().cast<cplx>();
  return {-I * g, I * g};
}

FockOperator quadratic_charge(const FockBasis& b, const LinearField& X, const LinearField& Y, double r,
                              const std::function<cplx(int)>& w_hat) {
  const int K = b.K;
  const double c = 2.0 * kPi * r * r;
  SpMat m = assemble(b, 2, 0, [&](const int*, const int* ls) {
    // a_{l0} a_{l1}: alpha_k gamma_l e^{i(k+l) psi}
    return c * X.alpha(ls[0]) * Y.alpha(ls[1]) * w_hat(-(ls[0] + ls[1] - 2 * K));
  });
  m += assemble(b, 1, 1, [&](const int* ks, const int* ls) {
    const int k = ks[0] - K, l = ls[0] - K;
    return c * (X.beta(ks[0]) * Y.alpha(ls[0]) + X.alpha(ls[0]) * Y.beta(ks[0])) * w_hat(-(l - k));
  });
  m += assemble(b, 0, 2, [&](const int* ks, const int*) {
    return c * X.beta(ks[0]) * Y.beta(ks[1]) * w_hat(ks[0] + ks[1] - 2 * K);
  });
  FockOperator op;
  op.matrix = m;
  return op;
}

FockOperator phi(const FockBasis& b, const NuParameter& nu, const CircleFunction& h) {
  const op::DispersionTable d = op::dispersion(nu, b.K);
  Triplets t;
  SpMat m(b.dim(), b.dim());
  for (int k = -b.K; k <= b.K; ++k) {
    const double w = 1.0 / std::sqrt(2.0 * d(k));
    m += (w * h[-k]) * ladder(b, k, Ladder::annihilate).matrix + (w * h[k]) * ladder(b, k, Ladder::create).matrix;
  }
  FockOperator op;
  op.matrix = m;
  op.hermitian = h.is_real();
  return op;
}

FockOperator pi(const FockBasis& b, const NuParameter& nu, const CircleFunction& h) {
  const op::DispersionTable d = op::dispersion(nu, b.K);
  SpMat m(b.dim(), b.dim());
  for (int k = -b.K; k <= b.K; ++k) {
    const double w = std::sqrt(0.5 * d(k));
    m += (-I * w * h[-k]) * ladder(b, k, Ladder::annihilate).matrix +
         (I * w * h[k]) * ladder(b, k, Ladder::create).matrix;
  }
  FockOperator op;
  op.matrix = m;
  op.hermitian = h.is_real();
  return op;
}

PolynomialInteraction PolynomialInteraction::parse(const std::string& csv) {
  PolynomialInteraction P;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("poly: cannot parse coefficient '" + tok + "'");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument("poly: cannot parse coefficient '" + tok + "'");
    P.coefficients.push_back(v);
  }
  if (P.coefficients.empty()) throw std::invalid_argument("poly: empty coefficient list");
  if (P.degree() > max_wick_degree) throw std::invalid_argument("poly: degree above 8");
  const int n = P.degree();
  P.bounded_below = n <= 0 || (n % 2 == 0 && P.coefficients[n] > 0.0);
  return P;
}

int PolynomialInteraction::degree() const {
  for (int n = int(coefficients.size()) - 1; n >= 0; --n)
    if (coefficients[n] != 0.0) return n;
  return -1;
}

PolynomialInteraction PolynomialInteraction::derivative() const {
  PolynomialInteraction d;
  for (size_t n = 1; n < coefficients.size(); ++n) d.coefficients.push_back(double(n) * coefficients[n]);
  if (d.coefficients.empty()) d.coefficients.push_back(0.0);
  return d;
}

bool PolynomialInteraction::is_zero() const { return degree() < 0; }

void PolynomialInteraction::validate() const {
  if (degree() > max_wick_degree) throw std::invalid_argument("poly: degree above 8");
  if (!bounded_below) return;
  const int n = degree();
  if (n > 0 && (n % 2 != 0 || coefficients[n] <= 0.0))
    throw std::invalid_argument("poly: bounded_below needs even degree and positive leading coefficient");
}

void PolynomialInteraction::require_bounded_below() const {
  if (!bounded_below) throw std::invalid_argument("poly: the semigroup needs P bounded from below");
  validate();
}

CircleFunction cos_alpha(double alpha, int Kh, double r) {
  CircleFunction h(std::max(Kh, 1), r);
  const double s = std::sqrt(2.0 * kPi * r);
  h[1] = s * 0.5 * std::exp(-I * alpha);
  h[-1] = s * 0.5 * std::exp(I * alpha);
  return h;
}

CircleFunction half_cos(int sign, int Kh, double r) {
  CircleFunction h(std::max(Kh, 1), r);
  const double s = std::sqrt(2.0 * kPi * r);
  for (int q = -h.K; q <= h.K; ++q) {
    double plus = std::abs(q) == 1 ? 0.25 : std::cos(q * kPi / 2.0) / (kPi * (1.0 - double(q) * q));
    if (std::abs(q) != 1 && (q % 2 != 0)) plus = 0.0;
    const double full = std::abs(q) == 1 ? 0.5 : 0.0;
    h[q] = s * (sign > 0 ? plus : full - plus);
  }
  return h;
}

FockOperator wick_monomial(const FockBasis& b, const NuParameter& nu, int n, const CircleFunction& h) {
  if (n < 0 || n > max_wick_degree) throw std::invalid_argument("wick_monomial: degree must be in 0..8");
  const op::DispersionTable d = op::dispersion(nu, b.K);
  const Eigen::VectorXd f = field_weight(d);
  const double s2pr = std::sqrt(2.0 * kPi * nu.r);
  const int K = b.K;
  SpMat m(b.dim(), b.dim());
  for (int c = 0; c <= n; ++c) {
    const int p = n - c;
    const double binom = binomial(n, c);
    m += assemble(b, p, c, [&](const int* ks, const int* ls) {
      int Q = 0;
      double w = binom * s2pr;
      for (int i = 0; i < p; ++i) {
        Q += ls[i] - K;
        w *= f(ls[i]);
      }
      for (int i = 0; i < c; ++i) {
        Q -= ks[i] - K;
        w *= f(ks[i]);
      }
      return w * h[-Q];
    });
  }
  FockOperator op;
  op.matrix = m;
  op.hermitian = h.is_real();
  return op;
}

WickNodeOperator::WickNodeOperator(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                                   const CircleFunction& h, double scale)
    : b_(&b), c_(P.coefficients), scale_(scale) {
  const int deg = std::max(P.degree(), 0);
  const int Q = 2 * deg * b.K + 1;
  const op::DispersionTable d = op::dispersion(nu, b.K);
  const Eigen::VectorXd f = field_weight(d);
  node_coef_.resize(Q, b.modes());
  weight_.resize(Q);
  Eigen::VectorXcd wc(Q);
  for (int j = 0; j < Q; ++j) {
    const double psi = 2.0 * kPi * j / Q;
    cplx hv = 0.0;
    for (int q = -std::min(h.K, deg * b.K); q <= std::min(h.K, deg * b.K); ++q)
      hv += h[q] * std::exp(I * (q * psi));
    wc(j) = hv / std::sqrt(2.0 * kPi * nu.r) * (2.0 * kPi * nu.r / Q);
    for (int k = -b.K; k <= b.K; ++k) node_coef_(j, k + b.K) = f(k + b.K) * std::exp(I * (k * psi));
  }
  if (wc.imag().cwiseAbs().maxCoeff() > 1e-14 * (1.0 + wc.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("WickNodeOperator: h must be real");
  weight_ = wc.real();
}

Eigen::VectorXcd WickNodeOperator::lower(const Eigen::VectorXcd& v, int j) const {
  const FockBasis& b = *b_;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (long s = 0; s < b.dim(); ++s) {
    if (v(s) == 0.0) continue;
    for (long e = b.low_ptr[s]; e < b.low_ptr[s + 1]; ++e)
      out(b.low_target[e]) += node_coef_(j, b.low_mode[e]) * b.low_amp[e] * v(s);
  }
  return out;
}

Eigen::VectorXcd WickNodeOperator::raise(const Eigen::VectorXcd& v, int j) const {
  const FockBasis& b = *b_;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (long s = 0; s < b.dim(); ++s) {
    cplx acc = 0.0;
    for (long e = b.low_ptr[s]; e < b.low_ptr[s + 1]; ++e)
      acc += std::conj(node_coef_(j, b.low_mode[e])) * b.low_amp[e] * v(b.low_target[e]);
    out(s) = acc;
  }
  return out;
}

Eigen::VectorXcd WickNodeOperator::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  const int Q = int(weight_.size());
  double total_w = 0.0;
  for (int j = 0; j < Q; ++j) total_w += weight_(j);
  if (!c_.empty() && c_[0] != 0.0) out += (scale_ * c_[0] * total_w) * v;
  int deg = 0;
  for (int n = int(c_.size()) - 1; n > 0; --n)
    if (c_[n] != 0.0) {
      deg = n;
      break;
    }
  if (deg == 0) return out;
  for (int j = 0; j < Q; ++j) {
    if (weight_(j) == 0.0) continue;
    std::vector<Eigen::VectorXcd> u{v};
    for (int p = 1; p <= deg; ++p) u.push_back(lower(u.back(), j));
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(v.size());
    for (int n = 1; n <= deg; ++n) {
      if (c_[n] == 0.0) continue;
      Eigen::VectorXcd y = u[0];
      for (int m = n - 1; m >= 0; --m) y = raise(y, j) + binomial(n, m) * u[n - m];
      acc += c_[n] * y;
    }
    out += (scale_ * weight_(j)) * acc;
  }
  return out;
}

Eigen::MatrixXcd boost_one_particle(const op::DispersionTable& d, double alpha) {
  const int n = 2 * d.K + 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double w = 0.5 * d.nu.r * std::sqrt(d.omega(i) * d.omega(i + 1));
    M(i + 1, i) = w * std::exp(-I * alpha);
    M(i, i + 1) = w * std::exp(I * alpha);
  }
  return M;
}

FockOperator free_boost(const FockBasis& b, const NuParameter& nu, double alpha) {
  FockOperator op = dGamma(b, boost_one_particle(op::dispersion(nu, b.K), alpha));
  op.hermitian = true;
  return op;
}

FockOperator free_boost_ladder(const FockBasis& b, const NuParameter& nu, double alpha) {
  const op::DispersionTable d = op::dispersion(nu, b.K);
  std::vector<SpMat> a, ad;
  for (int k = -b.K; k <= b.K; ++k) {
    a.push_back(ladder(b, k, Ladder::annihilate).matrix);
    ad.push_back(ladder(b, k, Ladder::create).matrix);
  }
  SpMat m(b.dim(), b.dim());
  for (int i = 0; i + 1 < b.modes(); ++i) {
    const double w = 0.5 * nu.r * std::sqrt(d.omega(i) * d.omega(i + 1));
    m += SpMat((w * std::exp(-I * alpha)) * (ad[i + 1] * a[i])) + SpMat((w * std::exp(I * alpha)) * (ad[i] * a[i + 1]));
  }
  FockOperator op;
  op.matrix = m;
  op.hermitian = true;
  return op;
}

FockOperator rotation_generator(const FockBasis& b) {
  Triplets t;
  for (long s = 0; s < b.dim(); ++s) t.emplace_back(s, s, double(b.sum_k(s)));
  FockOperator op;
  op.matrix = from_triplets(b.dim(), t);
  op.hermitian = true;
  return op;
}

FockOperator interaction(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                         const CircleFunction& h) {
  P.validate();
  SpMat m(b.dim(), b.dim());
  for (int n = 0; n < int(P.coefficients.size()); ++n)
    if (P.coefficients[n] != 0.0) m += (nu.r * P.coefficients[n]) * wick_monomial(b, nu, n, h).matrix;
  FockOperator op;
  op.matrix = m;
  op.hermitian = h.is_real();
  return op;
}

FockOperator interacting_boost(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P, double alpha) {
  FockOperator op = free_boost(b, nu, alpha);
  if (!P.is_zero()) op.matrix += interaction(b, nu, P, cos_alpha(alpha, 1, nu.r)).matrix;
  return op;
}

FockOperator hamiltonian_half(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P) {
  P.require_bounded_below();
  FockOperator op = free_boost(b, nu, 0.0);
  const int Kh = std::max(P.degree(), 1) * b.K;
  if (!P.is_zero()) op.matrix += interaction(b, nu, P, half_cos(+1, Kh, nu.r)).matrix;
  return op;
}

FockOperator modular_conjugate(const FockBasis& b, const FockOperator& X) {
  Eigen::VectorXcd S(b.dim());
  for (long s = 0; s < b.dim(); ++s) S(s) = (b.sum_k(s) % 2 == 0) ? 1.0 : -1.0;
  FockOperator op;
  op.matrix = S.asDiagonal() * SpMat(X.matrix.conjugate()) * S.asDiagonal();
  op.hermitian = X.hermitian;
  return op;
}

Spectrum hermitian_spectrum(const FockOperator& A, bool vectors) {
  const long D = A.matrix.rows();
  if (D > dense_limit) throw std::length_error("hermitian_spectrum: dimension above the dense limit");
  const Eigen::MatrixXcd M = Eigen::MatrixXcd(A.matrix);
  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Spectrum sp;
  const int opt = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (H.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real(), opt);
    sp.values = es.eigenvalues();
    if (vectors) sp.vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, opt);
    sp.values = es.eigenvalues();
    if (vectors) sp.vectors = es.eigenvectors();
  }
  return sp;
}

ExpReport exp_apply(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, long dim,
                    const FockOperator* dense_source, const Eigen::VectorXcd& v, double t) {
  ExpReport rep;
  const double vn = v.norm();
  if (vn == 0.0) throw std::invalid_argument("exp_apply: zero start vector");
  if (dense_source && dim <= dense_limit) {
    const Spectrum sp = hermitian_spectrum(*dense_source, true);
    const double lmin = sp.values.minCoeff();
    Eigen::VectorXcd c = sp.vectors.adjoint() * v;
    for (long i = 0; i < c.size(); ++i) c(i) *= std::exp(-t * (sp.values(i) - lmin));
    const double cn = c.norm();
    rep.log_norm = -t * lmin + std::log(cn);
    rep.direction = sp.vectors * (c / cn);
    return rep;
  }
  rep.krylov = true;
  const int mmax = int(std::min<long>(dim, 400));
  std::vector<Eigen::VectorXcd> Vk{v / vn};
  std::vector<double> al, be;
  Eigen::VectorXcd prev;
  for (int j = 0; j < mmax; ++j) {
    Eigen::VectorXcd w = apply(Vk[j]);
    al.push_back(Vk[j].dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : Vk) w -= q.dot(w) * q;
    const double bj = w.norm();
    const int m = j + 1;
    const bool last = (bj < 1e-12) || m == mmax;
    if (m % 10 == 0 || last) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) T(i, i) = al[i];
      for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = be[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      const double lmin = es.eigenvalues().minCoeff();
      Eigen::VectorXd y = es.eigenvectors().row(0).transpose();
      for (int i = 0; i < m; ++i) y(i) *= std::exp(-t * (es.eigenvalues()(i) - lmin));
      Eigen::VectorXd z = es.eigenvectors() * y;
      const double zn = z.norm();
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
      for (int i = 0; i < m; ++i) x += z(i) / zn * Vk[i];
      rep.log_norm = std::log(vn) - t * lmin + std::log(zn);
      rep.direction = x;
      rep.krylov_dim = m;
      if (prev.size() == x.size() && (prev - x).norm() < 1e-7) break;
      prev = x;
    }
    if (last) break;
    be.push_back(bj);
    Vk.push_back(w / bj);
  }
  return rep;
}

namespace {

using Apply = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

// free_boost(alpha) + V(h): assembled when small, matrix-free through the node operator otherwise
struct BoostApply {
  FockOperator free;
  std::shared_ptr<WickNodeOperator> node;
  std::shared_ptr<FockOperator> full;
  Eigen::VectorXcd operator()(const Eigen::VectorXcd& v) const {
    if (full) return full->matrix * v;
    Eigen::VectorXcd out = free.matrix * v;
    if (node) out += node->apply(v);
    return out;
  }
};

BoostApply make_boost(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                      const CircleFunction& h, bool assemble_small) {
  BoostApply B;
  B.free = free_boost(b, nu, 0.0);
  if (assemble_small && b.dim() <= dense_limit) {
    B.full = std::make_shared<FockOperator>(B.free);
    if (!P.is_zero()) B.full->matrix += interaction(b, nu, P, h).matrix;
    return B;
  }
  if (!P.is_zero()) B.node = std::make_shared<WickNodeOperator>(b, nu, P, h, nu.r);
  return B;
}

Eigen::VectorXcd vacuum(const FockBasis& b) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b.dim());
  v(0) = 1.0;
  return v;
}

}  // namespace

VacuumReport interacting_vacuum(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P) {
  P.require_bounded_below();
  const int Kh = std::max(P.degree(), 1) * b.K;
  const BoostApply H = make_boost(b, nu, P, half_cos(+1, Kh, nu.r), true);
  const ExpReport e = exp_apply(H, b.dim(), H.full.get(), vacuum(b), kPi);
  VacuumReport rep;
  rep.omega = e.direction;
  rep.log_norm = e.log_norm;
  rep.krylov = e.krylov;
  if (!std::isfinite(e.log_norm)) throw std::underflow_error("interacting_vacuum: e^{-kPi H} Omega0 vanished");
  for (long s = 0; s < b.dim(); ++s) {
    const double p = std::norm(rep.omega(s)), k = double(b.sum_k(s));
    rep.k0_mean += p * k;
    rep.k0_square += p * k * k;
  }
  rep.vacuum_overlap = std::abs(rep.omega(0));
  return rep;
}

namespace {
double rel_slack(double log_small, double log_big) {
  // (big - small) / max(big, small) from logarithms
  if (log_big >= log_small) return 1.0 - std::exp(log_small - log_big);
  return std::exp(log_big - log_small) - 1.0;
}
}  // namespace

InequalityReport inequality_check(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P) {
  P.require_bounded_below();
  const int Kh = std::max(P.degree(), 1) * b.K;
  const FockOperator V0 = interaction(b, nu, P, half_cos(+1, Kh, nu.r));
  FockOperator H = free_boost(b, nu, 0.0);
  H.matrix += V0.matrix;
  const Apply hv = [&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(H.matrix * v); };
  const Apply vv = [&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(V0.matrix * v); };
  const double log_pb = -kPi * V0.matrix.coeff(0, 0).real();
  const double log_mid = exp_apply(hv, b.dim(), &H, vacuum(b), kPi).log_norm;
  const double log_gt = exp_apply(vv, b.dim(), &V0, vacuum(b), kPi).log_norm;
  InequalityReport rep;
  rep.pb = std::exp(log_pb);
  rep.mid = std::exp(log_mid);
  rep.gt = std::exp(log_gt);
  rep.pb_margin = rel_slack(log_pb, log_mid);
  rep.gt_margin = rel_slack(log_mid, log_gt);
  return rep;
}

FockOperator boost_charge_density(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                                  int half) {
  const op::DispersionTable d = op::dispersion(nu, b.K);
  const int Kh = std::max(P.degree(), 2) * b.K + 2;
  const CircleFunction w = half == 0 ? cos_alpha(0.0, Kh, nu.r) : half_cos(half, Kh, nu.r);
  const double s = std::sqrt(2.0 * kPi * nu.r);
  const auto w_hat = [&](int q) { return w[q] / s; };
  const LinearField ph = phi_density(d), pp = pi_density(d), dph = ph.derivative();
  const double r = nu.r, mr2 = nu.mu * nu.mu * r * r;
  FockOperator op;
  op.matrix = 0.5 * quadratic_charge(b, pp, pp, r, w_hat).matrix +
              (0.5 / (r * r)) * quadratic_charge(b, dph, dph, r, w_hat).matrix +
              (0.5 * mr2 / (r * r)) * quadratic_charge(b, ph, ph, r, w_hat).matrix;
  if (!P.is_zero()) op.matrix += interaction(b, nu, P, w).matrix;
  op.hermitian = true;
  return op;
}

FockOperator momentum_charge_density(const FockBasis& b, const NuParameter& nu) {
  const op::DispersionTable d = op::dispersion(nu, b.K);
  const LinearField ph = phi_density(d), pp = pi_density(d);
  const auto one = [](int q) { return q == 0 ? cplx(1.0) : cplx(0.0); };
  FockOperator op;
  op.matrix = (-1.0 / nu.r) * quadratic_charge(b, pp, ph.derivative(), nu.r, one).matrix;
  op.hermitian = true;
  return op;
}

namespace {
double max_abs_interior(const FockBasis& b, const SpMat& m, int mode_margin, int particle_margin) {
  double mx = 0.0;
  for (long j = 0; j < m.outerSize(); ++j) {
    if (!b.interior(j, mode_margin, particle_margin)) continue;
    for (SpMat::InnerIterator it(m, j); it; ++it)
      if (b.interior(it.row(), mode_margin, particle_margin)) mx = std::max(mx, std::abs(it.value()));
  }
  return mx;
}

double frobenius_ratio(const SpMat& a, const SpMat& ref) {
  cplx num = 0.0;
  double den = 0.0;
  for (long j = 0; j < ref.outerSize(); ++j)
    for (SpMat::InnerIterator it(ref, j); it; ++it) {
      num += std::conj(it.value()) * a.coeff(it.row(), j);
      den += std::norm(it.value());
    }
  return den > 0 ? num.real() / den : 0.0;
}
}  // namespace

ChargeReport stress_energy_charges(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P) {
  ChargeReport rep;
  const PolynomialInteraction zero{{0.0}, true};
  const FockOperator L0 = free_boost(b, nu, 0.0);
  const FockOperator Lq = boost_charge_density(b, nu, zero, 0);
  rep.l_pinned = frobenius_ratio(Lq.matrix, L0.matrix);
  const FockOperator K0 = rotation_generator(b);
  const FockOperator Kq = momentum_charge_density(b, nu);
  rep.k_pinned = frobenius_ratio(Kq.matrix, K0.matrix);
  const FockOperator Lc = boost_charge_density(b, nu, P, 0);
  const FockOperator Lref = interacting_boost(b, nu, P, 0.0);
  rep.l_residual = max_abs_interior(b, SpMat(Lc.matrix / rep.l_pinned - Lref.matrix), 1, 1);
  rep.k_residual = max_abs_interior(b, SpMat(Kq.matrix / rep.k_pinned - K0.matrix), 0, 0);
  return rep;
}

SplitReport boost_split(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P) {
  SplitReport rep;
  const FockOperator Lp = boost_charge_density(b, nu, P, +1);
  const FockOperator Lm = boost_charge_density(b, nu, P, -1);
  const FockOperator L = boost_charge_density(b, nu, P, 0);
  const SpMat diff = Lp.matrix + Lm.matrix - L.matrix;
  for (long j = 0; j < diff.outerSize(); ++j)
    for (SpMat::InnerIterator it(diff, j); it; ++it) rep.additivity = std::max(rep.additivity, std::abs(it.value()));
  // rotation-invariant energy int r dpsi T00: weight 1/r against the r^2 dpsi measure
  const op::DispersionTable d = op::dispersion(nu, b.K);
  const LinearField ph = phi_density(d), pp = pi_density(d), dph = ph.derivative();
  const double r = nu.r, mr2 = nu.mu * nu.mu * r * r;
  const auto w_hat = [r](int q) { return q == 0 ? cplx(1.0 / r) : cplx(0.0); };
  FockOperator E;
  E.matrix = 0.5 * quadratic_charge(b, pp, pp, r, w_hat).matrix +
             (0.5 / (r * r)) * quadratic_charge(b, dph, dph, r, w_hat).matrix +
             (0.5 * mr2 / (r * r)) * quadratic_charge(b, ph, ph, r, w_hat).matrix;
  if (!P.is_zero()) {
    CircleFunction one(0, r);
    one[0] = std::sqrt(2.0 * kPi * r) / r;
    E.matrix += interaction(b, nu, P, one).matrix;
  }
  const double e_min = hermitian_spectrum(E, false).values.minCoeff();
  const double c1 = std::max(0.0, -e_min) / (2.0 * kPi * r);
  rep.c0 = 2.0 * r * r * c1;
  rep.min_plus = hermitian_spectrum(Lp, false).values.minCoeff() + rep.c0;
  rep.max_minus = hermitian_spectrum(Lm, false).values.maxCoeff() - rep.c0;
  return rep;
}

namespace {
CircleFunction widen(const CircleFunction& h, int K) {
  CircleFunction g(K, h.r);
  for (int k = -std::min(K, h.K); k <= std::min(K, h.K); ++k) g[k] = h[k];
  return g;
}
CircleFunction times_cos(const CircleFunction& h) {
  CircleFunction g(h.K + 1, h.r);
  for (int k = -g.K; k <= g.K; ++k) g[k] = 0.5 * (h[k - 1] + h[k + 1]);
  return g;
}
CircleFunction derivative(const CircleFunction& h) {
  CircleFunction g = h;
  for (int k = -h.K; k <= h.K; ++k) g[k] *= I * double(k);
  return g;
}
}  // namespace

EomReport eom_residual(const FockBasis& b, const NuParameter& nu, const PolynomialInteraction& P,
                       const CircleFunction& h) {
  int band = 0;
  for (int k = -h.K; k <= h.K; ++k)
    if (h[k] != 0.0) band = std::max(band, std::abs(k));
  if (band > b.K - 2) throw std::invalid_argument("eom_residual: h must be band-limited to |k| <= K - 2");
  P.validate();
  const double r = nu.r, mr2 = nu.mu * nu.mu * r * r;
  const BoostApply L = make_boost(b, nu, P, cos_alpha(0.0, 1, r), false);
  const FockOperator ph = phi(b, nu, h);
  const CircleFunction ch = times_cos(h), cch = times_cos(ch);
  CircleFunction e2 = widen(derivative(times_cos(derivative(ch))), cch.K);
  for (int k = -e2.K; k <= e2.K; ++k) e2[k] = -e2[k] + mr2 * cch[k];
  const FockOperator ph_e2 = phi(b, nu, e2);
  const FockOperator pi_c = pi(b, nu, ch);

  const Eigen::VectorXcd v = vacuum(b);
  const Eigen::VectorXcd Lv = L(v), LLv = L(Lv);
  const Eigen::VectorXcd pv = ph.matrix * v;
  const Eigen::VectorXcd Lpv = L(pv);
  const Eigen::VectorXcd double_comm = L(Lpv) - 2.0 * L(Eigen::VectorXcd(ph.matrix * Lv)) + ph.matrix * LLv;
  Eigen::VectorXcd R = -double_comm + ph_e2.matrix * v;
  if (P.degree() > 0) {
    const WickNodeOperator dP(b, nu, P.derivative(), cch, r * r);
    R += dP.apply(v);
  }
  EomReport rep;
  const double ref = (ph_e2.matrix * v).norm();
  rep.residual = ref > 0 ? R.norm() / ref : R.norm();
  const Eigen::VectorXcd first = Lpv - ph.matrix * Lv + I * r * (pi_c.matrix * v);
  rep.first_commutator = first.norm();
  return rep;
}

}  // namespace dscalar::fock
