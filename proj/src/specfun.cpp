#include "dscalar/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace dscalar::specfun {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_0 .. B_22
constexpr std::array<double, 23> bernoulli = {
    1.0,           -0.5, 1.0 / 6.0,      0.0, -1.0 / 30.0,     0.0, 1.0 / 42.0,       0.0,
    -1.0 / 30.0,   0.0,  5.0 / 66.0,     0.0, -691.0 / 2730.0, 0.0, 7.0 / 6.0,        0.0,
    -3617.0 / 510, 0.0,  43867.0 / 798., 0.0, -174611.0 / 330, 0.0, 854513.0 / 138.0};

bool near_nonpositive_integer(cplx z, double tol) {
  if (std::abs(z.imag()) > tol || z.real() > 0.5) return false;
  return std::abs(z.real() - std::round(z.real())) <= tol;
}

cplx lanczos_sum(cplx w) {
  cplx x = lanczos_c[0];
  for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (w + double(i));
  return x;
}

// the g=7 Lanczos sum tends to 0.99999999999981 at infinity, so large |z| goes through Stirling
cplx stirling_gamma(cplx z) {
  using lc = std::complex<long double>;
  lc x(z.real(), z.imag());
  const long double b[] = {1.0L / 6,          -1.0L / 30,         1.0L / 42,         -1.0L / 30,
                           5.0L / 66,         -691.0L / 2730,     7.0L / 6,          -3617.0L / 510,
                           43867.0L / 798,    -174611.0L / 330};
  const lc w = 1.0L / (x * x);
  lc xi = 1.0L / x, ser = 0.0L;
  for (int k = 1; k <= 10; ++k) {
    ser += b[k - 1] / ((2.0L * k) * (2.0L * k - 1.0L)) * xi;
    xi *= w;
  }
  const lc e = (x - 0.5L) * std::log(x) - x + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) + ser;
  const lc g = std::exp(e);
  return cplx(double(g.real()), double(g.imag()));
}

cplx bernoulli_poly(int n, cplx a) {
  // sum_j C(n,j) B_j a^{n-j}, evaluated by Horner in a
  cplx acc = 0.0;
  double binom = 1.0;
  std::array<double, 23> coef{};
  for (int j = 0; j <= n; ++j) {
    coef[j] = binom * bernoulli[j];
    binom = binom * double(n - j) / double(j + 1);
  }
  // coefficient of a^{n-j} is coef[j]
  for (int j = 0; j <= n; ++j) acc = acc * a + coef[j];
  return acc;
}

bool integer_degree(cplx s, int& n) {
  if (s.imag() != 0.0) return false;
  double rs = std::round(s.real());
  if (std::abs(s.real() - rs) > 1e-15) return false;
  n = rs >= 0 ? int(rs) : int(-1 - rs);
  return true;
}

// terminating 2F1 with a = -n
cplx hyp2f1_terminating(int n, cplx b, cplx c, cplx z) {
  cplx sum = 1.0, term = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (double(k - n)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * z;
    sum += term;
  }
  return sum;
}

cplx legendre_about_minus_one_x2(cplx s, cplx x2) {
  const cplx a = -s, b = s + 1.0;
  const cplx lx = std::log(x2);
  cplx psi1 = -std::numbers::egamma;
  cplx psia = digamma(a), psib = digamma(b);
  cplx coef = 1.0, pw = 1.0, sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    cplx t = coef * pw * (2.0 * psi1 - psia - psib - lx);
    sum += t;
    if (k > 2 && std::abs(t) <= 1e-17 * std::abs(sum)) break;
    coef *= (a + double(k)) * (b + double(k)) / (double(k + 1) * double(k + 1));
    pw *= x2;
    psi1 += 1.0 / double(k + 1);
    psia += 1.0 / (a + double(k));
    psib += 1.0 / (b + double(k));
  }
  return rgamma(a) * rgamma(b) * sum;
}

cplx legendre_about_minus_one(cplx s, cplx z) { return legendre_about_minus_one_x2(s, 0.5 * (1.0 + z)); }

// (1/2) d/dx2 of the log series without its k=0 pole term
cplx legendre_prime_remainder_series(cplx s, cplx x2) {
  const cplx a = -s, b = s + 1.0;
  const cplx lx = std::log(x2);
  cplx psi1 = -std::numbers::egamma;
  cplx psia = digamma(a), psib = digamma(b);
  cplx coef = 1.0, pw = 1.0, sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    coef *= (a + double(k)) * (b + double(k)) / (double(k + 1) * double(k + 1));
    psi1 += 1.0 / double(k + 1);
    psia += 1.0 / (a + double(k));
    psib += 1.0 / (b + double(k));
    const int m = k + 1;
    cplx t = coef * pw * (double(m) * (2.0 * psi1 - psia - psib - lx) - 1.0);
    sum += t;
    if (k > 2 && std::abs(t) <= 1e-17 * std::abs(sum)) break;
    pw *= x2;
  }
  return 0.5 * rgamma(a) * rgamma(b) * sum;
}

cplx legendre_large_z_raw(cplx s, cplx z) {
  const cplx w = 1.0 / (z * z);
  const double sqpi = std::sqrt(pi);
  cplx t1 = gamma_ratio(s, 0.5, 1.0) / sqpi * std::pow(2.0 * z, s) *
            hyp2f1(-0.5 * s, 0.5 * (1.0 - s), 0.5 - s, w);
  cplx t2 = gamma_ratio(-s, -0.5, 0.0) / sqpi * std::pow(2.0 * z, -s - 1.0) *
            hyp2f1(0.5 * (s + 1.0), 0.5 * (s + 2.0), s + 1.5, w);
  return t1 + t2;
}

cplx legendre_large_z(cplx s, cplx z) {
  cplx h = s + 0.5;
  cplx dist = h - std::round(h.real());
  if (std::abs(dist) < 1e-6) {
    // both Gamma prefactors are singular on s in -1/2 + Z; symmetric extrapolation in the degree
    const cplx s0 = std::round(h.real()) - 0.5;
    const double d = 1e-3;
    auto avg = [&](double e) {
      return 0.5 * (legendre_large_z_raw(s0 + e, z) + legendre_large_z_raw(s0 - e, z));
    };
    // value at s0, then Taylor back to s
    cplx f0 = (4.0 * avg(d) - avg(2 * d)) / 3.0;
    if (std::abs(dist) == 0.0) return f0;
    cplx fp = (legendre_large_z_raw(s0 + d, z) - legendre_large_z_raw(s0 - d, z)) / (2 * d);
    return f0 + fp * dist;
  }
  return legendre_large_z_raw(s, z);
}

cplx legendre_principal(cplx s, cplx z) {
  if (z.imag() == 0.0 && z.real() <= -1.0)
    throw std::domain_error("legendre_p: argument on the cut (-inf,-1] with principal branch");
  const cplx x1 = 0.5 * (1.0 - z), x2 = 0.5 * (1.0 + z);
  int n;
  if (integer_degree(s, n)) return hyp2f1_terminating(n, double(n + 1), 1.0, x1);
  if (std::abs(x1) <= 0.5) return hyp2f1(-s, s + 1.0, 1.0, x1);
  if (std::abs(x2) <= 0.5) return legendre_about_minus_one(s, z);
  if (std::abs(z) >= 1.5) return legendre_large_z(s, z);
  if (std::abs(x1) <= std::abs(x2)) return hyp2f1(-s, s + 1.0, 1.0, x1);
  return legendre_about_minus_one(s, z);
}

cplx legendre_prime_principal(cplx s, cplx z) {
  if (z.imag() == 0.0 && z.real() <= -1.0)
    throw std::domain_error("legendre_p_prime: argument on the cut (-inf,-1] with principal branch");
  const cplx x1 = 0.5 * (1.0 - z);
  int n;
  if (integer_degree(s, n)) {
    if (n == 0) return 0.0;
    return 0.5 * double(n) * double(n + 1) * hyp2f1_terminating(n - 1, double(n + 2), 2.0, x1);
  }
  if (std::abs(x1) <= 0.5) return 0.5 * s * (s + 1.0) * hyp2f1(1.0 - s, s + 2.0, 2.0, x1);
  return s * (z * legendre_principal(s, z) - legendre_principal(s - 1.0, z)) / (z * z - 1.0);
}

template <class F>
cplx boundary_limit(F&& f, cplx z, Branch br) {
  if (br == Branch::principal) return f(z);
  const double sgn = br == Branch::upper ? 1.0 : -1.0;
  const std::array<double, 3> d = {1e-5, 1e-6, 1e-7};
  std::array<cplx, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = f(z + sgn * I * d[i]);
  cplx out = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= d[j] / (d[j] - d[i]);
    out += w * v[i];
  }
  return out;
}

}  // namespace

cplx gamma(cplx z, const Tolerances& tol) {
  if (near_nonpositive_integer(z, tol.pole)) throw pole_error("gamma: pole at non-positive integer");
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z, tol));
  if (std::abs(z) >= 15.0) return stirling_gamma(z);
  const cplx w = z - 1.0;
  const cplx t = w + lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::exp((w + 0.5) * std::log(t) - t) * lanczos_sum(w);
}

cplx rgamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real())) return 0.0;
  if (z.real() < 0.5) return std::sin(pi * z) / pi * gamma(1.0 - z);
  return 1.0 / gamma(z);
}

cplx lgamma(cplx z) {
  if (near_nonpositive_integer(z, 1e-14)) throw pole_error("lgamma: pole at non-positive integer");
  if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - lgamma(1.0 - z);
  const cplx w = z - 1.0;
  const cplx t = w + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t + std::log(lanczos_sum(w));
}

cplx digamma(cplx z) {
  if (near_nonpositive_integer(z, 1e-14)) throw pole_error("digamma: pole at non-positive integer");
  if (z.real() < 0.5) return digamma(1.0 - z) - pi / std::tan(pi * z);
  cplx acc = 0.0;
  while (std::abs(z) < 12.0 || z.real() < 6.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx w = 1.0 / (z * z);
  cplx series =
      w * (-1.0 / 12 +
           w * (1.0 / 120 +
                w * (-1.0 / 252 +
                     w * (1.0 / 240 + w * (-1.0 / 132 + w * (691.0 / 32760 + w * (-1.0 / 12)))))));
  return acc + std::log(z) - 0.5 / z + series;
}

cplx gamma_ratio(cplx x, cplx a, cplx b) {
  const double amax = std::max(std::abs(a), std::abs(b));
  const double x0 = 30.0 + 8.0 * amax;
  if (x.real() < -x0) {
    const cplx sa = std::sin(pi * (x + a));
    if (std::abs(sa) == 0.0) throw pole_error("gamma_ratio: numerator Gamma at a pole");
    return std::sin(pi * (x + b)) / sa * gamma_ratio(-x, 1.0 - b, 1.0 - a);
  }
  cplx prod = 1.0;
  while (x.real() < x0) {
    const cplx xa = x + a;
    if (std::abs(xa) < 1e-14) throw pole_error("gamma_ratio: numerator Gamma at a pole");
    prod *= (x + b) / xa;
    x += 1.0;
  }
  cplx lr = (a - b) * std::log(x);
  cplx xn = 1.0;
  for (int n = 1; n <= 21; ++n) {
    xn *= x;
    cplx t = (bernoulli_poly(n + 1, a) - bernoulli_poly(n + 1, b)) / (double(n) * double(n + 1) * xn);
    if (n % 2 == 0) t = -t;
    lr += t;
  }
  return prod * std::exp(lr);
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const Tolerances& tol) {
  if (near_nonpositive_integer(c, tol.pole)) throw pole_error("hyp2f1: c is a non-positive integer");
  if (std::abs(z) >= 1.0 && z != cplx(0.5))
    throw std::domain_error("hyp2f1: series requires |z| < 1");
  cplx sum = 1.0, term = 1.0;
  for (int n = 0; n < tol.max_terms; ++n) {
    const cplx fac = (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1));
    term *= fac * z;
    sum += term;
    if (term == 0.0) return sum;
    const double rho = std::abs(fac * z);
    if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw convergence_error("hyp2f1: series did not converge within the term limit");
}

cplx legendre_p(cplx s, EvalPoint p) {
  return boundary_limit([&](cplx z) { return legendre_principal(s, z); }, p.z, p.branch);
}

cplx legendre_p_prime(cplx s, EvalPoint p) {
  return boundary_limit([&](cplx z) { return legendre_prime_principal(s, z); }, p.z, p.branch);
}

cplx legendre_p_x2(cplx s, cplx x2) {
  int n;
  if (!integer_degree(s, n) && std::abs(x2) <= 0.5) {
    if (x2.imag() == 0.0 && x2.real() <= 0.0)
      throw std::domain_error("legendre_p_x2: argument on the cut with principal branch");
    return legendre_about_minus_one_x2(s, x2);
  }
  return legendre_principal(s, 2.0 * x2 - 1.0);
}

cplx legendre_p_prime_remainder(cplx s, cplx x2) {
  const cplx pole = std::sin(pi * s) / pi / (2.0 * x2);
  int n;
  if (!integer_degree(s, n) && std::abs(x2) <= 0.5) {
    if (x2.imag() == 0.0 && x2.real() <= 0.0)
      throw std::domain_error("legendre_p_prime_remainder: argument on the cut");
    return legendre_prime_remainder_series(s, x2);
  }
  return legendre_prime_principal(s, 2.0 * x2 - 1.0) - pole;
}

cplx assoc_legendre(cplx s, int k, cplx z) {
  if (k < 0) throw std::domain_error("assoc_legendre: k must be non-negative");
  const cplx x1 = 0.5 * (1.0 - z);
  if (std::abs(x1) >= 1.0) throw std::domain_error("assoc_legendre: requires |1-z| < 2");
  cplx pref = gamma_ratio(s, double(k) + 1.0, double(1 - k));
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) fact *= 2.0 * j;
  const cplx root = std::sqrt(z * z - 1.0);
  return pref * std::pow(root, k) / fact * hyp2f1(double(k) - s, double(k) + s + 1.0, double(k) + 1.0, x1);
}

cplx assoc_legendre_boundary(cplx s, int k, int sign) {
  if (k < 0) throw std::domain_error("assoc_legendre_boundary: k must be non-negative");
  const double sg = sign >= 0 ? 1.0 : -1.0;
  const cplx phase = std::exp(sg * I * (double(k) * pi / 2.0));
  cplx pref = gamma_ratio(s, double(k) + 1.0, double(1 - k));
  return phase * std::sqrt(pi) * pref / std::pow(2.0, k) * rgamma(0.5 * (double(k) - s + 1.0)) *
         rgamma(0.5 * (double(k) + s) + 1.0);
}

}  // namespace dscalar::specfun
