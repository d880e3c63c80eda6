#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dscalar/nu.hpp"
#include "dscalar/one_particle.hpp"

namespace dscalar::cli {

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  double mu = 1.0, r = 1.0;
  std::optional<Series> series;
  int K = -1, N = -1, M = -1;  // -1: per-check default
  std::string poly = "0,0,0,0,0.1";
  std::map<std::string, double> tol;  // --tol.<check_name>
  std::uint64_t seed = 20240601;
  std::string out;  // empty: stdout
  std::string format = "json";

  // throws usage_error on non-positive mu or r, or a series override that contradicts mu r
  NuParameter nu() const;
  void validate() const;
  double tolerance(const std::string& name, double fallback) const;
  int K_or(int fallback) const { return K >= 0 ? K : fallback; }
  int N_or(int fallback) const { return N >= 0 ? N : fallback; }
  int M_or(int fallback) const { return M > 0 ? M : fallback; }
};

struct CheckRow {
  std::string check_name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string reference;  // the identity or statement the row verifies
};

struct Report {
  std::vector<CheckRow> rows;
  // residual must be finite and <= tolerance
  void add(const RunConfig& cfg, const std::string& name, double residual, double default_tol,
           const std::string& reference);
  bool all_pass() const;
  const CheckRow* find(const std::string& name) const;
};

// each suite appends its rows; the defaults reproduce the acceptance parameters
void check_specfun(const RunConfig& cfg, Report& rep);
void check_dispersion(const RunConfig& cfg, Report& rep);
void check_legendre_coefficients(const RunConfig& cfg, Report& rep);
void check_kernel_form(const RunConfig& cfg, Report& rep);
void check_intertwiners(const RunConfig& cfg, Report& rep);
void check_lie_algebra(const RunConfig& cfg, Report& rep);
void check_two_point(const RunConfig& cfg, Report& rep);
void check_fourier_helgason(const RunConfig& cfg, Report& rep);
void check_magic_formula(const RunConfig& cfg, Report& rep);
void check_propagator(const RunConfig& cfg, Report& rep);
void check_fock_free(const RunConfig& cfg, Report& rep);
void check_fock_interacting(const RunConfig& cfg, Report& rep);

// all of the above
Report verify_suite(const RunConfig& cfg);

// interior-sector residuals of the truncated Fock operators
struct FockAlgebraReport {
  double ccr = 0;           // [a_k, a*_l] - delta_kl on states with at most N - 1 particles
  double ladder_vs_dgamma = 0;
  double commutator = 0;    // [L1, L2] + i K0 on states with no particle in |k| > K - 2
  double casimir = 0;       // -K0^2 + L1^2 + L2^2 - zeta^2 on one-particle states with |k| <= K - 2
};
FockAlgebraReport fock_algebra(int K, int N, const NuParameter& nu);

// multi-cutoff studies: one row per cutoff and a verdict on the trend
struct Trend {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string criterion;
  bool pass = false;
};
// one-particle KMS defect at K = 32, 64, 128 on a fixed smooth pair supported in I+
Trend kms_trend(const RunConfig& cfg, double t);
// interacting field-equation residual along the cutoff ladder (4,3), (6,4), (8,5)
Trend eom_trend(const RunConfig& cfg);
// interacting vacuum along the same ladder
Trend vacuum_trend(const RunConfig& cfg);
// leakage of evolved bump data at M = 256, 512, 1024
Trend finite_speed_trend(const RunConfig& cfg, double t);
// grid operator vs diag omega at M = 256, 512, 1024
Trend magic_trend(const RunConfig& cfg);

op::KmsReport kms_at(const NuParameter& nu, int K, double t);
CircleFunction eom_test_function(double r);

}  // namespace dscalar::cli
