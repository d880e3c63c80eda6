#pragma once

#include <string>
#include <vector>

#include "checks.hpp"

namespace dscalar::cli {

enum ExitCode { exit_pass = 0, exit_check_failure = 1, exit_usage = 2 };

int cmd_verify(const RunConfig& cfg);
int cmd_table(const RunConfig& cfg, const std::string& what);
int cmd_scenario(const RunConfig& cfg, const std::string& name, double t);
int cmd_twopoint(const RunConfig& cfg, const std::string& z1, const std::string& z2, const std::string& method);
int cmd_rep_check(const RunConfig& cfg);
int cmd_rep_coeffs(const RunConfig& cfg, const std::string& what);
int cmd_kms(const RunConfig& cfg, double t);
int cmd_kg_evolve(const RunConfig& cfg, double t, const std::string& init, const std::string& snapshot);
int cmd_fock(const RunConfig& cfg, const std::string& what);
int cmd_fock_dump(const RunConfig& cfg, const std::string& what);
int cmd_specfun_eval(const RunConfig& cfg, const std::string& fn, const std::string& z, const std::string& s,
                     const std::vector<std::string>& abc);

// "re,im" or "re" into a complex number; comma-separated list of such points
cplx parse_complex(const std::string& text);
std::vector<double> parse_numbers(const std::string& csv);

}  // namespace dscalar::cli
