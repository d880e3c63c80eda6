#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "json.hpp"

namespace dscalar::cli {

constexpr int report_schema = 1;

nlohmann::ordered_json config_json(const RunConfig& cfg);
// {schema, command, config, checks: [{check_name, residual, tolerance, pass, reference}], all_pass}
nlohmann::ordered_json report_json(const std::string& command, const RunConfig& cfg, const Report& rep);

// '.' decimal and 17 significant digits regardless of the global locale
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<double>> values;
  void add(const std::vector<double>& values);
  void write_csv(std::ostream& os) const;
};

void write_report(std::ostream& os, const std::string& format, const std::string& command, const RunConfig& cfg,
                  const Report& rep);
void write_json(std::ostream& os, const nlohmann::ordered_json& j);

}  // namespace dscalar::cli
