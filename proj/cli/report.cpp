#include "report.hpp"

#include <charconv>
#include <cmath>

namespace dscalar::cli {

namespace {
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}
}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json c;
  c["mu"] = cfg.mu;
  c["r"] = cfg.r;
  c["series"] = cfg.series ? (*cfg.series == Series::principal ? "principal" : "complementary") : "auto";
  c["K"] = cfg.K;
  c["N"] = cfg.N;
  c["M"] = cfg.M;
  c["poly"] = cfg.poly;
  c["seed"] = cfg.seed;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [name, v] : cfg.tol) t[name] = v;
  c["tolerances"] = t;
  return c;
}

nlohmann::ordered_json report_json(const std::string& command, const RunConfig& cfg, const Report& rep) {
  nlohmann::ordered_json j;
  j["schema"] = report_schema;
  j["command"] = command;
  j["config"] = config_json(cfg);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CheckRow& r : rep.rows) {
    nlohmann::ordered_json row;
    row["check_name"] = r.check_name;
    row["residual"] = number(r.residual);
    row["tolerance"] = number(r.tolerance);
    row["pass"] = r.pass;
    row["reference"] = r.reference;
    rows.push_back(row);
  }
  j["checks"] = rows;
  j["all_pass"] = rep.all_pass();
  return j;
}

void Table::add(const std::vector<double>& values) {
  std::vector<std::string> row;
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(row);
  this->values.push_back(values);
}

void Table::write_csv(std::ostream& os) const {
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_json(std::ostream& os, const nlohmann::ordered_json& j) { os << j.dump(2) << '\n'; }

void write_report(std::ostream& os, const std::string& format, const std::string& command, const RunConfig& cfg,
                  const Report& rep) {
  if (format == "csv") {
    os << "check_name,residual,tolerance,pass,reference\n";
    for (const CheckRow& r : rep.rows)
      os << r.check_name << ',' << format_number(r.residual) << ',' << format_number(r.tolerance) << ','
         << (r.pass ? "true" : "false") << ",\"" << r.reference << "\"\n";
    return;
  }
  write_json(os, report_json(command, cfg, rep));
}

}  // namespace dscalar::cli
