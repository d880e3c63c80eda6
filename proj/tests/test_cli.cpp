#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const char* bin = std::getenv("DSCALAR_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  for (size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream l(line);
    for (std::string c; std::getline(l, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("verify passes at the defaults and reports schema 1") {
  const Run r = run("verify");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "verify");
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() > 20);
  for (const auto& row : j["checks"]) {
    CHECK(row.contains("check_name"));
    CHECK(row.contains("residual"));
    CHECK(row.contains("tolerance"));
    CHECK(row["pass"] == true);
  }
}

TEST_CASE("reports are byte-identical across runs") {
  const Run a = run("rep check --seed 7"), b = run("rep check --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run("table pk --K 12"), d = run("table pk --K 12");
  CHECK(c.out == d.out);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("verify --poly 0,a").code == 2);
  CHECK(run("fock vacuum --K 2 --N 2 --poly 0,0,0,1").code == 2);
  CHECK(run("rep check --poly 0,0,0,1").code == 0);
  CHECK(run("verify --mu 0.3 --series principal").code == 2);
  CHECK(run("verify --mu -1").code == 2);
  CHECK(run("table bogus").code == 2);
  CHECK(run("nonexistent").code == 2);
  CHECK(run("rep coeffs --what rho").code == 2);
  CHECK(run("verify --tol.rep.c0").code == 2);
}

TEST_CASE("DSCALAR_THREADS must be a positive integer") {
  const char* bin = std::getenv("DSCALAR_BIN");
  REQUIRE(bin != nullptr);
  const auto code = [&](const std::string& env) {
    const int s = std::system((env + " " + bin + " table omega --K 1 >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(code("DSCALAR_THREADS=1") == 0);
  CHECK(code("DSCALAR_THREADS=0") == 2);
  CHECK(code("DSCALAR_THREADS=x") == 2);
}

TEST_CASE("a tightened tolerance turns a pass into a failure") {
  const Run ok = run("rep check");
  CHECK(ok.code == 0);
  const Run bad = run("rep check --tol.rep.c0=1e-300");
  CHECK(bad.code == 1);
  const auto j = nlohmann::json::parse(bad.out);
  CHECK(j["all_pass"] == false);
  CHECK(j["config"]["tolerances"]["rep.c0"] == 1e-300);
}

TEST_CASE("omega table with K = 0 has a single row") {
  const Run r = run("table omega --K 0");
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "k");
  CHECK(rows[1][0] == "0");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.7394628242670489594).epsilon(1e-12));
}

TEST_CASE("c_k table has unit modulus in the principal series") {
  const Run r = run("table ck --K 40 --mu 1.7");
  CHECK(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 42);
  CHECK(rows[0][3] == "abs");
  for (size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][3]) - 1.0) < 1e-12);
}

TEST_CASE("two-point report carries the value and a cross-check") {
  const Run r = run("twopoint");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"value_re", "value_im", "cross_check_rel_err", "pass", "config", "schema"})
    CHECK(j.contains(key));
  CHECK(j["cross_check_rel_err"].get<double>() < 1e-8);
  CHECK(run("twopoint --z1 1,0,0,0,0,0").code == 2);
}

TEST_CASE("csv format and output file") {
  const std::string path = "dscalar_cli_test_report.csv";
  CHECK(run("rep check --format csv --out " + path).code == 0);
  FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[256] = {};
  CHECK(std::fgets(line, sizeof line, f) != nullptr);
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(std::string(line).rfind("check_name,residual,tolerance,pass", 0) == 0);
}

TEST_CASE("special function evaluation") {
  const Run r = run("specfun eval --fn gamma --z 0.5,0.7");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["output"][0].get<double>() == doctest::Approx(0.5274198573183714).epsilon(1e-13));
  CHECK(j["output"][1].get<double>() == doctest::Approx(-0.640449474845219).epsilon(1e-13));
  CHECK(j["abs_err_estimate"].get<double>() < 1e-12);
}
