// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "dscalar/fock.hpp"
#include "report.hpp"

using namespace dscalar;
using namespace dscalar::cli;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void note(const std::string& s) { detail << (detail.tellp() > 0 ? "; " : "") << s; }
  // every row of the report passes at its tolerance; the worst residual/tolerance ratio is noted
  void rows(const Report& rep, const std::string& label) {
    double worst = 0;
    std::string name;
    for (const CheckRow& r : rep.rows) {
      if (!r.pass) {
        pass = false;
        note(label + " " + r.check_name + " = " + format_number(r.residual) + " > " + format_number(r.tolerance));
      }
      const double q = r.tolerance > 0 ? r.residual / r.tolerance : (r.residual > 0 ? INFINITY : 0.0);
      if (q >= worst) worst = q, name = r.check_name;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s worst %s at %.2g of tol", label.c_str(), name.c_str(), worst);
    note(buf);
  }
  void trend(const Trend& t, const std::string& label, int value_column) {
    if (!t.pass) pass = false;
    std::string s = label + " [";
    for (size_t i = 0; i < t.rows.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.3g", i ? ", " : "", t.rows[i][value_column]);
      s += buf;
    }
    note(s + "] " + (t.pass ? "ok" : "violates: " + t.criterion));
  }
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    note(what + (ok ? " ok" : " FAILED"));
  }
};

std::string mass_label(double mur) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mu r = %g", mur);
  return buf;
}

RunConfig at_mass(double mur) {
  RunConfig c;
  c.mu = mur;
  c.r = 1.0;
  return c;
}

Report run(const RunConfig& cfg, const std::vector<void (*)(const RunConfig&, Report&)>& suites) {
  Report rep;
  for (auto s : suites) s(cfg, rep);
  return rep;
}

}  // namespace

int main() {
  const std::vector<double> masses{0.3, 1.0, 2.5};
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1,
       [] {
         Outcome o;
         const auto t0 = std::chrono::steady_clock::now();
         Report rep;
         check_specfun(RunConfig{}, rep);
         const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
         Report gamma;
         for (const CheckRow& r : rep.rows)
           if (r.check_name.rfind("specfun.gamma.", 0) == 0) gamma.rows.push_back(r);
         o.rows(gamma, "gamma");
         o.require(gamma.rows.size() == 4 && secs < 1.0, "4 identities in " + std::to_string(secs) + " s");
         return o;
       }},
      {2,
       [&] {
         Outcome o;
         for (double m : masses) o.rows(run(at_mass(m), {check_dispersion}), mass_label(m));
         return o;
       }},
      {3,
       [&] {
         Outcome o;
         for (double m : masses) o.rows(run(at_mass(m), {check_legendre_coefficients}), mass_label(m));
         return o;
       }},
      {4,
       [&] {
         Outcome o;
         for (double m : {1.0, 2.5}) o.rows(run(at_mass(m), {check_intertwiners}), mass_label(m));
         return o;
       }},
      {5,
       [&] {
         Outcome o;
         for (double m : masses) {
           RunConfig c = at_mass(m);
           c.K = 128;
           o.rows(run(c, {check_lie_algebra}), mass_label(m));
         }
         return o;
       }},
      {6,
       [&] {
         Outcome o;
         for (double m : masses) o.rows(run(at_mass(m), {check_two_point}), mass_label(m));
         return o;
       }},
      {7,
       [] {
         Outcome o;
         o.trend(magic_trend(RunConfig{}), "deviation at M = 256, 512, 1024", 1);
         return o;
       }},
      {8,
       [] {
         Outcome o;
         o.rows(run(RunConfig{}, {check_propagator}), "propagator");
         o.trend(finite_speed_trend(RunConfig{}, 0.5), "leakage at M = 256, 512, 1024", 1);
         return o;
       }},
      {9,
       [] {
         Outcome o;
         RunConfig c;
         c.K = 6;
         c.N = 4;
         o.rows(run(c, {check_fock_free}), "(K,N) = (6,4)");
         return o;
       }},
      {10,
       [] {
         Outcome o;
         RunConfig c;
         c.poly = "0,0,0,0,0.1";
         const NuParameter nu = c.nu();
         const fock::InequalityReport q =
             fock::inequality_check(fock::build_basis(4, 4), nu, fock::PolynomialInteraction::parse(c.poly));
         o.require(q.pb_margin >= -1e-12, "Peierls-Bogoliubov margin " + format_number(q.pb_margin));
         o.require(q.gt_margin >= -1e-12, "Golden-Thompson margin " + format_number(q.gt_margin));
         o.trend(vacuum_trend(c), "<K0> along (4,3), (6,4), (8,5)", 3);
         RunConfig c64 = c;
         c64.K = 6;
         c64.N = 4;
         Report split;
         check_fock_interacting(c64, split);
         Report add;
         if (const CheckRow* r = split.find("fock.boost_additivity")) add.rows.push_back(*r);
         o.require(add.rows.size() == 1, "additivity row present");
         o.rows(add, "split");
         RunConfig free = c;
         free.poly = "0";
         o.trend(eom_trend(free), "free EOM residual", 3);
         o.trend(eom_trend(c), "interacting EOM residual", 3);
         return o;
       }},
      {11,
       [] {
         Outcome o;
         const Trend t = kms_trend(RunConfig{}, 0.3);
         o.trend(t, "KMS defect at K = 32, 64, 128", 1);
         o.note("defect at K = 128: " + format_number(t.rows.back()[1]));
         return o;
       }},
      {12,
       [] {
         Outcome o;
         const RunConfig c;
         const std::string a = report_json("verify", c, verify_suite(c)).dump(2);
         const std::string b = report_json("verify", c, verify_suite(c)).dump(2);
         o.require(a == b, "two verify reports of " + std::to_string(a.size()) + " bytes byte-identical");
         return o;
       }},
  };

  int failed = 0;
  for (const auto& [id, crit] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s (%.1f s) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria pass\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
