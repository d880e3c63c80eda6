#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace dscalar;
using namespace dscalar::cli;

namespace {

// --tol.<name>=<value> and --tol.<name> <value> are pulled out before CLI11 sees the arguments
std::vector<std::string> extract_tolerances(int argc, char** argv, RunConfig& cfg) {
  std::vector<std::string> rest;
  for (int i = 0; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6), value;
    const auto eq = name.find('=');
    if (eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= argc) throw usage_error("--tol." + name + " needs a value");
      value = argv[++i];
    }
    if (name.empty()) throw usage_error("--tol. needs a check name");
    const std::vector<double> v = parse_numbers(value);
    if (v.size() != 1) throw usage_error("--tol." + name + " takes one number");
    cfg.tol[name] = v[0];
  }
  return rest;
}

void check_threads() {
  const char* env = std::getenv("DSCALAR_THREADS");
  if (!env) return;
  const std::vector<double> v = parse_numbers(env);
  if (v.size() != 1 || !(v[0] >= 1) || v[0] != std::floor(v[0]))
    throw usage_error("DSCALAR_THREADS must be a positive integer");
  // all computations are single-threaded, so any cap is honoured
}

void add_common(CLI::App* app, RunConfig& cfg, std::string& series) {
  app->add_option("--mu", cfg.mu, "mass mu > 0");
  app->add_option("--r", cfg.r, "de Sitter radius r > 0");
  app->add_option("--series,--nu-series", series, "principal or complementary (must match mu r)")
      ->check(CLI::IsMember({"principal", "complementary"}));
  app->add_option("--K", cfg.K, "mode cutoff");
  app->add_option("--N", cfg.N, "particle-number cutoff");
  app->add_option("--M", cfg.M, "grid size of the time-zero circle");
  app->add_option("--poly", cfg.poly, "interaction coefficients c0,c1,... of P(x) = sum c_n x^n");
  app->add_option("--seed", cfg.seed, "seed of the random test points");
  app->add_option("--out", cfg.out, "output path (default stdout)");
  app->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string series;
  std::vector<std::string> args;
  try {
    args = extract_tolerances(argc, argv, cfg);
    check_threads();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }

  CLI::App app{"dscalar: free and interacting scalar fields on two-dimensional de Sitter space"};
  app.require_subcommand(1);
  std::function<int()> run;

  auto* verify = app.add_subcommand("verify", "run every module's invariant suite");
  add_common(verify, cfg, series);
  verify->callback([&] { run = [&] { return cmd_verify(cfg); }; });

  std::string what;
  auto* table = app.add_subcommand("table", "CSV tables: omega, pk, ck, spectrum");
  table->add_option("what", what)->required();
  add_common(table, cfg, series);
  table->callback([&] { run = [&] { return cmd_table(cfg, what); }; });

  for (const char* name : {"omega", "pk"}) {
    auto* t = app.add_subcommand(name, std::string("alias of table ") + name);
    add_common(t, cfg, series);
    t->callback([&, name] { run = [&, name] { return cmd_table(cfg, name); }; });
  }

  double t_param = 0.3;
  auto* kms = app.add_subcommand("kms", "one-particle KMS defect at a single cutoff");
  kms->add_option("--t", t_param, "real time");
  add_common(kms, cfg, series);
  kms->callback([&] { run = [&] { return cmd_kms(cfg, t_param); }; });

  std::string scenario;
  double scenario_t = NAN;
  auto* sc = app.add_subcommand("scenario", "multi-cutoff studies: kms, eom-trend, vacuum-trend, finite-speed, magic");
  sc->add_option("name", scenario)->required();
  sc->add_option("--t", scenario_t, "time parameter (kms: 0.3, finite-speed: 0.5)");
  add_common(sc, cfg, series);
  sc->callback([&] {
    run = [&] {
      const double t = std::isnan(scenario_t) ? (scenario == "kms" ? 0.3 : 0.5) : scenario_t;
      return cmd_scenario(cfg, scenario, t);
    };
  });

  std::string z1, z2, method = "legendre";
  auto* tp = app.add_subcommand("twopoint", "two-point function at a pair of tuboid points");
  tp->add_option("--z1", z1, "forward tuboid point re0,im0,re1,im1,re2,im2");
  tp->add_option("--z2", z2, "backward tuboid point re0,im0,re1,im1,re2,im2");
  tp->add_option("--method", method)->check(CLI::IsMember({"contour", "legendre"}));
  add_common(tp, cfg, series);
  tp->callback([&] { run = [&] { return cmd_twopoint(cfg, z1, z2, method); }; });

  auto* rep = app.add_subcommand("rep", "representation-theory reports");
  rep->require_subcommand(1);
  auto* rep_check = rep->add_subcommand("check", "intertwiner and Lie-algebra residuals");
  add_common(rep_check, cfg, series);
  rep_check->callback([&] { run = [&] { return cmd_rep_check(cfg); }; });
  std::string coeff_what = "ck";
  auto* rep_coeffs = rep->add_subcommand("coeffs", "CSV of c_k or of the Fourier coefficients of rho");
  rep_coeffs->add_option("--what", coeff_what)->check(CLI::IsMember({"ck", "rho"}));
  add_common(rep_coeffs, cfg, series);
  rep_coeffs->callback([&] { run = [&] { return cmd_rep_coeffs(cfg, coeff_what); }; });

  auto* kgc = app.add_subcommand("kg", "classical Klein-Gordon Cauchy problem");
  kgc->require_subcommand(1);
  double kg_t = 0.5;
  std::string init = "bump", snapshot;
  auto* evolve = kgc->add_subcommand("evolve", "evolve Cauchy data under the wedge boost");
  evolve->add_option("--t", kg_t, "boost time");
  evolve->add_option("--init", init)->check(CLI::IsMember({"bump", "mode"}));
  evolve->add_option("--snapshot", snapshot, "CSV of the data at times 0 and t");
  add_common(evolve, cfg, series);
  evolve->callback([&] { run = [&] { return cmd_kg_evolve(cfg, kg_t, init, snapshot); }; });

  auto* fk = app.add_subcommand("fock", "truncated Fock-space reports");
  fk->require_subcommand(1);
  for (const char* name : {"spectrum", "vacuum", "eom", "inequalities", "split"}) {
    auto* s = fk->add_subcommand(name);
    add_common(s, cfg, series);
    s->callback([&, name] { run = [&, name] { return cmd_fock(cfg, name); }; });
  }
  std::string dump_what = "boost";
  auto* dump = fk->add_subcommand("dump", "operator as sparse triplet CSV (row, col, re, im)");
  dump->add_option("--what", dump_what)->check(CLI::IsMember({"boost", "free-boost", "rotation", "interaction"}));
  add_common(dump, cfg, series);
  dump->callback([&] { run = [&] { return cmd_fock_dump(cfg, dump_what); }; });

  auto* sf = app.add_subcommand("specfun", "special functions");
  sf->require_subcommand(1);
  std::string fn = "gamma", zs = "0.5,0.7", ss, a, b, c;
  auto* eval = sf->add_subcommand("eval", "evaluate one special function");
  eval->add_option("--fn", fn);
  eval->add_option("--z", zs, "argument re,im");
  eval->add_option("--s", ss, "Legendre degree re,im (default s+ of the configured mass)");
  eval->add_option("--a", a);
  eval->add_option("--b", b);
  eval->add_option("--c", c);
  add_common(eval, cfg, series);
  eval->callback([&] {
    run = [&] {
      std::vector<std::string> abc;
      if (!a.empty() || !b.empty() || !c.empty()) abc = {a, b, c};
      return cmd_specfun_eval(cfg, fn, zs, ss, abc);
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    if (!series.empty()) cfg.series = series == "principal" ? Series::principal : Series::complementary;
    cfg.validate();
    return run();
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_check_failure;
  }
}
