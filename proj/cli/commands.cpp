#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "dscalar/classical_kg.hpp"
#include "dscalar/fock.hpp"
#include "dscalar/harmonic.hpp"
#include "dscalar/one_particle.hpp"
#include "dscalar/rep_so12.hpp"
#include "dscalar/specfun.hpp"
#include "report.hpp"

namespace dscalar::cli {

using nlohmann::ordered_json;

namespace {
constexpr double pi = std::numbers::pi;

class Output {
 public:
  explicit Output(const RunConfig& cfg) {
    if (cfg.out.empty()) return;
    file_.open(cfg.out);
    if (!file_) throw usage_error("cannot open output file " + cfg.out);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

ordered_json header(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = report_schema;
  j["command"] = command;
  j["config"] = config_json(cfg);
  return j;
}

ordered_json rows_json(const Report& rep) {
  return report_json("", RunConfig{}, rep)["checks"];
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw usage_error("not a number: '" + text + "'");
  return v;
}

int emit_trend(const RunConfig& cfg, const std::string& name, const Table& t, const std::string& criterion,
               bool pass) {
  Output out(cfg);
  if (cfg.format == "csv") {
    t.write_csv(out.stream());
  } else {
    ordered_json j = header("scenario " + name, cfg);
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.values) {
      ordered_json o;
      for (size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = row[i];
      rows.push_back(o);
    }
    j["trend"] = rows;
    j["criterion"] = criterion;
    j["pass"] = pass;
    write_json(out.stream(), j);
  }
  std::cerr << name << ": " << criterion << ": " << (pass ? "pass" : "FAIL") << '\n';
  return pass ? exit_pass : exit_check_failure;
}

Table spectrum_table(const RunConfig& cfg) {
  const NuParameter nu = cfg.nu();
  const fock::FockBasis b = fock::build_basis(cfg.K_or(6), cfg.N_or(4));
  const fock::PolynomialInteraction P = fock::PolynomialInteraction::parse(cfg.poly);
  P.validate();
  const fock::Spectrum s = fock::hermitian_spectrum(fock::interacting_boost(b, nu, P, 0.0), false);
  Table t;
  t.header = {"index", "boost_eigenvalue"};
  for (long i = 0; i < s.values.size(); ++i) t.add({double(i), s.values(i)});
  return t;
}
}  // namespace

cplx parse_complex(const std::string& text) {
  const std::vector<double> v = parse_numbers(text);
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return cplx(v[0], v[1]);
  throw usage_error("expected 're' or 're,im': '" + text + "'");
}

std::vector<double> parse_numbers(const std::string& csv) {
  std::vector<double> out;
  size_t start = 0;
  while (true) {
    const size_t comma = csv.find(',', start);
    out.push_back(parse_double(csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int cmd_verify(const RunConfig& cfg) {
  const Report rep = verify_suite(cfg);
  Output out(cfg);
  write_report(out.stream(), cfg.format, "verify", cfg, rep);
  return rep.all_pass() ? exit_pass : exit_check_failure;
}

int cmd_table(const RunConfig& cfg, const std::string& what) {
  const NuParameter nu = cfg.nu();
  Table t;
  if (what == "omega") {
    const int K = cfg.K_or(16);
    const op::DispersionTable d = op::dispersion(nu, K + 1);
    const double r2 = nu.r * nu.r, mr2 = nu.mu * nu.mu * r2;
    t.header = {"k", "omega", "product_identity_residual"};
    for (int k = 0; k <= K; ++k)
      t.add({double(k), d(k), std::abs(r2 * d(k) * d(k + 1) - (k * (k + 1.0) + mr2))});
  } else if (what == "pk") {
    t.header = {"k", "legendre_coefficient", "quadrature", "rel_err"};
    for (int k = 0; k <= cfg.K_or(16); ++k) {
      const double p = op::legendre_fourier_coeff(nu, k), q = op::legendre_fourier_quadrature(nu, k, 4096);
      t.add({double(k), p, q, std::abs(p - q) / std::abs(p)});
    }
  } else if (what == "ck") {
    t.header = {"k", "re", "im", "abs"};
    for (int k = 0; k <= cfg.K_or(16); ++k) {
      const cplx c = rep::intertwiner_coeff(nu, k);
      t.add({double(k), c.real(), c.imag(), std::abs(c)});
    }
  } else if (what == "spectrum") {
    t = spectrum_table(cfg);
  } else {
    throw usage_error("unknown table '" + what + "' (omega, pk, ck, spectrum)");
  }
  Output out(cfg);
  t.write_csv(out.stream());
  return exit_pass;
}

int cmd_scenario(const RunConfig& cfg, const std::string& name, double t) {
  Trend tr;
  if (name == "kms") tr = kms_trend(cfg, t);
  else if (name == "eom-trend") tr = eom_trend(cfg);
  else if (name == "vacuum-trend") tr = vacuum_trend(cfg);
  else if (name == "finite-speed") tr = finite_speed_trend(cfg, t);
  else if (name == "magic") tr = magic_trend(cfg);
  else throw usage_error("unknown scenario '" + name + "' (kms, eom-trend, vacuum-trend, finite-speed, magic)");
  Table tab;
  tab.header = tr.header;
  for (const auto& row : tr.rows) tab.add(row);
  return emit_trend(cfg, name, tab, tr.criterion, tr.pass);
}

int cmd_twopoint(const RunConfig& cfg, const std::string& z1s, const std::string& z2s, const std::string& method) {
  using namespace harm;
  const NuParameter nu = cfg.nu();
  if (method != "contour" && method != "legendre") throw usage_error("method must be contour or legendre");
  auto point = [&](const std::string& text, int sign) {
    if (text.empty()) {
      return sign > 0 ? DeSitterPoint::tuboid(Eigen::Matrix3d::Identity(), 0.5, nu.r, +1)
                      : DeSitterPoint::tuboid(boost1(0.3), 0.7, nu.r, -1);
    }
    const std::vector<double> v = parse_numbers(text);
    DeSitterPoint p;
    if (v.size() == 3) {
      p.x = Eigen::Vector3cd(v[0], v[1], v[2]);
    } else if (v.size() == 6) {
      p.x = Eigen::Vector3cd(cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]));
    } else {
      throw usage_error("a point is 'x0,x1,x2' or 're0,im0,re1,im1,re2,im2'");
    }
    if (p.constraint_residual(nu.r) > 1e-10) throw usage_error("point is not on x.x = -r^2");
    const Eigen::Vector3d y = p.x.imag();
    if (!(sign * y(0) > std::hypot(y(1), y(2))))
      throw usage_error(sign > 0 ? "z1 must lie in the forward tuboid" : "z2 must lie in the backward tuboid");
    return p;
  };
  const DeSitterPoint z1 = point(z1s, +1), z2 = point(z2s, -1);
  const cplx c = two_point_contour(z1, z2, nu, 2048), l = two_point_legendre(z1, z2, nu);
  const cplx v = method == "contour" ? c : l;
  const double cross = std::abs(c - l) / std::abs(l);
  ordered_json j = header("twopoint", cfg);
  j["method"] = method;
  j["value_re"] = v.real();
  j["value_im"] = v.imag();
  j["cross_check_rel_err"] = cross;
  const bool pass = cross <= cfg.tolerance("harmonic.two_point_cross_form", 1e-6);
  j["pass"] = pass;
  Output out(cfg);
  write_json(out.stream(), j);
  return pass ? exit_pass : exit_check_failure;
}

int cmd_rep_check(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  check_intertwiners(cfg, rep);
  check_lie_algebra(cfg, rep);
  Output out(cfg);
  write_report(out.stream(), cfg.format, "rep check", cfg, rep);
  return rep.all_pass() ? exit_pass : exit_check_failure;
}

int cmd_rep_coeffs(const RunConfig& cfg, const std::string& what) {
  const NuParameter nu = cfg.nu();
  Table t;
  t.header = {"k", "re", "im", "abs"};
  if (what == "ck") {
    for (int k = 0; k <= cfg.K_or(16); ++k) {
      const cplx c = rep::intertwiner_coeff(nu, k);
      t.add({double(k), c.real(), c.imag(), std::abs(c)});
    }
  } else if (what == "rho") {
    if (nu.series != Series::complementary)
      throw usage_error("rho Fourier coefficients need an integrable kernel: use 0 < mu r < 1/2");
    const NuParameter nc = NuParameter::with_nu(nu.r, cplx(0.0, -std::abs(nu.nu.imag())));
    for (int k = 0; k <= cfg.K_or(16); ++k) {
      const cplx c = rep::intertwiner_kernel_fourier(nc, k);
      t.add({double(k), c.real(), c.imag(), std::abs(c)});
    }
  } else {
    throw usage_error("unknown coefficient set '" + what + "' (ck, rho)");
  }
  Output out(cfg);
  t.write_csv(out.stream());
  return exit_pass;
}

int cmd_kms(const RunConfig& cfg, double t) {
  const NuParameter nu = cfg.nu();
  const int K = cfg.K_or(64);
  const op::KmsReport k = kms_at(nu, K, t);
  ordered_json j = header("kms", cfg);
  j["t"] = t;
  j["K"] = K;
  j["defect"] = k.defect;
  j["rhs_abs"] = k.rhs_abs;
  j["generator_min"] = k.lambda_min;
  j["generator_max"] = k.lambda_max;
  j["overflow"] = k.overflow;
  Output out(cfg);
  write_json(out.stream(), j);
  return exit_pass;
}

int cmd_kg_evolve(const RunConfig& cfg, double t, const std::string& init, const std::string& snapshot) {
  const NuParameter nu = cfg.nu();
  const int M = cfg.M_or(512);
  const kg::EpsilonOperator e = kg::build_epsilon(kg::WedgeGrid::make(M, 3.0), nu);
  kg::CauchyData d;
  const double c = 0.3, w = 0.6;
  if (init == "bump") {
    d = kg::sample_data(e.grid, [c, w](double p) { return kg::bump(p, c, w); },
                        [](double p) { return 0.5 * kg::bump(p, 0.2, 0.5); });
  } else if (init == "mode") {
    d = kg::sample_data(e.grid, [](double p) { return std::cos(p); }, [](double) { return 0.0; });
  } else {
    throw usage_error("init must be bump or mode");
  }
  const kg::CauchyData dt = kg::cauchy_evolve(e, d, t);
  ordered_json j = header("kg evolve", cfg);
  j["t"] = t;
  j["init"] = init;
  j["boost_charge_0"] = kg::conserved_charge(e, d, kg::Charge::boost);
  j["boost_charge_t"] = kg::conserved_charge(e, dt, kg::Charge::boost);
  j["rotation_charge_0"] = kg::conserved_charge(e, d, kg::Charge::rotation);
  if (init == "bump") {
    const kg::LeakageReport l = kg::finite_speed_check(e, d, c - w, c + w, t);
    j["leakage"] = l.leakage;
    j["outside_Iplus"] = l.outside_Iplus;
  }
  if (!snapshot.empty()) {
    std::ofstream f(snapshot);
    if (!f) throw usage_error("cannot open snapshot file " + snapshot);
    Table s;
    s.header = {"psi", "phi_0", "pi_0", "phi_t", "pi_t"};
    for (int i = 0; i < M; ++i) s.add({e.grid.psi(i), d.phi(i), d.pi(i), dt.phi(i), dt.pi(i)});
    s.write_csv(f);
  }
  Output out(cfg);
  write_json(out.stream(), j);
  return exit_pass;
}

int cmd_fock(const RunConfig& cfg, const std::string& what) {
  using namespace fock;
  const NuParameter nu = cfg.nu();
  const PolynomialInteraction P = PolynomialInteraction::parse(cfg.poly);
  P.validate();
  const FockBasis b = build_basis(cfg.K_or(6), cfg.N_or(4));
  ordered_json j = header("fock " + what, cfg);
  j["dim"] = b.dim();
  Report rep;
  if (what == "spectrum") {
    const Spectrum s = hermitian_spectrum(interacting_boost(b, nu, P, 0.0), false);
    const long n = s.values.size();
    double sym = 0, scale = s.values.cwiseAbs().maxCoeff();
    for (long i = 0; i < n; ++i) sym = std::max(sym, std::abs(s.values(i) + s.values(n - 1 - i)));
    rep.add(cfg, "fock.spectral_symmetry", scale > 0 ? sym / scale : sym, 1e-12,
            "spectrum of the boost generator is symmetric under J L J = -L");
    j["min"] = s.values.minCoeff();
    j["max"] = s.values.maxCoeff();
    j["eigenvalues"] = std::vector<double>(s.values.data(), s.values.data() + n);
  } else if (what == "vacuum") {
    const VacuumReport v = interacting_vacuum(b, nu, P);
    j["log_norm"] = v.log_norm;
    j["k0_mean"] = v.k0_mean;
    j["k0_square"] = v.k0_square;
    j["vacuum_overlap"] = v.vacuum_overlap;
    j["krylov"] = v.krylov;
  } else if (what == "eom") {
    const EomReport e = eom_residual(b, nu, P, eom_test_function(nu.r));
    j["residual"] = e.residual;
    j["first_commutator"] = e.first_commutator;
    rep.add(cfg, "fock.first_commutator", e.first_commutator, 1e-10, "[L, phi(h)] = -i r pi(cos h)");
    if (P.is_zero()) rep.add(cfg, "fock.free_eom", e.residual, 1e-10, "free field equation holds exactly");
  } else if (what == "inequalities") {
    const InequalityReport q = inequality_check(b, nu, P);
    j["peierls_bogoliubov"] = q.pb;
    j["middle"] = q.mid;
    j["golden_thompson"] = q.gt;
    rep.add(cfg, "fock.peierls_bogoliubov", -q.pb_margin, 1e-12,
            "exp(-pi <Omega0, V0 Omega0>) <= |e^{-pi H} Omega0|");
    rep.add(cfg, "fock.golden_thompson", -q.gt_margin, 1e-12, "|e^{-pi H} Omega0| <= |e^{-pi V0} Omega0|");
  } else if (what == "split") {
    const SplitReport s = boost_split(b, nu, P);
    j["c0"] = s.c0;
    j["min_plus"] = s.min_plus;
    j["max_minus"] = s.max_minus;
    rep.add(cfg, "fock.boost_additivity", s.additivity, 1e-12, "L+ + L- = L");
    rep.add(cfg, "fock.split_lower_bound", std::max(0.0, -s.min_plus), 1e-12, "L+ + c0 >= 0");
    rep.add(cfg, "fock.split_upper_bound", std::max(0.0, s.max_minus), 1e-12, "L- - c0 <= 0");
  } else {
    throw usage_error("unknown fock report '" + what + "' (spectrum, vacuum, eom, inequalities, split)");
  }
  j["checks"] = rows_json(rep);
  j["all_pass"] = rep.all_pass();
  Output out(cfg);
  write_json(out.stream(), j);
  return rep.all_pass() ? exit_pass : exit_check_failure;
}

int cmd_fock_dump(const RunConfig& cfg, const std::string& what) {
  using namespace fock;
  const NuParameter nu = cfg.nu();
  const PolynomialInteraction P = PolynomialInteraction::parse(cfg.poly);
  P.validate();
  const FockBasis b = build_basis(cfg.K_or(6), cfg.N_or(4));
  FockOperator A;
  if (what == "boost") A = interacting_boost(b, nu, P, 0.0);
  else if (what == "free-boost") A = free_boost(b, nu, 0.0);
  else if (what == "rotation") A = rotation_generator(b);
  else if (what == "interaction") A = interaction(b, nu, P, cos_alpha(0.0, 1, nu.r));
  else throw usage_error("unknown operator '" + what + "' (boost, free-boost, rotation, interaction)");
  // row-major triplets, rows and columns sorted
  const Eigen::SparseMatrix<cplx, Eigen::RowMajor, long> R(A.matrix);
  Output out(cfg);
  std::ostream& os = out.stream();
  os << "row,col,re,im\n";
  for (long i = 0; i < R.outerSize(); ++i)
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor, long>::InnerIterator it(R, i); it; ++it)
      os << it.row() << ',' << it.col() << ',' << format_number(it.value().real()) << ','
         << format_number(it.value().imag()) << '\n';
  return exit_pass;
}

int cmd_specfun_eval(const RunConfig& cfg, const std::string& fn, const std::string& zs, const std::string& ss,
                     const std::vector<std::string>& abc) {
  const cplx z = parse_complex(zs);
  cplx value, alt;
  ordered_json input;
  input["function"] = fn;
  input["z"] = {z.real(), z.imag()};
  if (fn == "gamma") {
    value = specfun::gamma(z);
    alt = specfun::gamma(z + 1.0) / z;
  } else if (fn == "lgamma") {
    value = specfun::lgamma(z);
    alt = specfun::lgamma(z + 1.0) - std::log(z);
    alt = cplx(alt.real(), value.imag() + std::remainder(alt.imag() - value.imag(), 2 * pi));
  } else if (fn == "digamma") {
    value = specfun::digamma(z);
    alt = specfun::digamma(z + 1.0) - 1.0 / z;
  } else if (fn == "legendre" || fn == "legendre_prime") {
    const cplx s = ss.empty() ? cfg.nu().s_plus() : parse_complex(ss);
    input["s"] = {s.real(), s.imag()};
    const bool d = fn == "legendre_prime";
    value = d ? specfun::legendre_p_prime(s, z) : specfun::legendre_p(s, z);
    alt = d ? specfun::legendre_p_prime(-1.0 - s, z) : specfun::legendre_p(-1.0 - s, z);
  } else if (fn == "hyp2f1") {
    if (abc.size() != 3) throw usage_error("hyp2f1 needs --a --b --c");
    const cplx a = parse_complex(abc[0]), b = parse_complex(abc[1]), c = parse_complex(abc[2]);
    input["a"] = {a.real(), a.imag()};
    input["b"] = {b.real(), b.imag()};
    input["c"] = {c.real(), c.imag()};
    value = specfun::hyp2f1(a, b, c, z);
    alt = std::pow(1.0 - z, c - a - b) * specfun::hyp2f1(c - a, c - b, c, z);
  } else {
    throw usage_error("unknown function '" + fn + "' (gamma, lgamma, digamma, legendre, legendre_prime, hyp2f1)");
  }
  ordered_json j;
  j["schema"] = report_schema;
  j["input"] = input;
  j["output"] = {value.real(), value.imag()};
  j["abs_err_estimate"] = std::abs(value - alt);
  Output out(cfg);
  write_json(out.stream(), j);
  return exit_pass;
}

}  // namespace dscalar::cli
