// caloric: command-line front end.
//
// Exit codes: 0 ok, 1 numerical failure, 2 bad input.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "caloric/caloric.hpp"

using namespace caloric;
using io::json;

namespace {

int log_level() {
  const char* env = std::getenv("CALORIC_LOG");
  if (!env) return 0;
  const std::string v = env;
  if (v == "debug" || v == "2") return 2;
  if (v == "info" || v == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  static const int threshold = log_level();
  if (level <= threshold) std::cerr << "[caloric] " << msg << '\n';
}

struct Global {
  std::string out;
  std::string format = "json";
  double tol = 1e-10;
  std::optional<std::uint64_t> seed;
  bool verify = false;
};

struct Output {
  json doc;
  std::string csv;
};

void emit(const Global& g, const Output& o) {
  const std::string text = g.format == "csv" ? o.csv : o.doc.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::invalid_argument("cannot write " + g.out);
  f << text;
  log(1, "wrote " + g.out);
}

// ---------------------------------------------------------------------------
// Series given on the command line

struct SeriesArgs {
  std::string series;  // JSON text or @file
  std::string rule;
  std::string param;
  int n_max = series::default_n_max;
  std::vector<std::string> coeffs;

  void add(CLI::App* cmd) {
    cmd->add_option("--series", series, "series description as JSON, or @file");
    cmd->add_option("--rule", rule, "named rule: exp, sin, cos, gauss, gamma_power, monomial");
    cmd->add_option("--param", param, "main rule parameter (lambda, a, p or k)");
    cmd->add_option("--n-max", n_max, "coefficient depth for rules")->capture_default_str();
    cmd->add_option("--coeffs", coeffs, "polynomial coefficients c0 c1 ... (complex as a+bi)");
  }

  int sources() const { return !series.empty() + !rule.empty() + !coeffs.empty(); }

  CoefficientSeries build() const {
    if (sources() != 1) throw std::invalid_argument("give exactly one of --series, --rule, --coeffs");
    if (!series.empty()) return io::series_from_json(io::parse_json(io::read_arg(series)));
    if (!coeffs.empty()) {
      std::vector<cplx> c;
      for (const auto& s : coeffs) c.push_back(io::parse_complex(s));
      return series::list_rule(std::move(c));
    }
    json params = json::object();
    if (!param.empty()) {
      const cplx p = io::parse_complex(param);
      if (rule == "exp" || rule == "sin" || rule == "cos") params["lambda"] = io::to_json(p);
      else if (rule == "gauss") params["a"] = io::to_json(p);
      else if (rule == "gamma_power") params["p"] = p.real();
      else if (rule == "monomial") params["k"] = static_cast<int>(p.real());
    }
    return io::rule_series(rule, params, n_max);
  }

  json describe() const {
    if (!series.empty()) return io::parse_json(io::read_arg(series));
    if (!coeffs.empty()) return {{"coeffs", coeffs}};
    return {{"rule", rule}, {"param", param}, {"n_max", n_max}};
  }
};

// ---------------------------------------------------------------------------
// poly

struct PolyArgs {
  int m = -1;
  std::vector<std::string> eval;
  bool spectrum = false, interlace = false;
};

Output run_poly(const PolyArgs& a) {
  if (a.m < 0) throw std::invalid_argument("--m must be >= 0");
  const CaloricPolynomial p = build(a.m);
  Output o;
  o.doc["m"] = a.m;
  std::ostringstream csv;
  if (a.spectrum) {
    const RhoSpectrum s = rho_spectrum(a.m);
    o.doc["parity"] = s.odd ? "odd" : "even";
    o.doc["spectrum"] = s.values;
    csv << "k,rho\n";
    for (std::size_t k = 0; k < s.values.size(); ++k) csv << k + 1 << ',' << io::fmt(s.values[k]) << '\n';
  }
  if (a.interlace) {
    const bool ok = interlacing_check(a.m);
    o.doc["interlacing"] = ok;
    if (csv.tellp() == 0) csv << "m,interlacing\n";
    csv << a.m << ',' << (ok ? "true" : "false") << '\n';
  }
  if (!a.eval.empty()) {
    if (a.eval.size() != 2) throw std::invalid_argument("--eval takes t and z");
    const cplx t = io::parse_complex(a.eval[0]), z = io::parse_complex(a.eval[1]);
    const HeatSolution h = caloric_polynomial_solution(a.m);
    const cplx F = h.F(t, z), dF = h.dz(t, z);
    o.doc["eval"] = io::heat_record(t, z, F, dF, heat_residual(h, t, z));
    o.doc["crude_bound"] = crude_bound(a.m, t, z);
    if (csv.tellp() == 0) csv << "re_t,im_t,re_z,im_z,re_F,im_F,re_dFdz,im_dFdz,residual\n";
    csv << io::fmt(t.real()) << ',' << io::fmt(t.imag()) << ',' << io::fmt(z.real()) << ',' << io::fmt(z.imag())
        << ',' << io::fmt(F.real()) << ',' << io::fmt(F.imag()) << ',' << io::fmt(dF.real()) << ','
        << io::fmt(dF.imag()) << ',' << io::fmt(heat_residual(h, t, z)) << '\n';
  }
  if (!a.spectrum && !a.interlace && a.eval.empty()) {
    json coeffs = json::array();
    csv << "j,t_power,z_power,coefficient\n";
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
      coeffs.push_back(p.coeffs[j].str());
      csv << j << ',' << j << ',' << a.m - 2 * static_cast<int>(j) << ',' << p.coeffs[j].str() << '\n';
    }
    o.doc["coeffs"] = coeffs;
  }
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------------------
// propagate

struct PropagateArgs {
  SeriesArgs series;
  std::string t = "0", z = "0";
  std::string method = "series";
  int J = 40;
  int nodes = 40;
};

HeatSolution propagate_handle(const PropagateArgs& a, const CoefficientSeries& f, const std::string& method,
                              double tol) {
  if (method == "series") return series_solution(f, a.J, tol);
  if (method == "kernel") return kernel_solution(f, a.nodes, tol);
  if (method == "closed") {
    const cplx p = a.series.param.empty() ? cplx(1.0) : io::parse_complex(a.series.param);
    if (a.series.rule == "gauss") return gaussian(p);
    if (a.series.rule == "exp") return exp_solution(p);
    throw std::invalid_argument("closed method needs --rule gauss or --rule exp");
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

json propagate_record(const PropagateArgs& a, const CoefficientSeries& f, const std::string& method, cplx t, cplx z,
                      double tol) {
  const HeatSolution h = propagate_handle(a, f, method, tol);
  const cplx F = h.F(t, z), dF = h.dz(t, z);
  json rec = io::heat_record(t, z, F, dF, heat_residual_fd(h.F, t, z));
  rec["method"] = method;
  return rec;
}

Output run_propagate(const PropagateArgs& a, const Global& g) {
  const cplx t = io::parse_complex(a.t), z = io::parse_complex(a.z);
  const CoefficientSeries f = materialize(a.series.build());
  Output o;
  o.doc["input"] = a.series.describe();
  if (a.method != "closed") {
    const auto adm = admissibility_check(f, std::max(50, std::min(f.n_max, 200)));
    o.doc["admissibility"] = to_string(adm.verdict);
    log(1, std::string("admissibility: ") + to_string(adm.verdict));
    if (adm.verdict == Verdict::rejected)
      throw numerical_error("initial data rejected by the admissibility check (exact order above 2^-)");
  }
  std::vector<std::string> methods;
  if (a.method == "both") methods = {"series", "kernel"};
  else methods = {a.method};
  json records = json::array();
  std::ostringstream csv;
  csv << "method,re_t,im_t,re_z,im_z,re_F,im_F,re_dFdz,im_dFdz,residual\n";
  for (const auto& m : methods) {
    json rec = propagate_record(a, f, m, t, z, g.tol);
    const cplx F = io::complex_from_json(rec["F"]), dF = io::complex_from_json(rec["dFdz"]);
    csv << m << ',' << io::fmt(t.real()) << ',' << io::fmt(t.imag()) << ',' << io::fmt(z.real()) << ','
        << io::fmt(z.imag()) << ',' << io::fmt(F.real()) << ',' << io::fmt(F.imag()) << ',' << io::fmt(dF.real())
        << ',' << io::fmt(dF.imag()) << ',' << io::fmt(rec["residual"].get<double>()) << '\n';
    records.push_back(std::move(rec));
  }
  if (records.size() == 2)
    o.doc["agreement"] =
        std::abs(io::complex_from_json(records[0]["F"]) - io::complex_from_json(records[1]["F"]));
  o.doc["records"] = records;
  o.csv = csv.str();
  return o;
}

// Re-read the written records and check them against a fresh evaluation.
int verify_propagate(const PropagateArgs& a, const Global& g, const Output& written) {
  json doc = written.doc;
  if (!g.out.empty() && g.format == "json") {
    std::ifstream in(g.out);
    doc = io::parse_json({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
  }
  const CoefficientSeries f = materialize(a.series.build());
  bool ok = true;
  for (const auto& rec : doc.at("records")) {
    const cplx t = io::complex_from_json(rec.at("t")), z = io::complex_from_json(rec.at("z"));
    const cplx F_old = io::complex_from_json(rec.at("F"));
    const double res_old = rec.at("residual").get<double>();
    const json fresh = propagate_record(a, f, rec.at("method").get<std::string>(), t, z, g.tol);
    const double dF = std::abs(io::complex_from_json(fresh["F"]) - F_old);
    const double res_new = fresh["residual"].get<double>();
    const bool good = dF <= g.tol * (1 + std::abs(F_old)) && res_new <= 1e-7 * (1 + std::abs(F_old)) &&
                      std::abs(res_new - res_old) <= 1e-7 * (1 + std::abs(F_old));
    std::cerr << "verify " << rec.at("method").get<std::string>() << ": |dF| = " << dF << ", residual = " << res_new
              << (good ? " ok" : " FAILED") << '\n';
    ok = ok && good;
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// order, theta-grid

struct OrderArgs {
  SeriesArgs series;
  std::vector<int> window;
};

Output run_order(const OrderArgs& a) {
  const CoefficientSeries s = materialize(a.series.build());
  Window w = default_window(s.n_max);
  if (!a.window.empty()) {
    if (a.window.size() != 2) throw std::invalid_argument("--window takes n_min n_max");
    w = {a.window[0], a.window[1]};
  }
  const auto e = estimate_order(s, w);
  Output o;
  o.doc = io::estimate_json(e);
  o.doc["input"] = a.series.describe();
  if (e.rho_hat <= 2.0) {
    const double rt = caloric_t_order(e.rho_hat);
    o.doc["caloric_t_order"] = std::isfinite(rt) ? json(rt) : json("inf");
  }
  std::ostringstream csv;
  csv << "rho_hat,tau_hat,class,n_min,n_max,stabilized\n"
      << io::fmt(e.rho_hat) << ',' << io::fmt(e.tau_hat) << ',' << to_string(e.exact_order_class) << ','
      << e.window.n_min << ',' << e.window.n_max << ',' << (e.stabilized ? "true" : "false") << '\n';
  o.csv = csv.str();
  return o;
}

struct ThetaArgs {
  SeriesArgs series;
  double lo = -4, hi = 4;
  int n = 101;
  int K = 100;
  double theta_tol = 0.05;
};

Output run_theta(const ThetaArgs& a) {
  if (a.n < 1 || !(a.hi > a.lo)) throw std::invalid_argument("theta-grid: bad grid");
  const CoefficientSeries s = materialize(a.series.build());
  const auto r = theorem1_sample(s, square_grid(a.lo, a.hi, a.n), a.K, a.theta_tol);
  Output o;
  auto pts = [](const std::vector<ThetaSample>& v) {
    json j = json::array();
    for (const auto& x : v) j.push_back({{"z", io::to_json(x.z)}, {"theta0", x.theta0}, {"theta1", x.theta1}});
    return j;
  };
  o.doc = {{"rho_hat", r.rho_hat},
           {"theta", r.theta},
           {"fraction_theta0", r.fraction_theta0},
           {"fraction_theta1", r.fraction_theta1},
           {"fraction_max", r.fraction_max},
           {"outliers0", pts(r.outliers0)},
           {"outliers1", pts(r.outliers1)},
           {"grid", {{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}, {"K", a.K}}}};
  o.csv = io::theta_csv(r.samples);
  return o;
}

// ---------------------------------------------------------------------------
// zeros

struct ZerosArgs {
  std::string scenario;
};

Output run_zeros(const ZerosArgs& a, const Global& g) {
  std::string text = a.scenario;
  if (!text.empty() && text[0] != '{' && text[0] != '@') text = "@" + text;
  const io::Scenario sc = io::scenario_from_json(io::parse_json(io::read_arg(text)), g.seed);
  log(1, "scenario " + sc.name + ": " + std::to_string(sc.initial.size()) + " points, mode " + sc.mode);
  Output o;
  o.doc["scenario"] = sc.name;
  o.doc["mode"] = sc.mode;
  o.doc["variant"] = to_string(sc.variant.kind);
  json init = json::array();
  for (cplx x : sc.initial) init.push_back(io::to_json(x));
  o.doc["initial"] = init;
  if (sc.mode == "verify") {
    const auto rep = closed_form_verify(sc.initial, sc.path);
    o.doc["max_deviation"] = rep.max_deviation;
    o.doc["endpoint_deviation"] = rep.endpoint_deviation;
    std::ostringstream csv;
    csv << "k,re_t,im_t,re_z_ode,im_z_ode,re_z_tracked,im_z_tracked,deviation\n";
    json rows = json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"k", r.k}, {"t", io::to_json(r.t)}, {"z_ode", io::to_json(r.z_ode)},
                      {"z_tracked", io::to_json(r.z_tracked)}, {"deviation", r.deviation}});
      csv << r.k << ',' << io::fmt(r.t.real()) << ',' << io::fmt(r.t.imag()) << ',' << io::fmt(r.z_ode.real()) << ','
          << io::fmt(r.z_ode.imag()) << ',' << io::fmt(r.z_tracked.real()) << ',' << io::fmt(r.z_tracked.imag())
          << ',' << io::fmt(r.deviation) << '\n';
    }
    o.doc["rows"] = rows;
    o.csv = csv.str();
    return o;
  }
  const auto tr = sc.mode == "track" ? track_roots(propagate_from_roots(sc.initial), sc.initial, sc.path)
                                     : ode_evolve(sc.initial, sc.path, sc.variant);
  const auto t_star = first_collision(tr);
  o.doc["collision"] = t_star ? json{{"t_star", io::to_json(*t_star)}} : json(nullptr);
  if (t_star) log(1, "collision at t = " + std::to_string(t_star->real()));
  o.doc["trajectories"] = io::trajectories_json(tr);
  o.csv = io::trajectories_csv(tr);
  return o;
}

// ---------------------------------------------------------------------------
// collide-scan

struct ScanArgs {
  int poly_m = -1;
  std::vector<std::string> roots;
  std::string rule;
  std::string param;
  double t_half = 1.0, z_half = 2.0;
  int grid = 4;
  bool never_zero = false;
};

Output run_scan(const ScanArgs& a) {
  const int sources = (a.poly_m >= 0) + !a.roots.empty() + !a.rule.empty();
  if (sources != 1) throw std::invalid_argument("give exactly one of --poly-m, --roots, --rule");
  if (a.grid < 1) throw std::invalid_argument("--grid must be >= 1");
  HeatSolution F;
  std::string label;
  if (a.poly_m >= 0) {
    F = caloric_polynomial_solution(a.poly_m);
  } else if (!a.roots.empty()) {
    std::vector<cplx> r;
    for (const auto& s : a.roots) r.push_back(io::parse_complex(s));
    F = propagate_from_roots(r);
  } else {
    const cplx p = a.param.empty() ? cplx(1.0) : io::parse_complex(a.param);
    if (a.rule == "exp") F = exp_solution(p);
    else if (a.rule == "gauss") F = gaussian(p);
    else if (a.rule == "cos_sq") F = cos_sq(p);
    else throw std::invalid_argument("--rule must be exp, gauss or cos_sq");
  }
  const Rect tr = square(a.t_half), zr = square(a.z_half);
  Output o;
  o.doc["target"] = F.label;
  o.doc["region"] = {{"t_half", a.t_half}, {"z_half", a.z_half}, {"grid", a.grid}};
  if (a.never_zero) {
    const bool nz = never_zero_check(F, tr, zr, a.grid);
    o.doc["never_zero"] = nz;
    o.csv = std::string("never_zero\n") + (nz ? "true" : "false") + "\n";
    return o;
  }
  const auto pts = collision_scan(F, tr, zr, a.grid);
  json arr = json::array();
  std::ostringstream csv;
  csv << "re_t,im_t,re_z,im_z,residual_F,residual_dz\n";
  for (const auto& p : pts) {
    arr.push_back({{"t", io::to_json(p.t)}, {"z", io::to_json(p.z)}, {"residual_F", p.residual_F},
                   {"residual_dz", p.residual_dz}});
    csv << io::fmt(p.t.real()) << ',' << io::fmt(p.t.imag()) << ',' << io::fmt(p.z.real()) << ','
        << io::fmt(p.z.imag()) << ',' << io::fmt(p.residual_F) << ',' << io::fmt(p.residual_dz) << '\n';
  }
  o.doc["points"] = arr;
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------------------
// debruijn

struct DebruijnArgs {
  double t = 0.0;
  std::vector<double> scan;
  int rt5 = 0;
  double dt = 1e-3;
  bool no_mirrors = false;
  std::vector<std::string> eval;
};

Output run_debruijn(const DebruijnArgs& a) {
  Output o;
  o.doc["t"] = a.t;
  std::ostringstream csv;
  if (!a.scan.empty()) {
    if (a.scan.size() != 2) throw std::invalid_argument("--scan takes lo hi");
    const auto zeros = h_zeros(a.t, a.scan[0], a.scan[1]);
    o.doc["zeros"] = zeros;
    csv << "t,k,zero\n";
    for (std::size_t k = 0; k < zeros.size(); ++k) csv << io::fmt(a.t) << ',' << k + 1 << ',' << io::fmt(zeros[k]) << '\n';
  }
  if (a.rt5 > 0) {
    const auto r = rt5_check(a.t, a.rt5, a.dt, {}, !a.no_mirrors);
    json rows = json::array();
    if (csv.tellp() == 0) csv << "k,z,velocity_fd,velocity_sum,mismatch\n";
    for (const auto& row : r.rows) {
      rows.push_back({{"k", row.k}, {"z", row.z}, {"velocity_fd", row.velocity_fd},
                      {"velocity_sum", row.velocity_sum}, {"mismatch", row.mismatch}});
      csv << row.k << ',' << io::fmt(row.z) << ',' << io::fmt(row.velocity_fd) << ',' << io::fmt(row.velocity_sum)
          << ',' << io::fmt(row.mismatch) << '\n';
    }
    o.doc["rt5"] = {{"note", r.note},       {"window", r.window}, {"dt", r.dt}, {"mirrors", r.mirrors},
                    {"relative_mismatch", r.relative_mismatch}, {"rows", rows}};
  }
  for (const auto& s : a.eval) {
    const cplx z = io::parse_complex(s);
    const auto v = h_eval(a.t, z);
    o.doc["values"].push_back({{"z", io::to_json(z)}, {"H", io::to_json(v.value)}, {"tail_bound", v.tail_bound}});
    if (csv.tellp() == 0) csv << "re_z,im_z,re_H,im_H,tail_bound\n";
    csv << io::fmt(z.real()) << ',' << io::fmt(z.imag()) << ',' << io::fmt(v.value.real()) << ','
        << io::fmt(v.value.imag()) << ',' << io::fmt(v.tail_bound) << '\n';
  }
  if (a.scan.empty() && a.rt5 == 0 && a.eval.empty()) throw std::invalid_argument("debruijn: give --scan, --rt5 or --eval");
  o.csv = csv.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entire solutions of the heat equation: caloric polynomials, propagators, growth, zero dynamics"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  std::uint64_t seed = 0;
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--tol", g.tol, "tolerance for series/quadrature convergence and --verify")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized scenarios");
  app.add_flag("--verify", g.verify, "re-read the written output and re-check its residual fields");

  PolyArgs poly;
  auto* c_poly = app.add_subcommand("poly", "caloric polynomial P_m: coefficients, evaluation, spectrum, interlacing");
  c_poly->add_option("--m", poly.m, "degree")->required();
  c_poly->add_option("--eval", poly.eval, "evaluate at t z")->expected(2);
  c_poly->add_flag("--spectrum", poly.spectrum, "rho values of P_m = z^(m mod 2) prod (z^2 + rho t)");
  c_poly->add_flag("--interlace", poly.interlace, "check interlacing with the spectrum of P_(m-1)");

  PropagateArgs prop;
  auto* c_prop = app.add_subcommand("propagate", "propagate initial data f(z) to F(t, z)");
  prop.series.add(c_prop);
  c_prop->add_option("--t", prop.t, "time (complex)")->capture_default_str();
  c_prop->add_option("--z", prop.z, "point (complex)")->capture_default_str();
  c_prop->add_option("--method", prop.method, "series, kernel, both or closed")
      ->check(CLI::IsMember({"series", "kernel", "both", "closed"}))
      ->capture_default_str();
  c_prop->add_option("--J", prop.J, "initial number of t-terms")->capture_default_str();
  c_prop->add_option("--nodes", prop.nodes, "initial Gauss-Hermite nodes")->capture_default_str();

  OrderArgs ord;
  auto* c_ord = app.add_subcommand("order", "estimate order, type and exact-order class from Taylor coefficients");
  ord.series.add(c_ord);
  c_ord->add_option("--window", ord.window, "coefficient window n_min n_max")->expected(2);

  ThetaArgs th;
  auto* c_th = app.add_subcommand("theta-grid", "subsequence growth quantities theta_0, theta_1 on a square grid");
  th.series.add(c_th);
  c_th->add_option("--lo", th.lo)->capture_default_str();
  c_th->add_option("--hi", th.hi)->capture_default_str();
  c_th->add_option("--n", th.n, "grid points per side")->capture_default_str();
  c_th->add_option("--K", th.K, "subsequence depth")->capture_default_str();
  c_th->add_option("--theta-tol", th.theta_tol)->capture_default_str();

  ZerosArgs zer;
  auto* c_zer = app.add_subcommand("zeros", "zero dynamics for a scenario file");
  c_zer->add_option("--scenario", zer.scenario, "scenario JSON file (or inline JSON)")->required();

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("collide-scan", "points where F = d_z F = 0, or check that F has no zeros");
  c_scan->add_option("--poly-m", scan.poly_m, "F = P_m");
  c_scan->add_option("--roots", scan.roots, "F built from f = prod (1 - z/a_k)");
  c_scan->add_option("--rule", scan.rule, "closed form: exp, gauss, cos_sq");
  c_scan->add_option("--param", scan.param, "closed-form parameter");
  c_scan->add_option("--t-half", scan.t_half, "t region |Re|, |Im| <= t_half")->capture_default_str();
  c_scan->add_option("--z-half", scan.z_half, "z region |Re|, |Im| <= z_half")->capture_default_str();
  c_scan->add_option("--grid", scan.grid, "seeds per axis")->capture_default_str();
  c_scan->add_flag("--never-zero", scan.never_zero, "only check that F has no zero in the region");

  DebruijnArgs db;
  auto* c_db = app.add_subcommand("debruijn", "H(t, z): values, real zeros, zero velocities");
  c_db->add_option("--t", db.t)->capture_default_str();
  c_db->add_option("--scan", db.scan, "real interval lo hi")->expected(2);
  c_db->add_option("--rt5", db.rt5, "number of zeros in the velocity window");
  c_db->add_option("--dt", db.dt, "time step for finite-difference velocities")->capture_default_str();
  c_db->add_flag("--no-mirrors", db.no_mirrors, "leave the mirrored zeros -z_j out of the velocity sum");
  c_db->add_option("--eval", db.eval, "evaluate at z (complex)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed;

  try {
    Output o;
    if (*c_poly) o = run_poly(poly);
    else if (*c_prop) o = run_propagate(prop, g);
    else if (*c_ord) o = run_order(ord);
    else if (*c_th) o = run_theta(th);
    else if (*c_zer) o = run_zeros(zer, g);
    else if (*c_scan) o = run_scan(scan);
    else if (*c_db) o = run_debruijn(db);
    emit(g, o);
    if (g.verify) {
      if (!*c_prop) throw std::invalid_argument("--verify applies to propagate output");
      return verify_propagate(prop, g, o);
    }
    return 0;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return 2;
  }
}
