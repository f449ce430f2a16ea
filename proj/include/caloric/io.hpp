#pragma once

// JSON and CSV exchange formats: series and scenario descriptions in,
// trajectories, theta samples and evaluation records out.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "caloric/entire_series.hpp"
#include "caloric/order_type.hpp"
#include "caloric/zero_dynamics.hpp"

namespace caloric::io {

using json = nlohmann::json;

/// 17 significant digits, scientific.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// A number, [re, im], or {"re": .., "im": ..}.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
  throw std::invalid_argument("expected a complex number, got " + j.dump());
}

/// "1.5", "-2", "0.3+0.2i", "0.5i", "0.3,0.2".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  try {
    if (auto comma = s.find(','); comma != std::string::npos)
      return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    if (s.back() != 'i') {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    auto imag_of = [](const std::string& p) {
      if (p.empty() || p == "+") return 1.0;
      if (p == "-") return -1.0;
      return std::stod(p);
    };
    if (split == std::string::npos) return {0.0, imag_of(s)};
    return {std::stod(s.substr(0, split)), imag_of(s.substr(split))};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse complex number '" + text + "'");
  }
}

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

/// Slurp a file, or return the text itself when it does not start with '@'.
inline std::string read_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw std::invalid_argument("cannot open " + arg.substr(1));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Series

/// A named rule with parameters. Known names: exp(lambda), sin(lambda),
/// cos(lambda), gauss(a), gamma_power(p), monomial(k).
inline CoefficientSeries rule_series(const std::string& name, const json& params, int n_max) {
  auto param = [&](const char* key, cplx fallback) {
    return params.contains(key) ? complex_from_json(params.at(key)) : fallback;
  };
  if (name == "exp") {
    reject_unknown_keys(params, {"lambda"}, "rule exp");
    return series::exp_rule(param("lambda", 1.0), n_max);
  }
  if (name == "sin") {
    reject_unknown_keys(params, {"lambda"}, "rule sin");
    return series::sin_rule(param("lambda", 1.0), n_max);
  }
  if (name == "cos") {
    reject_unknown_keys(params, {"lambda"}, "rule cos");
    return series::cos_rule(param("lambda", 1.0), n_max);
  }
  if (name == "gauss") {
    reject_unknown_keys(params, {"a"}, "rule gauss");
    return series::gauss_rule(param("a", 1.0), n_max);
  }
  if (name == "gamma_power") {
    reject_unknown_keys(params, {"p"}, "rule gamma_power");
    const double p = params.value("p", 1.0);
    if (!(p > 0)) throw std::invalid_argument("rule gamma_power: p must be positive");
    return series::gamma_power_rule(p, n_max);
  }
  if (name == "monomial") {
    reject_unknown_keys(params, {"k"}, "rule monomial");
    const int k = params.value("k", 1);
    if (k < 0) throw std::invalid_argument("rule monomial: k must be >= 0");
    return series::monomial_rule(k);
  }
  throw std::invalid_argument("unknown rule '" + name + "'");
}

/// {"kind": "closed_form", "rule": {"name": .., "params": {..}}, "n_max": N}
/// or {"kind": "list", "coeffs": [c0, c1, ...]}.
inline CoefficientSeries series_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "coeffs", "rule", "n_max"}, "series");
  const std::string kind = j.value("kind", j.contains("coeffs") ? "list" : "closed_form");
  if (kind == "list") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty())
      throw std::invalid_argument("series: list kind needs a nonempty coeffs array");
    std::vector<cplx> c;
    for (const auto& v : j.at("coeffs")) c.push_back(complex_from_json(v));
    return series::list_rule(std::move(c));
  }
  if (kind != "closed_form") throw std::invalid_argument("series: unknown kind '" + kind + "'");
  if (!j.contains("rule")) throw std::invalid_argument("series: closed_form kind needs a rule");
  const json& r = j.at("rule");
  reject_unknown_keys(r, {"name", "params"}, "series.rule");
  const int n_max = j.value("n_max", series::default_n_max);
  if (n_max < 1) throw std::invalid_argument("series: n_max must be >= 1");
  return rule_series(r.at("name").get<std::string>(), r.value("params", json::object()), n_max);
}

// ---------------------------------------------------------------------------
// Scenarios for the zero dynamics

struct Scenario {
  std::string name = "scenario";
  std::vector<cplx> initial;
  ODEPathConfig path;
  Variant variant = Variant::genus0();
  std::string mode = "ode";  // ode | track | verify
};

/// Random roots in an annulus, pairwise at least `gap` apart.
inline std::vector<cplx> random_annulus_roots(std::uint64_t seed, int n, double r_min, double r_max, double gap) {
  if (n < 1 || !(r_min > 0) || !(r_max >= r_min)) throw std::invalid_argument("random roots: bad parameters");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> rad(r_min, r_max), ang(0.0, 2 * pi);
  std::vector<cplx> a;
  for (int attempt = 0; static_cast<int>(a.size()) < n; ++attempt) {
    if (attempt > 100000) throw std::invalid_argument("random roots: cannot place points with the requested gap");
    const cplx c = std::polar(rad(gen), ang(gen));
    bool far = true;
    for (cplx b : a) far = far && std::abs(b - c) > gap;
    if (far) a.push_back(c);
  }
  return a;
}

inline Scenario scenario_from_json(const json& j, std::optional<std::uint64_t> seed = {}) {
  reject_unknown_keys(j, {"name", "initial", "random", "path", "variant", "tolerances", "mode"}, "scenario");
  Scenario s;
  s.name = j.value("name", s.name);
  s.mode = j.value("mode", s.mode);
  if (s.mode != "ode" && s.mode != "track" && s.mode != "verify")
    throw std::invalid_argument("scenario: mode must be ode, track or verify");
  if (j.contains("initial") == j.contains("random"))
    throw std::invalid_argument("scenario: give exactly one of initial or random");
  if (j.contains("initial")) {
    for (const auto& v : j.at("initial")) s.initial.push_back(complex_from_json(v));
  } else {
    const json& r = j.at("random");
    reject_unknown_keys(r, {"n", "r_min", "r_max", "gap"}, "scenario.random");
    if (!seed) throw std::invalid_argument("scenario: random initial points need --seed");
    s.initial = random_annulus_roots(*seed, r.at("n").get<int>(), r.value("r_min", 0.5), r.value("r_max", 2.0),
                                     r.value("gap", 0.2));
  }
  if (s.initial.empty()) throw std::invalid_argument("scenario: no initial points");
  if (!j.contains("path") || !j.at("path").is_array()) throw std::invalid_argument("scenario: path waypoints required");
  s.path.t_path.clear();
  for (const auto& v : j.at("path")) s.path.t_path.push_back(complex_from_json(v));
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown_keys(t,
                        {"rel_tol", "abs_tol", "min_separation", "max_step", "samples_per_segment", "escape_radius"},
                        "scenario.tolerances");
    s.path.rel_tol = t.value("rel_tol", s.path.rel_tol);
    s.path.abs_tol = t.value("abs_tol", s.path.abs_tol);
    s.path.min_separation = t.value("min_separation", s.path.min_separation);
    s.path.max_step = t.value("max_step", s.path.max_step);
    s.path.samples_per_segment = t.value("samples_per_segment", s.path.samples_per_segment);
    s.path.escape_radius = t.value("escape_radius", s.path.escape_radius);
  }
  if (j.contains("variant")) {
    const json& v = j.at("variant");
    std::string name;
    cplx lambda = 0.0;
    if (v.is_string()) {
      name = v.get<std::string>();
    } else {
      reject_unknown_keys(v, {"name", "lambda"}, "scenario.variant");
      name = v.at("name").get<std::string>();
      if (v.contains("lambda")) lambda = complex_from_json(v.at("lambda"));
    }
    if (name == "genus0") s.variant = Variant::genus0();
    else if (name == "genus1") s.variant = Variant::genus1(lambda);
    else if (name == "even") s.variant = Variant::even();
    else if (name == "odd") s.variant = Variant::odd();
    else if (name == "tilt") s.variant = Variant::tilt(lambda);
    else throw std::invalid_argument("scenario: unknown variant '" + name + "'");
  }
  if (s.mode != "ode" && s.variant.kind != VariantKind::genus0)
    throw std::invalid_argument("scenario: track and verify modes use the genus0 polynomial flow");
  s.path.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Output

inline std::string trajectories_csv(const std::vector<ZeroTrajectory>& tr) {
  std::ostringstream os;
  os << "k,re_t,im_t,re_z,im_z,status\n";
  for (const auto& x : tr)
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      const auto& s = x.samples[i];
      // status belongs to the last sample; earlier rows are plain path points
      const char* st = i + 1 == x.samples.size() ? to_string(x.status) : "ok";
      os << x.index << ',' << fmt(s.t.real()) << ',' << fmt(s.t.imag()) << ',' << fmt(s.z.real()) << ','
         << fmt(s.z.imag()) << ',' << st << '\n';
    }
  return os.str();
}

inline json trajectories_json(const std::vector<ZeroTrajectory>& tr) {
  json out = json::array();
  for (const auto& x : tr) {
    json j;
    j["k"] = x.index;
    j["status"] = to_string(x.status);
    if (x.t_star) j["t_star"] = to_json(*x.t_star);
    if (x.partner) j["partner"] = *x.partner;
    json samples = json::array();
    for (const auto& s : x.samples) samples.push_back({{"t", to_json(s.t)}, {"z", to_json(s.z)}, {"residual", s.residual}});
    j["samples"] = std::move(samples);
    out.push_back(std::move(j));
  }
  return out;
}

inline std::string theta_csv(const std::vector<ThetaSample>& samples) {
  std::ostringstream os;
  os << "re_z,im_z,theta0,theta1,K\n";
  for (const auto& s : samples)
    os << fmt(s.z.real()) << ',' << fmt(s.z.imag()) << ',' << fmt(s.theta0) << ',' << fmt(s.theta1) << ',' << s.K
       << '\n';
  return os.str();
}

inline json estimate_json(const OrderTypeEstimate& e) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); };
  return {{"rho_hat", num(e.rho_hat)},
          {"tau_hat", num(e.tau_hat)},
          {"exact_order_class", to_string(e.exact_order_class)},
          {"window", {e.window.n_min, e.window.n_max}},
          {"rho_upper_half", num(e.rho_upper_half)},
          {"stabilized", e.stabilized},
          {"literal_limsup", num(e.literal_limsup)},
          {"diagnostic", e.diagnostic}};
}

/// {t, z, F, dFdz, residual}
inline json heat_record(cplx t, cplx z, cplx F, cplx dFdz, double residual) {
  return {{"t", to_json(t)}, {"z", to_json(z)}, {"F", to_json(F)}, {"dFdz", to_json(dFdz)}, {"residual", residual}};
}

}  // namespace caloric::io
