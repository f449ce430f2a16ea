#pragma once

// de Bruijn's H(t, z) = int_0^inf e^{t x^2} Phi(x) cos(z x) dx with the
// super-exponentially decaying kernel Phi. H(0, .) is xi(1/2 + iz/2)/8.
//
// Zeros of H(t, .) high on the real axis sit where |H| is ~1e-27, far below
// double rounding of the integrand, so the quadrature runs in float128.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include "caloric/heat_propagate.hpp"
#include "caloric/special.hpp"
#include "caloric/types.hpp"

namespace caloric {

using qreal = boost::multiprecision::float128;

struct PhiConfig {
  int n_terms = 40;
  double term_floor = 1e-30;  // relative to the running sum

  void validate() const {
    if (n_terms < 1) throw std::invalid_argument("PhiConfig: n_terms must be >= 1");
    if (!(term_floor > 0)) throw std::invalid_argument("PhiConfig: term_floor must be positive");
  }
};

struct HQuadConfig {
  double x_max = 6.0;
  int panels = 120;
  int nodes_per_panel = 30;
  double tail_tol = 1e-40;  // absolute bound on the neglected integral
  PhiConfig phi;

  void validate() const {
    if (!(x_max > 0)) throw std::invalid_argument("HQuadConfig: x_max must be positive");
    if (panels < 1 || nodes_per_panel < 1) throw std::invalid_argument("HQuadConfig: panels and nodes must be >= 1");
    phi.validate();
  }
};

inline qreal phi_q(qreal x, const PhiConfig& cfg = {}) {
  using boost::multiprecision::exp;
  const qreal p = boost::math::constants::pi<qreal>();
  const qreal e4 = exp(4 * x), e5 = exp(5 * x), e9 = exp(9 * x);
  qreal sum = 0;
  for (int n = 1; n <= cfg.n_terms; ++n) {
    const qreal n2 = qreal(n) * n;
    const qreal term = (2 * p * p * n2 * n2 * e9 - 3 * p * n2 * e5) * exp(-p * n2 * e4);
    sum += term;
    if (abs(term) < qreal(cfg.term_floor) * abs(sum)) break;
  }
  return sum;
}

inline double phi(double x, const PhiConfig& cfg = {}) {
  cfg.validate();
  return static_cast<double>(phi_q(qreal(x), cfg));
}

namespace detail {

// Nodes x_i and weights w_i * Phi(x_i) of the panel rule, cut where Phi has
// dropped below 1e-80 (it decreases monotonically there).
struct HRule {
  std::vector<qreal> x, wphi;
  double x_cut = 0.0;
  qreal phi_cut = 0;
};

inline const HRule& h_rule(const HQuadConfig& cfg) {
  using Key = std::tuple<double, int, int, int, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const HRule>> cache;
  const Key key{cfg.x_max, cfg.panels, cfg.nodes_per_panel, cfg.phi.n_terms, cfg.phi.term_floor};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto rule = std::make_shared<HRule>();
  const auto gl = special::gauss_legendre<qreal>(cfg.nodes_per_panel);
  const qreal width = qreal(cfg.x_max) / cfg.panels;
  rule->x_cut = cfg.x_max;
  for (int p = 0; p < cfg.panels; ++p) {
    const qreal a = width * p;
    const qreal pa = phi_q(a, cfg.phi);
    if (p > 0 && a > 0.5 && pa < qreal(1e-80)) {
      rule->x_cut = static_cast<double>(a);
      rule->phi_cut = pa;
      break;
    }
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const qreal x = a + width * (gl.nodes[i] + 1) / 2;
      rule->x.push_back(x);
      rule->wphi.push_back(width / 2 * gl.weights[i] * phi_q(x, cfg.phi));
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return *cache.emplace(key, std::move(rule)).first->second;
}

struct QComplex {
  qreal re = 0, im = 0;
};

// int x^power e^{t x^2} Phi(x) trig(z x) dx, trig = cos (sine = false) or sin.
inline QComplex h_moment(const HRule& r, cplx t, cplx z, int power, bool sine) {
  using boost::multiprecision::cos;
  using boost::multiprecision::cosh;
  using boost::multiprecision::exp;
  using boost::multiprecision::sin;
  using boost::multiprecision::sinh;
  const qreal tr = t.real(), ti = t.imag(), zr = z.real(), zi = z.imag();
  const bool real_args = ti == 0 && zi == 0;
  QComplex s;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const qreal x = r.x[i];
    const qreal x2 = x * x;
    qreal w = r.wphi[i] * exp(tr * x2);
    for (int p = 0; p < power; ++p) w *= x;
    if (real_args) {
      s.re += w * (sine ? sin(zr * x) : cos(zr * x));
      continue;
    }
    // e^{i ti x^2} and the complex trig factor
    const qreal er = cos(ti * x2), ei = sin(ti * x2);
    const qreal c = cos(zr * x), sn = sin(zr * x), ch = cosh(zi * x), sh = sinh(zi * x);
    // cos(a+ib) = cos a cosh b - i sin a sinh b; sin(a+ib) = sin a cosh b + i cos a sinh b
    const qreal gr = sine ? sn * ch : c * ch;
    const qreal gi = sine ? c * sh : -sn * sh;
    s.re += w * (er * gr - ei * gi);
    s.im += w * (er * gi + ei * gr);
  }
  return s;
}

inline cplx to_cplx(const QComplex& q) { return {static_cast<double>(q.re), static_cast<double>(q.im)}; }

}  // namespace detail

struct HValue {
  cplx value;
  double tail_bound = 0.0;
  bool validated = true;  // false for complex t
};

/// Bound on the integral beyond the rule's cutoff.
inline double h_tail_bound(const HQuadConfig& cfg, cplx t, cplx z) {
  const auto& r = detail::h_rule(cfg);
  const double growth = std::exp(std::abs(t) * cfg.x_max * cfg.x_max) * std::cosh(std::abs(z.imag()) * cfg.x_max);
  return static_cast<double>(r.phi_cut) * growth * (cfg.x_max - r.x_cut);
}

inline HValue h_eval(cplx t, cplx z, const HQuadConfig& cfg = {}) {
  cfg.validate();
  HValue v;
  v.tail_bound = h_tail_bound(cfg, t, z);
  if (v.tail_bound > cfg.tail_tol)
    throw truncation_error("h_eval: tail bound " + std::to_string(v.tail_bound) + " above tolerance");
  v.value = detail::to_cplx(detail::h_moment(detail::h_rule(cfg), t, z, 0, false));
  v.validated = t.imag() == 0.0;
  return v;
}

/// H(t, x) for real arguments, full float128 result (sign tests near zeros).
inline qreal h_real(double t, qreal x, const HQuadConfig& cfg = {}) {
  const auto& r = detail::h_rule(cfg);
  using boost::multiprecision::cos;
  using boost::multiprecision::exp;
  qreal s = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.wphi[i] * exp(t * r.x[i] * r.x[i]) * cos(x * r.x[i]);
  return s;
}

/// H(-t, z): a solution of the forward heat equation.
inline HeatSolution h_hat(const HQuadConfig& cfg = {}) {
  cfg.validate();
  HeatSolution h;
  h.backing = Backing::quadrature;
  h.label = "H(-t,z)";
  h.F = [cfg](cplx t, cplx z) { return detail::to_cplx(detail::h_moment(detail::h_rule(cfg), -t, z, 0, false)); };
  h.dz = [cfg](cplx t, cplx z) { return -detail::to_cplx(detail::h_moment(detail::h_rule(cfg), -t, z, 1, true)); };
  h.dzz = [cfg](cplx t, cplx z) { return -detail::to_cplx(detail::h_moment(detail::h_rule(cfg), -t, z, 2, false)); };
  h.dt = [cfg](cplx t, cplx z) { return -detail::to_cplx(detail::h_moment(detail::h_rule(cfg), -t, z, 2, false)); };
  return h;
}

// ---------------------------------------------------------------------------
// Real zeros

namespace detail {

inline qreal bisect_zero(double t, qreal lo, qreal hi, qreal flo, const HQuadConfig& cfg) {
  for (int it = 0; it < 200 && hi - lo > qreal(1e-14) * (1 + abs(lo)); ++it) {
    const qreal mid = (lo + hi) / 2;
    const qreal fm = h_real(t, mid, cfg);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace detail

/// Real zeros of H(t, .) in [lo, hi]: sign changes on a grid of the given
/// step, refined by bisection. Sampling runs on worker threads.
inline std::vector<double> h_zeros(double t, double lo, double hi, const HQuadConfig& cfg = {}, double step = 0.1,
                                   unsigned threads = 0) {
  cfg.validate();
  if (t < 0) throw std::invalid_argument("h_zeros: t must be >= 0");
  if (!(hi > lo) || !(step > 0)) throw std::invalid_argument("h_zeros: empty interval");
  detail::h_rule(cfg);  // build the cache once, outside the workers
  const int n = static_cast<int>(std::ceil((hi - lo) / step));
  std::vector<qreal> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = i == n ? qreal(hi) : qreal(lo) + qreal(step) * i;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, n + 1);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int i = static_cast<int>(w); i <= n; i += static_cast<int>(threads)) fs[i] = h_real(t, xs[i], cfg);
    });
  for (auto& th : pool) th.join();

  std::vector<double> zeros;
  for (int i = 0; i < n; ++i) {
    if (fs[i] == 0) {
      zeros.push_back(static_cast<double>(xs[i]));
      continue;
    }
    if ((fs[i] < 0) != (fs[i + 1] < 0) && fs[i + 1] != 0)
      zeros.push_back(static_cast<double>(detail::bisect_zero(t, xs[i], xs[i + 1], fs[i], cfg)));
  }
  if (n >= 0 && fs[n] == 0) zeros.push_back(static_cast<double>(xs[n]));
  return zeros;
}

/// The first n positive zeros of H(t, .).
inline std::vector<double> h_first_zeros(double t, int n, const HQuadConfig& cfg = {}) {
  std::vector<double> zeros;
  double lo = 0.0;
  while (static_cast<int>(zeros.size()) < n) {
    const auto more = h_zeros(t, lo, lo + 40.0, cfg, 0.2);
    for (double z : more)
      if (zeros.empty() || z > zeros.back() + 1e-9) zeros.push_back(z);
    lo += 40.0;
    if (lo > 2000) throw numerical_error("h_first_zeros: too few zeros found");
  }
  zeros.resize(n);
  return zeros;
}

// ---------------------------------------------------------------------------
// Zero dynamics of H: z_k' = +2 sum_{j != k} 1/(z_k - z_j) (backward heat)

struct Rt5Row {
  int k;
  double z;
  double velocity_fd;
  double velocity_sum;  // truncated sum over the window and its mirrors
  double mismatch;      // |fd - sum|
};

struct Rt5Report {
  double t0, dt;
  int window;
  bool mirrors = true;
  std::vector<Rt5Row> rows;
  double relative_mismatch = 0.0;  // of the lowest zero, shared by every window
  std::string note =
      "sign +2 sum (backward heat); the sum runs over the tracked window and its mirrors only, the rest of the "
      "zero set is an unmodelled tail";
};

/// Velocities of z_1..z_n by central differences in t.
inline std::vector<double> h_zero_velocities(const std::vector<double>& zeros, double t0, double dt,
                                             const HQuadConfig& cfg = {}) {
  std::vector<double> v(zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    double gap = std::numeric_limits<double>::infinity();
    if (k > 0) gap = std::min(gap, zeros[k] - zeros[k - 1]);
    if (k + 1 < zeros.size()) gap = std::min(gap, zeros[k + 1] - zeros[k]);
    if (!std::isfinite(gap)) gap = zeros[k];
    const double r = std::min(0.25 * gap, 0.5);
    double moved[2];
    for (int s = 0; s < 2; ++s) {
      const double t = t0 + (s == 0 ? dt : -dt);
      const qreal lo = zeros[k] - r, hi = zeros[k] + r;
      const qreal flo = h_real(t, lo, cfg), fhi = h_real(t, hi, cfg);
      if ((flo < 0) == (fhi < 0))
        throw numerical_error("rt5_check: lost zero " + std::to_string(k + 1) + " near " + std::to_string(zeros[k]));
      moved[s] = static_cast<double>(detail::bisect_zero(t, lo, hi, flo, cfg));
    }
    v[k] = (moved[0] - moved[1]) / (2 * dt);
  }
  return v;
}

/// 2 sum_{j != k} 1/(z_k - z_j) over the window, optionally with the mirrored
/// zeros -z_j (H is even, so they are zeros too).
inline double rt5_velocity_sum(const std::vector<double>& zeros, std::size_t k, bool mirrors = true) {
  double s = mirrors ? 1.0 / (2.0 * zeros[k]) : 0.0;
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    if (j != k) s += 1.0 / (zeros[k] - zeros[j]);
    if (mirrors && j != k) s += 1.0 / (zeros[k] + zeros[j]);
  }
  return 2.0 * s;
}

inline Rt5Report rt5_check(double t0, int window, double dt = 1e-3, const HQuadConfig& cfg = {}, bool mirrors = true) {
  if (!(t0 > 0)) throw std::invalid_argument("rt5_check: t0 must be positive");
  if (window < 1) throw std::invalid_argument("rt5_check: window must be >= 1");
  if (!(dt > 0) || dt >= t0) throw std::invalid_argument("rt5_check: need 0 < dt < t0");
  const auto zeros = h_first_zeros(t0, window, cfg);
  const auto v = h_zero_velocities(zeros, t0, dt, cfg);
  Rt5Report rep{t0, dt, window, mirrors, {}};
  for (int k = 0; k < window; ++k) {
    const double pred = rt5_velocity_sum(zeros, k, mirrors);
    rep.rows.push_back({k + 1, zeros[k], v[k], pred, std::abs(v[k] - pred)});
  }
  rep.relative_mismatch = rep.rows[0].mismatch / std::abs(rep.rows[0].velocity_fd);
  return rep;
}

}  // namespace caloric
