#pragma once

// Order and type of entire functions from Taylor coefficients, the subsequence
// quantities theta_0 / theta_1, and the caloric t-order / t-type laws.

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "caloric/entire_series.hpp"
#include "caloric/types.hpp"

namespace caloric {

enum class ExactOrderClass { minus, exact, plus, undefined };

inline const char* to_string(ExactOrderClass c) {
  switch (c) {
    case ExactOrderClass::minus: return "rho-";
    case ExactOrderClass::exact: return "rho";
    case ExactOrderClass::plus: return "rho+";
    case ExactOrderClass::undefined: return "undefined";
  }
  return "?";
}

struct Window {
  int n_min = 0;
  int n_max = 0;
};

/// Default tail window [2N/5, N].
inline Window default_window(int N) { return {std::max(1, 2 * N / 5), N}; }

struct OrderTypeEstimate {
  double rho_hat = 0.0;
  double tau_hat = std::numeric_limits<double>::quiet_NaN();  // only for 0 < rho_hat < inf
  ExactOrderClass exact_order_class = ExactOrderClass::undefined;
  Window window;
  double rho_upper_half = 0.0;  // same fit on the upper half of the window
  bool stabilized = true;       // the two fits agree within 5%
  double literal_limsup = 0.0;  // max over the window of n ln n / (-ln|a_n|)
  std::vector<double> diagnostic;  // n ln n / (-ln|a_n|) over the window, zeros skipped
};

namespace detail {

struct LogSample {
  double n;
  double y;  // -ln|a_n|
};

inline std::vector<LogSample> log_samples(const CoefficientSeries& s, Window w) {
  std::vector<LogSample> out;
  for (int n = std::max(w.n_min, 2); n <= w.n_max; ++n) {
    const xreal mag = (n > s.n_max && s.finite) ? 0 : std::abs(s.coeff(n));
    if (mag == 0) continue;
    out.push_back({static_cast<double>(n), static_cast<double>(-std::log(mag))});
  }
  return out;
}

// Least squares of -ln|a_n| / n on {ln n, 1, ln n / n, 1/n}; the ln n slope is 1/rho.
inline double fitted_order(const std::vector<LogSample>& pts) {
  if (pts.size() < 6) {
    double best = 0;
    for (const auto& p : pts)
      if (p.y > 0) best = std::max(best, p.n * std::log(p.n) / p.y);
    return best;
  }
  Eigen::MatrixXd A(pts.size(), 4);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double n = pts[i].n, ln = std::log(n);
    A(i, 0) = ln;
    A(i, 1) = 1.0;
    A(i, 2) = ln / n;
    A(i, 3) = 1.0 / n;
    b(i) = pts[i].y / n;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  const double slope = x(0);
  if (!(slope > 1e-9)) return std::numeric_limits<double>::infinity();
  return 1.0 / slope;
}

}  // namespace detail

/// (1/(e rho)) max over the window of n |a_n|^{rho/n}.
inline double estimate_type(const CoefficientSeries& s, double rho, Window w) {
  if (!(rho > 0) || !std::isfinite(rho)) throw std::invalid_argument("estimate_type: rho must be finite positive");
  xreal best = 0;
  for (int n = std::max(w.n_min, 1); n <= w.n_max; ++n) {
    const xreal mag = (n > s.n_max && s.finite) ? 0 : std::abs(s.coeff(n));
    if (mag == 0) continue;
    best = std::max(best, static_cast<xreal>(n) * std::pow(mag, static_cast<xreal>(rho) / n));
  }
  return static_cast<double>(best / (std::exp(1.0L) * rho));
}

/// Order (fitted), type and exact-order class from the coefficients in the window.
inline OrderTypeEstimate estimate_order(const CoefficientSeries& s, Window w) {
  if (w.n_min < 0 || w.n_max < w.n_min) throw std::invalid_argument("estimate_order: bad window");
  if (w.n_max > s.n_max && !s.finite) throw std::invalid_argument("estimate_order: window exceeds n_max");
  OrderTypeEstimate e;
  e.window = w;
  const auto pts = detail::log_samples(s, w);
  if (pts.empty()) {
    for (int n = 0; n <= std::min(w.n_min, s.n_max); ++n)
      if (std::abs(s.coeff(n)) != 0) {
        e.rho_hat = 0.0;  // polynomial: nothing survives in the tail
        return e;
      }
    throw numerical_error("estimate_order: all coefficients in the window are zero");
  }
  for (const auto& p : pts) {
    const double v = p.y > 0 ? p.n * std::log(p.n) / p.y : std::numeric_limits<double>::infinity();
    e.diagnostic.push_back(v);
    e.literal_limsup = std::max(e.literal_limsup, v);
  }
  e.rho_hat = detail::fitted_order(pts);
  const std::vector<detail::LogSample> upper(pts.begin() + static_cast<std::ptrdiff_t>(pts.size() / 2), pts.end());
  e.rho_upper_half = detail::fitted_order(upper);
  e.stabilized = std::isfinite(e.rho_hat) ? std::abs(e.rho_upper_half - e.rho_hat) <= 0.05 * e.rho_hat
                                          : !std::isfinite(e.rho_upper_half);
  if (e.rho_hat > 0 && std::isfinite(e.rho_hat)) {
    e.tau_hat = estimate_type(s, e.rho_hat, w);
    const Window lower{w.n_min, (w.n_min + w.n_max) / 2};
    const double tau_lower = estimate_type(s, e.rho_hat, lower);
    const bool diverging = tau_lower > 0 && e.tau_hat / tau_lower > 1.5;
    if (e.tau_hat < 1e-3)
      e.exact_order_class = ExactOrderClass::minus;
    else if (e.tau_hat > 1e3 || diverging)
      e.exact_order_class = ExactOrderClass::plus;
    else
      e.exact_order_class = ExactOrderClass::exact;
  }
  return e;
}

inline OrderTypeEstimate estimate_order(const CoefficientSeries& s) { return estimate_order(s, default_window(s.n_max)); }

// ---------------------------------------------------------------------------
// theta_0, theta_1

enum class Parity { even, odd };

struct ThetaSample {
  cplx z = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  int K = 0;
};

/// max over k in [K/2, K] of |g^{(2k+p)}(z)|^{1/(2k ln k)} from tabulated coefficients.
inline double theta_subseq(const std::vector<xcplx>& a, cplx z, Parity parity, int K) {
  if (K < 4) throw std::invalid_argument("theta_subseq: K must be >= 4");
  const int offset = parity == Parity::even ? 0 : 1;
  if (static_cast<int>(a.size()) < 2 * K + offset + 41)
    throw std::invalid_argument("theta_subseq: needs coefficients up to 2K + 40");
  const xreal eps = std::numeric_limits<xreal>::epsilon();
  double best = 0.0;
  for (int k = std::max(2, K / 2); k <= K; ++k) {
    const int n = 2 * k + offset;
    const ShiftedCoefficient c = shift_coefficient(a, false, z, n);
    if (c.truncation_bound > 1e-12L * c.abs_sum)
      throw truncation_error("theta_subseq: recentred coefficient truncated at n = " + std::to_string(n));
    const xreal mag = std::abs(c.value);
    if (mag <= 1e3L * eps * c.abs_sum) continue;  // cancellation noise: an exact zero
    // |g^{(n)}| = n! |a_n(z)|
    const xreal log_deriv = std::lgamma(static_cast<xreal>(n) + 1) + std::log(mag);
    const double v = static_cast<double>(std::exp(log_deriv / (2.0L * k * std::log(static_cast<xreal>(k)))));
    best = std::max(best, v);
  }
  return best;
}

inline double theta_subseq(const CoefficientSeries& s, cplx z, Parity parity, int K = 100) {
  return theta_subseq(s.coefficients(), z, parity, K);
}

inline ThetaSample theta_sample(const std::vector<xcplx>& a, cplx z, int K) {
  return {z, theta_subseq(a, z, Parity::even, K), theta_subseq(a, z, Parity::odd, K), K};
}

/// Evaluate theta_0 / theta_1 over a list of points (split across threads).
inline std::vector<ThetaSample> theta_grid(const CoefficientSeries& s, const std::vector<cplx>& grid, int K = 100,
                                           unsigned threads = 0) {
  // coefficients past 2K + 61 only slow the convolutions down; the truncation
  // check in theta_subseq still guards the cut
  const std::vector<xcplx> a = s.coefficients(std::min(s.n_max, 2 * K + 61));
  std::vector<ThetaSample> out(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, grid.size()));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < grid.size(); i += threads) out[i] = theta_sample(a, grid[i], K);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// n x n grid over [lo, hi]^2 (real and imaginary parts), exact endpoints.
inline std::vector<cplx> square_grid(double lo, double hi, int n) {
  std::vector<cplx> g;
  g.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = lo + (hi - lo) * i / (n - 1), y = lo + (hi - lo) * j / (n - 1);
      g.emplace_back(std::abs(x) < 1e-15 ? 0.0 : x, std::abs(y) < 1e-15 ? 0.0 : y);
    }
  return g;
}

struct Theorem1Summary {
  double rho_hat = 0.0;
  double theta = 0.0;  // e^{1 - 1/rho_hat}
  double fraction_theta0 = 0.0;
  double fraction_theta1 = 0.0;
  double fraction_max = 0.0;  // max(theta0, theta1) vs theta
  std::vector<ThetaSample> outliers0;
  std::vector<ThetaSample> outliers1;
  std::vector<ThetaSample> samples;
};

/// Compare theta_0(z), theta_1(z) on the grid with theta = e^{1 - 1/rho_hat}.
inline Theorem1Summary theorem1_sample(const CoefficientSeries& s, const std::vector<cplx>& grid, int K = 100,
                                       double tol = 0.05) {
  Theorem1Summary r;
  r.rho_hat = estimate_order(s).rho_hat;
  r.theta = r.rho_hat > 0 ? std::exp(1.0 - 1.0 / r.rho_hat) : 0.0;
  r.samples = theta_grid(s, grid, K);
  std::size_t m0 = 0, m1 = 0, mm = 0;
  for (const auto& smp : r.samples) {
    if (std::abs(smp.theta0 - r.theta) <= tol) ++m0; else r.outliers0.push_back(smp);
    if (std::abs(smp.theta1 - r.theta) <= tol) ++m1; else r.outliers1.push_back(smp);
    if (std::abs(std::max(smp.theta0, smp.theta1) - r.theta) <= tol) ++mm;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, r.samples.size()));
  r.fraction_theta0 = m0 / n;
  r.fraction_theta1 = m1 / n;
  r.fraction_max = mm / n;
  return r;
}

// ---------------------------------------------------------------------------
// Caloric t-order / t-type

/// rho / (2 - rho); +inf at rho = 2.
inline double caloric_t_order(double rho) {
  if (!(rho >= 0)) throw std::invalid_argument("caloric_t_order: rho must be >= 0");
  if (rho > 2) throw std::domain_error("caloric_t_order: rho > 2 has no entire caloric extension");
  if (rho == 2) return std::numeric_limits<double>::infinity();
  return rho / (2 - rho);
}

/// (1 - rho/2) (2 rho)^{rho/(2-rho)} tau^{2/(2-rho)}.
inline double caloric_t_type(double rho, double tau) {
  if (!(rho > 0 && rho < 2)) throw std::domain_error("caloric_t_type: rho must lie in (0, 2)");
  if (!(tau >= 0)) throw std::invalid_argument("caloric_t_type: tau must be >= 0");
  return (1 - rho / 2) * std::pow(2 * rho, rho / (2 - rho)) * std::pow(tau, 2 / (2 - rho));
}

/// t-series of F(t, z) (even) or d_z F(t, z) (odd) at fixed z:
/// b_j = (2j)! c_{2j}(z) / j!  or  (2j+1)! c_{2j+1}(z) / j!.
inline CoefficientSeries t_series_coeffs(const CoefficientSeries& f, cplx z, Parity parity, int J) {
  if (J < 0) throw std::invalid_argument("t_series_coeffs: J must be nonnegative");
  const int offset = parity == Parity::even ? 0 : 1;
  if (!f.finite && 2 * J + offset + 11 > f.n_max)
    throw std::invalid_argument("t_series_coeffs: needs coefficient depth 2J + 11");
  const std::vector<xcplx> a = f.coefficients();
  std::vector<xcplx> b(J + 1);
  for (int j = 0; j <= J; ++j) {
    const int n = 2 * j + offset;
    const ShiftedCoefficient c = shift_coefficient(a, f.finite, z, n);
    if (c.truncation_bound > 1e-12L * c.abs_sum)
      throw truncation_error("t_series_coeffs: recentred coefficient truncated at n = " + std::to_string(n));
    const xreal log_ratio = std::lgamma(static_cast<xreal>(n) + 1) - std::lgamma(static_cast<xreal>(j) + 1);
    b[j] = c.value * std::exp(log_ratio);
  }
  CoefficientSeries out = series::list_rule_x(std::move(b), f.finite, "t-series(" + f.label + ")");
  return out;
}

}  // namespace caloric
