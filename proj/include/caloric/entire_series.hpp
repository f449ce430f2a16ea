#pragma once

// Entire functions as Taylor-coefficient rules: g(z) = sum a_n (z - center)^n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "caloric/types.hpp"

namespace caloric {

/// Coefficient rule for an entire function. Coefficients beyond n_max are not
/// available; `finite` marks data that is exactly zero past n_max (polynomials).
struct CoefficientSeries {
  std::function<xcplx(int)> generator;
  int n_max = 0;
  cplx center = 0.0;
  bool finite = false;
  std::string label;

  xcplx coeff(int n) const {
    if (n < 0) throw std::out_of_range("CoefficientSeries: negative index");
    if (n > n_max) {
      if (finite) return 0;
      throw std::out_of_range("CoefficientSeries: index " + std::to_string(n) + " above n_max " +
                              std::to_string(n_max));
    }
    return generator(n);
  }

  std::vector<xcplx> coefficients(int upto) const {
    std::vector<xcplx> out(upto + 1);
    for (int n = 0; n <= upto; ++n) out[n] = coeff(n);
    return out;
  }

  std::vector<xcplx> coefficients() const { return coefficients(n_max); }

  /// Partial-sum evaluation at z.
  cplx operator()(cplx z) const {
    const xcplx w = widen(z - center);
    xcplx acc = 0;
    for (int n = n_max; n >= 0; --n) acc = acc * w + generator(n);
    return narrow(acc);
  }
};

namespace series {

inline constexpr int default_n_max = 600;

namespace detail {

// r^n / n! without overflow.
inline xcplx power_over_factorial(xcplx r, int n) {
  if (n == 0) return 1;
  if (r == xcplx(0)) return 0;
  const xreal mag = std::exp(static_cast<xreal>(n) * std::log(std::abs(r)) - std::lgamma(static_cast<xreal>(n) + 1));
  return std::polar(mag, static_cast<xreal>(n) * std::arg(r));
}

}  // namespace detail

/// e^{r z}: a_n = r^n / n!.
inline CoefficientSeries exp_rule(cplx r = 1.0, int n_max = default_n_max) {
  const xcplx rr = widen(r);
  return {[rr](int n) { return detail::power_over_factorial(rr, n); }, n_max, 0.0, false, "exp"};
}

/// sin(lambda z).
inline CoefficientSeries sin_rule(cplx lambda = 1.0, int n_max = default_n_max) {
  const xcplx l = widen(lambda);
  return {[l](int n) -> xcplx {
            if (n % 2 == 0) return 0;
            const xcplx v = detail::power_over_factorial(l, n);
            return ((n / 2) % 2 == 0) ? v : -v;
          },
          n_max, 0.0, false, "sin"};
}

/// cos(lambda z).
inline CoefficientSeries cos_rule(cplx lambda = 1.0, int n_max = default_n_max) {
  const xcplx l = widen(lambda);
  return {[l](int n) -> xcplx {
            if (n % 2 == 1) return 0;
            const xcplx v = detail::power_over_factorial(l, n);
            return ((n / 2) % 2 == 0) ? v : -v;
          },
          n_max, 0.0, false, "cos"};
}

/// e^{a z^2}: c_{2j} = a^j / j!.
inline CoefficientSeries gauss_rule(cplx a, int n_max = default_n_max) {
  const xcplx aa = widen(a);
  return {[aa](int n) -> xcplx {
            if (n % 2 == 1) return 0;
            return detail::power_over_factorial(aa, n / 2);
          },
          n_max, 0.0, false, "gauss"};
}

/// a_n = (n!)^{-p}; order 1/p.
inline CoefficientSeries gamma_power_rule(double p, int n_max = default_n_max) {
  if (!(p > 0)) throw std::invalid_argument("gamma_power_rule: p must be positive");
  const xreal pp = p;
  return {[pp](int n) -> xcplx { return std::exp(-pp * std::lgamma(static_cast<xreal>(n) + 1)); }, n_max, 0.0,
          false, "gamma_power"};
}

/// z^k.
inline CoefficientSeries monomial_rule(int k) {
  if (k < 0) throw std::invalid_argument("monomial_rule: k must be nonnegative");
  return {[k](int n) -> xcplx { return n == k ? 1 : 0; }, k, 0.0, true, "monomial"};
}

/// Finite coefficient list a_0, ..., a_N.
inline CoefficientSeries list_rule(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  const int n = static_cast<int>(coeffs.size()) - 1;
  return {[c = std::move(coeffs)](int k) -> xcplx { return widen(c[k]); }, n, 0.0, true, "list"};
}

inline CoefficientSeries list_rule_x(std::vector<xcplx> coeffs, bool finite, std::string label = "list") {
  if (coeffs.empty()) coeffs.push_back(0);
  const int n = static_cast<int>(coeffs.size()) - 1;
  return {[c = std::move(coeffs)](int k) { return c[k]; }, n, 0.0, finite, std::move(label)};
}

}  // namespace series

/// Same series with its coefficients tabulated once (generator becomes a lookup).
inline CoefficientSeries materialize(const CoefficientSeries& s) {
  CoefficientSeries out = series::list_rule_x(s.coefficients(), s.finite, s.label);
  out.center = s.center;
  return out;
}

/// g^sharp: coefficients |a_n|.
inline CoefficientSeries sharp(const CoefficientSeries& s) {
  CoefficientSeries out = s;
  out.generator = [g = s.generator](int n) -> xcplx { return std::abs(g(n)); };
  out.label = s.label + "#";
  return out;
}

/// g': coefficients (n+1) a_{n+1}.
inline CoefficientSeries derivative(const CoefficientSeries& s) {
  CoefficientSeries out = s;
  out.n_max = std::max(0, s.n_max - 1);
  out.generator = [g = s.generator, top = s.n_max](int n) -> xcplx {
    if (n + 1 > top) return 0;
    return static_cast<xreal>(n + 1) * g(n + 1);
  };
  out.label = s.label + "'";
  return out;
}

/// One recentered coefficient with its accounting.
struct ShiftedCoefficient {
  xcplx value = 0;
  xreal abs_sum = 0;          // sum |a_k C(k,n) z0^(k-n)|, the cancellation scale
  xreal truncation_bound = 0;  // geometric estimate of the neglected tail
};

struct ShiftResult {
  CoefficientSeries series;  // a_n(z0), n <= N, finite list
  std::vector<xreal> abs_sums;
  xreal truncation_bound = 0;  // max over n
};

namespace detail {

// Tail beyond the last index from the last 10 terms: the terms' moduli are
// fitted by a geometric ratio q between the first and last nonzero of the block.
inline xreal geometric_tail(const xreal* block, int len) {
  int lo = -1, hi = -1;
  for (int i = 0; i < len; ++i)
    if (block[i] > 0) {
      if (lo < 0) lo = i;
      hi = i;
    }
  if (hi < 0) return 0;
  if (hi == lo) return std::numeric_limits<xreal>::infinity();
  const xreal q = std::pow(block[hi] / block[lo], 1.0L / (hi - lo));
  if (!(q < 1)) return std::numeric_limits<xreal>::infinity();
  // nonzero terms may be spaced (parity), so the per-index ratio bounds them all
  return block[hi] * q / (1 - q);
}

}  // namespace detail

/// a_n(z0) = sum_{k >= n} a_k C(k, n) z0^(k-n), over the available coefficients.
inline ShiftedCoefficient shift_coefficient(const std::vector<xcplx>& a, bool finite, cplx z0, int n) {
  const int top = static_cast<int>(a.size()) - 1;
  ShiftedCoefficient r;
  if (n > top) return r;
  const xcplx w = widen(z0);
  xcplx weight = 1;  // C(k, n) z0^(k-n)
  constexpr int block = 10;
  xreal last[block] = {};
  for (int k = n; k <= top; ++k) {
    if (k > n) weight *= w * (static_cast<xreal>(k) / static_cast<xreal>(k - n));
    const xcplx term = a[k] * weight;
    r.value += term;
    const xreal mag = std::abs(term);
    r.abs_sum += mag;
    if (k > top - block) last[k - (top - block + 1)] = mag;
  }
  if (!finite && z0 != 0.0) {
    const int count = std::min(block, top - n + 1);
    r.truncation_bound = detail::geometric_tail(last + (block - count), count);
  }
  return r;
}

/// Recentered series a_n(z0) for n <= N. Throws truncation_error when the
/// estimated tail of some coefficient exceeds tol times its absolute-sum scale.
inline ShiftResult taylor_shift(const CoefficientSeries& s, cplx z0, int N, double tol = 1e-12) {
  if (N > s.n_max && !s.finite) throw std::invalid_argument("taylor_shift: N exceeds n_max");
  const std::vector<xcplx> a = s.coefficients();
  std::vector<xcplx> out(N + 1);
  ShiftResult res;
  res.abs_sums.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    const ShiftedCoefficient c = shift_coefficient(a, s.finite, z0, n);
    out[n] = c.value;
    res.abs_sums[n] = c.abs_sum;
    res.truncation_bound = std::max(res.truncation_bound, c.truncation_bound);
    if (c.truncation_bound > tol * std::max(c.abs_sum, std::numeric_limits<xreal>::min()))
      throw truncation_error("taylor_shift: tail estimate " + std::to_string(static_cast<double>(c.truncation_bound)) +
                             " above tolerance at n = " + std::to_string(n));
  }
  res.series = series::list_rule_x(std::move(out), true, s.label + "@z0");
  res.series.center = s.center + z0;
  return res;
}

/// Sum of moduli of the coefficients, the majorant g^sharp(r).
inline double sharp_value(const CoefficientSeries& s, double r) {
  xreal acc = 0;
  for (int n = s.n_max; n >= 0; --n) acc = acc * r + std::abs(s.generator(n));
  return static_cast<double>(acc);
}

/// Report for the entire-function heuristic: |a_n|^{1/n} trending to 0.
struct DecayReport {
  bool eventually_decreasing = true;
  std::vector<double> roots;  // |a_n|^{1/n} over the upper half window, zeros skipped
};

inline DecayReport decay_report(const CoefficientSeries& s) {
  DecayReport r;
  for (int n = std::max(1, s.n_max / 2); n <= s.n_max; ++n) {
    const xreal mag = std::abs(s.generator(n));
    if (mag == 0) continue;
    r.roots.push_back(static_cast<double>(std::pow(mag, 1.0L / n)));
  }
  // compare the two halves of the sampled tail rather than every neighbour pair
  if (r.roots.size() >= 4) {
    const std::size_t h = r.roots.size() / 2;
    const double first = *std::max_element(r.roots.begin(), r.roots.begin() + h);
    const double second = *std::max_element(r.roots.begin() + h, r.roots.end());
    r.eventually_decreasing = second <= first;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Canonical products

struct CanonicalProduct {
  std::vector<cplx> zeros;
  int genus = 0;
  double sigma = 0.0;
};

/// Genus rule for the convergence exponent sigma.
inline int genus_select(double sigma, bool sigma_is_integer, bool sum_at_sigma_converges) {
  if (sigma < 0) throw std::invalid_argument("genus_select: sigma must be nonnegative");
  if (!sigma_is_integer) return static_cast<int>(std::floor(sigma));
  const int s = static_cast<int>(std::lround(sigma));
  if (!sum_at_sigma_converges) return s;
  return std::max(s - 1, 0);
}

/// Least-squares slope of ln k against ln |z|_(k) (zeros sorted by modulus),
/// i.e. the counting-function exponent n(r) ~ r^sigma.
inline double estimate_convergence_exponent(std::vector<cplx> zeros) {
  if (zeros.size() < 2) return 0.0;
  std::sort(zeros.begin(), zeros.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const double r = std::abs(zeros[k]);
    if (r == 0.0) throw std::invalid_argument("estimate_convergence_exponent: zero at the origin");
    const double x = std::log(r), y = std::log(static_cast<double>(k + 1));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return 0.0;
  return std::max(0.0, (n * sxy - sx * sy) / den);
}

/// Canonical product over a finite zero list. A declared sigma overrides the
/// estimate; a finite list always has convergent sum at its exponent.
inline CanonicalProduct make_canonical_product(std::vector<cplx> zeros, std::optional<double> declared_sigma = {},
                                               std::optional<bool> sum_converges = {}) {
  for (cplx z : zeros)
    if (z == 0.0) throw std::invalid_argument("make_canonical_product: zeros must be nonzero");
  CanonicalProduct cp;
  cp.sigma = declared_sigma ? *declared_sigma : estimate_convergence_exponent(zeros);
  const bool integer = std::abs(cp.sigma - std::round(cp.sigma)) < 1e-12;
  cp.genus = genus_select(cp.sigma, integer, sum_converges.value_or(true));
  cp.zeros = std::move(zeros);
  return cp;
}

/// prod (1 - z/z_k) exp(z/z_k + ... + z^p/(p z_k^p)).
inline cplx canonical_eval(const CanonicalProduct& cp, cplx z) {
  cplx prod = 1.0;
  cplx exponent = 0.0;
  for (cplx zk : cp.zeros) {
    const cplx u = z / zk;
    prod *= 1.0 - u;
    cplx up = 1.0;
    for (int q = 1; q <= cp.genus; ++q) {
      up *= u;
      exponent += up / static_cast<double>(q);
    }
  }
  return prod * std::exp(exponent);
}

/// g(z) = exp(A_1 z + ... + A_m z^m) Pi(z).
inline cplx hadamard_eval(std::span<const cplx> A, const CanonicalProduct& cp, cplx z) {
  cplx poly = 0.0;
  for (std::size_t k = A.size(); k-- > 0;) poly = (poly + A[k]) * z;
  return std::exp(poly) * canonical_eval(cp, z);
}

inline cplx hadamard_eval(const std::vector<cplx>& A, const CanonicalProduct& cp, cplx z) {
  return hadamard_eval(std::span<const cplx>(A), cp, z);
}

}  // namespace caloric
