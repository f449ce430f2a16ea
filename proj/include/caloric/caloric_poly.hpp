#pragma once

// Caloric polynomials P_m(t, z) = sum_j m! / (j! (m-2j)!) t^j z^(m-2j):
// the polynomial solutions of the heat equation d_t F = d_z^2 F with P_m(0, z) = z^m.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "caloric/roots.hpp"
#include "caloric/types.hpp"

namespace caloric {

using BigInt = boost::multiprecision::cpp_int;

/// Exact coefficient table of P_m. coeffs[j] multiplies t^j z^(m-2j).
struct CaloricPolynomial {
  int degree = 0;
  std::vector<BigInt> coeffs;

  int half_degree() const { return degree / 2; }
};

/// Table of d_z P_m together with the ladder factor m (d_z P_m = m P_{m-1}).
struct DerivativeTable {
  int degree = 0;  // degree of the derivative, m - 1
  BigInt factor;   // m
  std::vector<BigInt> coeffs;
};

/// Sorted values 0 < rho_1 < ... < rho_l with P_m = z^(m mod 2) prod (z^2 + rho_j t).
struct RhoSpectrum {
  int degree = 0;
  bool odd = false;
  std::vector<double> values;
};

/// Degree above which eval() switches to the Hermite representation.
inline constexpr int hermite_route_threshold = 60;

inline CaloricPolynomial build(int m) {
  if (m < 0) throw std::invalid_argument("build: degree must be nonnegative");
  CaloricPolynomial p;
  p.degree = m;
  p.coeffs.reserve(m / 2 + 1);
  BigInt c = 1;
  p.coeffs.push_back(c);
  for (int j = 0; j < m / 2; ++j) {
    // c_{j+1} = c_j (m-2j)(m-2j-1) / (j+1), exact
    c *= (m - 2 * j);
    c *= (m - 2 * j - 1);
    c /= (j + 1);
    p.coeffs.push_back(c);
  }
  return p;
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

namespace detail {

inline cplx check_finite(cplx v, const char* where) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw overflow_error(std::string(where) + ": value exceeds floating-point range");
  return v;
}

// sum_j c_j t^j w^(l-j) with w = z^2, times z for odd degree.
inline cplx horner_caloric(const CaloricPolynomial& p, cplx t, cplx z) {
  const cplx w = z * z;
  cplx acc = to_double(p.coeffs[0]);
  cplx tj = 1.0;
  for (std::size_t j = 1; j < p.coeffs.size(); ++j) {
    tj *= t;
    acc = acc * w + to_double(p.coeffs[j]) * tj;
  }
  if (p.degree % 2 == 1) acc *= z;
  return acc;
}

}  // namespace detail

/// Physicists' Hermite polynomial H_m(x) by the three-term recurrence.
inline cplx hermite_value(int m, cplx x) {
  if (m < 0) throw std::invalid_argument("hermite_value: degree must be nonnegative");
  cplx h0 = 1.0;
  if (m == 0) return h0;
  cplx h1 = 2.0 * x;
  for (int n = 1; n < m; ++n) {
    const cplx h2 = 2.0 * x * h1 - 2.0 * n * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// P_m(t, z) through P_m(t, z) = (i sqrt(t))^m H_m(z / (2 i sqrt(t))), principal sqrt.
/// The other branch gives the same value since H_m has parity (-1)^m.
inline cplx eval_hermite_route(int m, cplx t, cplx z, bool principal_branch = true) {
  if (t == 0.0) return std::pow(z, m);
  cplx root = std::sqrt(t);
  if (!principal_branch) root = -root;
  const cplx scale = cplx(0.0, 1.0) * root;
  return detail::check_finite(std::pow(scale, m) * hermite_value(m, z / (2.0 * scale)), "eval");
}

inline cplx eval(const CaloricPolynomial& p, cplx t, cplx z) {
  if (p.degree > hermite_route_threshold) return eval_hermite_route(p.degree, t, z);
  return detail::check_finite(detail::horner_caloric(p, t, z), "eval");
}

/// d_t P_m evaluated from the coefficient table (sum_j j c_j t^(j-1) z^(m-2j)).
inline cplx eval_dt(const CaloricPolynomial& p, cplx t, cplx z) {
  cplx sum = 0.0;
  cplx tj = 1.0;  // t^(j-1)
  for (std::size_t j = 1; j < p.coeffs.size(); ++j) {
    sum += static_cast<double>(j) * to_double(p.coeffs[j]) * tj * std::pow(z, p.degree - 2 * static_cast<int>(j));
    tj *= t;
  }
  return detail::check_finite(sum, "eval_dt");
}

/// Coefficient table of d_z P_m; throws std::logic_error if it is not m * P_{m-1}.
inline DerivativeTable dz(const CaloricPolynomial& p) {
  if (p.degree == 0) throw std::domain_error("dz: P_0 is constant, no derivative table");
  DerivativeTable d;
  d.degree = p.degree - 1;
  d.factor = p.degree;
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
    const int power = p.degree - 2 * static_cast<int>(j);
    if (power == 0) break;
    d.coeffs.push_back(p.coeffs[j] * power);
  }
  const CaloricPolynomial lower = build(p.degree - 1);
  if (lower.coeffs.size() != d.coeffs.size())
    throw std::logic_error("dz: derivative ladder violated (length)");
  for (std::size_t j = 0; j < d.coeffs.size(); ++j)
    if (d.coeffs[j] != d.factor * lower.coeffs[j]) throw std::logic_error("dz: derivative ladder violated");
  return d;
}

inline bool derivative_ladder_holds(int m) {
  try {
    (void)dz(build(m));
    return true;
  } catch (const std::logic_error&) {
    return false;
  }
}

/// Integer coefficients of H_m(x), ascending powers of x.
inline std::vector<BigInt> hermite_coefficients(int m) {
  // H_m(x) = m! sum_j (-1)^j / (j! (m-2j)!) (2x)^(m-2j)
  const CaloricPolynomial p = build(m);
  std::vector<BigInt> c(m + 1, 0);
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
    const int power = m - 2 * static_cast<int>(j);
    BigInt v = p.coeffs[j] << power;
    if (j % 2 == 1) v = -v;
    c[power] = v;
  }
  return c;
}

/// Positive zeros of H_m mapped to rho = 4 h^2. Roots come from the shared Aberth
/// solver (evaluated through the recurrence) and are Newton-polished.
inline RhoSpectrum rho_spectrum(int m) {
  if (m < 2) throw std::invalid_argument("rho_spectrum: degree must be >= 2");
  const auto eval_h = [m](cplx x) {
    // H_m, H_m' = 2m H_{m-1}, and the monomial-basis magnitude |H_m(i|x|)| as scale.
    cplx h0 = 1.0, h1 = 2.0 * x;
    double s0 = 1.0, s1 = 2.0 * std::abs(x);
    for (int n = 1; n < m; ++n) {
      const cplx h2 = 2.0 * x * h1 - 2.0 * n * h0;
      const double s2 = 2.0 * std::abs(x) * s1 + 2.0 * n * s0;
      h0 = h1;
      h1 = h2;
      s0 = s1;
      s1 = s2;
    }
    return PolyEval{h1, 2.0 * m * h0, s1};
  };
  const std::vector<cplx> roots = aberth_roots(m, eval_h, std::sqrt(2.0 * m + 1.0));

  RhoSpectrum spec;
  spec.degree = m;
  spec.odd = (m % 2 == 1);
  for (cplx r : roots) {
    double x = r.real();
    if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(x)))
      throw convergence_error("rho_spectrum: Hermite root off the real axis");
    if (x <= 1e-8) continue;
    for (int it = 0; it < 20; ++it) {
      const PolyEval e = eval_h(x);
      const double step = e.value.real() / e.derivative.real();
      x -= step;
      if (std::abs(step) <= 1e-16 * x) break;
    }
    const PolyEval e = eval_h(x);
    if (std::abs(e.value) > 1e-13 * e.scale && std::abs(e.value) > 1e-14 * x * std::abs(e.derivative))
      throw convergence_error("rho_spectrum: polish residual too large");
    spec.values.push_back(4.0 * x * x);
  }
  std::sort(spec.values.begin(), spec.values.end());
  if (static_cast<int>(spec.values.size()) != m / 2)
    throw convergence_error("rho_spectrum: wrong number of positive Hermite zeros");
  for (std::size_t k = 1; k < spec.values.size(); ++k)
    if (!(spec.values[k] - spec.values[k - 1] > 1e-10 * spec.values[k]))
      throw convergence_error("rho_spectrum: repeated value (zeros must be simple)");
  return spec;
}

/// Strict interlacing of the spectra of P_m and P_{m-1}:
///   m = 2l:   rho_{m,1} < rho_{m-1,1} < rho_{m,2} < ... < rho_{m-1,l-1} < rho_{m,l}
///   m = 2l+1: rho_{m-1,1} < rho_{m,1} < rho_{m-1,2} < ... < rho_{m-1,l} < rho_{m,l}
inline bool interlacing_check(int m) {
  if (m < 3) throw std::invalid_argument("interlacing_check: degree must be >= 3");
  const RhoSpectrum hi = rho_spectrum(m);
  const RhoSpectrum lo = rho_spectrum(m - 1);
  std::vector<double> merged;
  const bool even = (m % 2 == 0);
  const std::size_t l = hi.values.size();
  if (even ? lo.values.size() != l - 1 : lo.values.size() != l) return false;
  for (std::size_t k = 0; k < l; ++k) {
    if (even) {
      merged.push_back(hi.values[k]);
      if (k < lo.values.size()) merged.push_back(lo.values[k]);
    } else {
      merged.push_back(lo.values[k]);
      merged.push_back(hi.values[k]);
    }
  }
  if (!(merged.front() > 0.0)) return false;
  for (std::size_t k = 1; k < merged.size(); ++k)
    if (!(merged[k - 1] < merged[k])) return false;
  return true;
}

/// kappa_m = floor((4m - 1 - sqrt(8m + 17)) / 8) + 1, the index of the largest coefficient.
inline int crude_bound_kappa(int m) {
  return static_cast<int>(std::floor((4.0 * m - 1.0 - std::sqrt(8.0 * m + 17.0)) / 8.0)) + 1;
}

/// m! (floor(m/2) + 1) / (kappa! (m - 2 kappa)!) * max_j |t|^j |z|^(m-2j)  >=  |P_m(t, z)|.
inline double crude_bound(int m, cplx t, cplx z) {
  if (m < 0) throw std::invalid_argument("crude_bound: degree must be nonnegative");
  const int kappa = crude_bound_kappa(m);
  const xreal log_coeff = std::lgamma(static_cast<xreal>(m) + 1) + std::log(static_cast<xreal>(m / 2 + 1)) -
                          std::lgamma(static_cast<xreal>(kappa) + 1) -
                          std::lgamma(static_cast<xreal>(m - 2 * kappa) + 1);
  const xreal at = std::abs(t), az = std::abs(z);
  xreal best = 0;
  for (int j = 0; j <= m / 2; ++j) best = std::max(best, std::pow(at, j) * std::pow(az, m - 2 * j));
  return static_cast<double>(std::exp(log_coeff) * best);
}

/// sum_{m <= M} lambda^m / m! P_m(t, z), which tends to exp(lambda^2 t + lambda z).
inline cplx generating_partial_sum(cplx lambda, cplx t, cplx z, int M) {
  if (M < 0) throw std::invalid_argument("generating_partial_sum: M must be nonnegative");
  cplx sum = 0.0;
  cplx weight = 1.0;  // lambda^m / m!
  for (int m = 0; m <= M; ++m) {
    if (m > 0) weight *= lambda / static_cast<double>(m);
    sum += weight * eval(build(m), t, z);
  }
  return sum;
}

}  // namespace caloric
