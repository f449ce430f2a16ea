#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "caloric/types.hpp"

namespace caloric::special {

namespace detail {

// Lanczos approximation, g = 7, 9 terms (relative accuracy ~1e-15).
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_p = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re(z) >= 0.5.
inline cplx lgamma_right(cplx z) {
  z -= 1.0;
  cplx a = lanczos_p[0];
  for (std::size_t k = 1; k < lanczos_p.size(); ++k) a += lanczos_p[k] / (z + static_cast<double>(k));
  const cplx t = z + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace detail

/// Reciprocal Gamma function 1/Gamma(z). Entire; exactly zero at 0, -1, -2, ...
inline cplx rgamma(cplx z) {
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    const double re = z.real();
    if (z.imag() == 0.0 && re == std::floor(re)) return 0.0;
    return std::sin(pi * z) * std::exp(detail::lgamma_right(1.0 - z)) / pi;
  }
  return std::exp(-detail::lgamma_right(z));
}

inline cplx gamma(cplx z) { return 1.0 / rgamma(z); }

/// int_0^w exp(-s^2) ds by its Maclaurin series, summed in extended precision.
/// Accurate to ~1e-12 relative for |w| <= 4.
inline cplx gauss_integral(cplx w) {
  const xcplx x = widen(w);
  const xcplx x2 = x * x;
  xcplx power = x;  // (-1)^n w^(2n+1) / n!
  xcplx sum = 0;
  for (int n = 0; n < 400; ++n) {
    const xcplx term = power / static_cast<xreal>(2 * n + 1);
    sum += term;
    if (n > 4 && std::abs(term) < 1e-22L * std::abs(sum)) break;
    power *= -x2 / static_cast<xreal>(n + 1);
  }
  return narrow(sum);
}

inline cplx erf(cplx w) { return 2.0 / std::sqrt(pi) * gauss_integral(w); }

template <class Real>
struct QuadratureRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// Gauss-Legendre rule on [-1, 1], Newton iteration on the Legendre recurrence.
template <class Real>
QuadratureRule<Real> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real pi_r = Real(pi);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    using std::abs;
    using std::cos;
    Real x = cos(pi_r * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2 * k - 1) * x * p1 - (k - 1) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1);
      const Real dx = p0 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const Real w = Real(2) / ((1 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Gauss-Hermite rule for weight exp(-x^2) on the real line, computed from the
/// orthonormal Hermite recurrence with Newton refinement (long double).
inline QuadratureRule<xreal> gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  QuadratureRule<xreal> rule;
  rule.nodes.assign(n, 0);
  rule.weights.assign(n, 0);
  const xreal pim4 = 0.7511255444649425L;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  xreal z = 0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(static_cast<xreal>(2 * n + 1)) - 1.85575L * std::pow(static_cast<xreal>(2 * n + 1), -0.16667L);
    else if (i == 1)
      z -= 1.14L * std::pow(static_cast<xreal>(n), 0.426L) / z;
    else if (i == 2)
      z = 1.86L * z - 0.86L * rule.nodes[0];
    else if (i == 3)
      z = 1.91L * z - 0.91L * rule.nodes[1];
    else
      z = 2.0L * z - rule.nodes[i - 2];
    xreal pp = 0;
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
      xreal p1 = pim4, p2 = 0;
      for (int j = 0; j < n; ++j) {
        const xreal p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / (j + 1)) * p2 - std::sqrt(static_cast<xreal>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0L * n) * p2;
      const xreal z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-17L * (1 + std::fabs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw convergence_error("gauss_hermite: Newton iteration did not converge");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0L / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace caloric::special
