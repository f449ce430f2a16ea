#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "caloric/types.hpp"

namespace caloric {

/// Value, first derivative and a rounding-error scale of a polynomial at a point.
struct PolyEval {
  cplx value;
  cplx derivative;
  double scale;  // sum |a_k||z|^k, or any bound on the evaluation's magnitude
};

using PolyEvaluator = std::function<PolyEval(cplx)>;

struct AberthOptions {
  int max_iterations = 500;
  double residual_factor = 1e-12;  // |p(root)| <= residual_factor * scale
};

/// Aberth-Ehrlich simultaneous iteration for the `degree` roots of the polynomial
/// described by `eval`. Starts on a circle of radius `radius`, then polishes each
/// root by Newton. Throws convergence_error if the residual test still fails.
inline std::vector<cplx> aberth_roots(int degree, const PolyEvaluator& eval, double radius,
                                      const AberthOptions& opts = {}) {
  std::vector<cplx> z(degree);
  if (degree == 0) return z;
  for (int k = 0; k < degree; ++k) {
    const double angle = 2.0 * pi * (k + 0.25) / degree + 0.4;
    z[k] = std::polar(radius, angle);
  }
  std::vector<bool> done(degree, false);
  int iteration = 0;
  for (; iteration < opts.max_iterations; ++iteration) {
    bool all_done = true;
    for (int k = 0; k < degree; ++k) {
      if (done[k]) continue;
      const PolyEval e = eval(z[k]);
      if (std::abs(e.value) <= 1e-15 * e.scale) {
        done[k] = true;
        continue;
      }
      const cplx ratio = e.value / e.derivative;
      cplx repulsion = 0.0;
      for (int j = 0; j < degree; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z[k])))
        done[k] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  // Newton polish, then the residual acceptance test.
  for (auto& root : z) {
    for (int it = 0; it < 8; ++it) {
      const PolyEval e = eval(root);
      if (e.derivative == 0.0) break;
      const cplx step = e.value / e.derivative;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      root -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(root))) break;
    }
    // Relative residual test; a root at (or within roundoff of) the origin is
    // accepted on the size of its Newton correction instead.
    const PolyEval e = eval(root);
    const bool small_residual = std::abs(e.value) <= opts.residual_factor * std::max(e.scale, 1e-300);
    const bool small_correction = std::abs(e.value) <= 1e-14 * std::abs(e.derivative);
    if (!(small_residual || small_correction))
      throw convergence_error("aberth_roots: root residual above tolerance after " +
                              std::to_string(iteration) + " iterations");
  }
  return z;
}

/// Horner evaluation of sum c_k z^k (ascending coefficients) with derivative and scale.
inline PolyEval horner(std::span<const cplx> coeffs, cplx z) {
  cplx p = 0.0, dp = 0.0;
  double s = 0.0;
  const double az = std::abs(z);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[k];
    s = s * az + std::abs(coeffs[k]);
  }
  return {p, dp, s};
}

/// All roots of sum c_k z^k, coefficients in ascending order. Exact zero roots
/// (vanishing low-order coefficients) are split off before iterating.
inline std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, const AberthOptions& opts = {}) {
  if (coeffs.empty() || coeffs.back() == 0.0)
    throw std::invalid_argument("polynomial_roots: leading coefficient must be nonzero");
  std::size_t zeros = 0;
  while (zeros + 1 < coeffs.size() && coeffs[zeros] == 0.0) ++zeros;
  std::vector<cplx> reduced(coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), coeffs.end());
  const int degree = static_cast<int>(reduced.size()) - 1;

  // Fujiwara-type bound on root moduli sets the starting circle.
  double radius = 0.0;
  const double lead = std::abs(reduced.back());
  for (int k = 0; k < degree; ++k)
    radius = std::max(radius, std::pow(std::abs(reduced[k]) / lead, 1.0 / (degree - k)));
  radius = std::max(radius, 1e-3);

  std::vector<cplx> roots = aberth_roots(
      degree, [&](cplx z) { return horner(reduced, z); }, radius, opts);
  roots.insert(roots.end(), zeros, cplx(0.0));
  return roots;
}

inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs, const AberthOptions& opts = {}) {
  return polynomial_roots(std::span<const cplx>(coeffs), opts);
}

}  // namespace caloric
