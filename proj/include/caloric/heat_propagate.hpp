#pragma once

// Solutions of the heat equation d_t F = d_z^2 F built from initial data.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "caloric/caloric_poly.hpp"
#include "caloric/entire_series.hpp"
#include "caloric/special.hpp"
#include "caloric/types.hpp"

namespace caloric {

enum class Verdict { admissible, rejected, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::admissible: return "admissible";
    case Verdict::rejected: return "rejected";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct AdmissibilityReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> even_sequence;  // j |c_{2j}|^{1/j}, j = 1..N/2 (zeros skipped, NaN marks skip)
  std::vector<double> odd_sequence;   // j |c_{2j+1}|^{1/j}
  double even_ratio = 0.0;            // s(J) / s(J/2) over the tail
  double odd_ratio = 0.0;
};

enum class Backing { polynomial, series, quadrature, closed_form };

inline const char* to_string(Backing b) {
  switch (b) {
    case Backing::polynomial: return "polynomial";
    case Backing::series: return "series";
    case Backing::quadrature: return "quadrature";
    case Backing::closed_form: return "closed_form";
  }
  return "?";
}

using Field = std::function<cplx(cplx, cplx)>;

/// Handle for a caloric function with its first derivatives.
struct HeatSolution {
  Backing backing = Backing::closed_form;
  std::string label;
  Field F, dz, dzz, dt;
  std::optional<AdmissibilityReport> admissibility;

  cplx operator()(cplx t, cplx z) const { return F(t, z); }
};

// ---------------------------------------------------------------------------
// Admissibility (exact order in [0, 2^-])

namespace detail {

// Tail verdict for one parity: ratio of the last value to the value at half
// the index, and whether the tail half is monotone nonincreasing.
inline std::optional<Verdict> parity_verdict(const std::vector<double>& s, double& ratio) {
  std::vector<std::pair<int, double>> pts;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (std::isfinite(s[j])) pts.emplace_back(static_cast<int>(j) + 1, s[j]);
  if (pts.size() < 8) return std::nullopt;  // parity absent or too sparse to judge
  const int J = pts.back().first;
  std::size_t half = 0;
  while (half + 1 < pts.size() && pts[half].first < J / 2) ++half;
  ratio = pts.back().second / pts[half].second;
  bool monotone = true;
  for (std::size_t k = half + 1; k < pts.size(); ++k)
    if (pts[k].second > pts[k - 1].second * (1 + 1e-12)) monotone = false;
  if (!monotone || ratio >= 0.98) return Verdict::rejected;
  if (ratio < 0.9) return Verdict::admissible;
  return Verdict::inconclusive;
}

}  // namespace detail

/// Decay of j|c_{2j}|^{1/j} and j|c_{2j+1}|^{1/j} toward 0 over n <= N.
inline AdmissibilityReport admissibility_check(const CoefficientSeries& f, int N) {
  if (N < 50) throw std::invalid_argument("admissibility_check: N must be >= 50");
  if (N > f.n_max && !f.finite) throw std::invalid_argument("admissibility_check: N exceeds n_max");
  AdmissibilityReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 1; 2 * j + 1 <= N; ++j) {
    const xreal ce = std::abs(f.coeff(2 * j)), co = std::abs(f.coeff(2 * j + 1));
    r.even_sequence.push_back(ce > 0 ? static_cast<double>(j * std::pow(ce, 1.0L / j)) : nan);
    r.odd_sequence.push_back(co > 0 ? static_cast<double>(j * std::pow(co, 1.0L / j)) : nan);
  }
  const auto ve = detail::parity_verdict(r.even_sequence, r.even_ratio);
  const auto vo = detail::parity_verdict(r.odd_sequence, r.odd_ratio);
  if (!ve && !vo) {
    // polynomial data (or nothing to judge): entire of order 0
    r.verdict = Verdict::admissible;
    return r;
  }
  if ((ve && *ve == Verdict::rejected) || (vo && *vo == Verdict::rejected))
    r.verdict = Verdict::rejected;
  else if ((ve && *ve == Verdict::inconclusive) || (vo && *vo == Verdict::inconclusive))
    r.verdict = Verdict::inconclusive;
  else
    r.verdict = Verdict::admissible;
  return r;
}

// ---------------------------------------------------------------------------
// Series propagation: F = sum_j f^{(2j)}(z) t^j / j!

struct SeriesValue {
  cplx value = 0.0;
  double tail_estimate = 0.0;
  int terms = 0;
};

namespace detail {

// f^{(n)}(z) = n! a_n(z) for n <= n_top.
inline std::vector<xcplx> derivatives_at(const std::vector<xcplx>& a, bool finite, cplx z, int n_top) {
  std::vector<xcplx> d(n_top + 1);
  xreal fact = 1;
  for (int n = 0; n <= n_top; ++n) {
    if (n > 0) fact *= n;
    d[n] = fact * shift_coefficient(a, finite, z, n).value;
  }
  return d;
}

// sum_{j <= J} d[2j + offset] t^j / j!, or its t-derivative.
inline xcplx t_partial_sum(const std::vector<xcplx>& d, int offset, cplx t, int J, bool t_derivative) {
  const xcplx tt = widen(t);
  xcplx sum = 0, w = 1;  // t^j / j!  (or t^(j-1)/(j-1)! for the derivative)
  for (int j = 0; j <= J; ++j) {
    const int idx = 2 * j + offset;
    if (idx >= static_cast<int>(d.size())) break;
    if (t_derivative) {
      if (j == 0) continue;
      if (j > 1) w *= tt / static_cast<xreal>(j - 1);
    } else if (j > 0) {
      w *= tt / static_cast<xreal>(j);
    }
    sum += d[idx] * w;
  }
  return sum;
}

inline int series_depth(const CoefficientSeries& f, int J, int offset) {
  int top = 2 * J + offset;
  if (!f.finite) top = std::min(top, f.n_max - 12);  // keep a block for the shift tail estimate
  return std::max(top, 0);
}

// Doubling driver shared by propagate_series and the series-backed handle.
inline SeriesValue doubled_t_sum(const CoefficientSeries& f, cplx t, cplx z, int J, double tol, int offset,
                                 bool t_derivative) {
  if (J < 0) throw std::invalid_argument("propagate_series: J must be nonnegative");
  const int top = series_depth(f, J, offset);
  const std::vector<xcplx> d = derivatives_at(f.coefficients(), f.finite, z, top);
  SeriesValue out;
  if (t == 0.0 && !t_derivative) {
    out.value = narrow(d[std::min<int>(offset, top)]);
    if (offset > top) out.value = 0.0;
    return out;
  }
  const int cap = std::min(J, (top - offset) / 2);
  int j = std::min(4, cap);
  xcplx prev = t_partial_sum(d, offset, t, j, t_derivative);
  while (true) {
    if (j >= cap) {
      out.value = narrow(prev);
      out.terms = j;
      // last term as a rough tail size when the cap is reached
      if (j > 0) {
        const xcplx last = prev - t_partial_sum(d, offset, t, j - 1, t_derivative);
        out.tail_estimate = static_cast<double>(std::abs(last));
      }
      if (out.tail_estimate > 0.1 * tol * (1 + std::abs(out.value)))
        throw truncation_error("propagate_series: cap J = " + std::to_string(J) + " reached with tail " +
                               std::to_string(out.tail_estimate));
      return out;
    }
    const int next = std::min(2 * j, cap);
    const xcplx cur = t_partial_sum(d, offset, t, next, t_derivative);
    const double diff = static_cast<double>(std::abs(cur - prev));
    if (diff < 0.1 * tol * (1 + static_cast<double>(std::abs(cur)))) {
      out.value = narrow(cur);
      out.tail_estimate = diff;
      out.terms = next;
      return out;
    }
    prev = cur;
    j = next;
  }
}

}  // namespace detail

/// F(t, z) = sum_{j <= J} f^{(2j)}(z) t^j / j!, doubling the term count until
/// successive sums differ by less than 0.1 tol.
inline SeriesValue propagate_series(const CoefficientSeries& f, cplx t, cplx z, int J, double tol = 1e-12) {
  return detail::doubled_t_sum(f, t, z, J, tol, 0, false);
}

/// Series-backed handle; derivatives come from the same t-series of f', f''
/// and the termwise t-derivative.
inline HeatSolution series_solution(const CoefficientSeries& source, int J, double tol = 1e-12) {
  const CoefficientSeries f = materialize(source);
  HeatSolution h;
  h.backing = Backing::series;
  h.label = "series(" + f.label + ")";
  h.F = [f, J, tol](cplx t, cplx z) { return detail::doubled_t_sum(f, t, z, J, tol, 0, false).value; };
  h.dz = [f, J, tol](cplx t, cplx z) { return detail::doubled_t_sum(f, t, z, J, tol, 1, false).value; };
  h.dzz = [f, J, tol](cplx t, cplx z) { return detail::doubled_t_sum(f, t, z, J, tol, 2, false).value; };
  h.dt = [f, J, tol](cplx t, cplx z) { return detail::doubled_t_sum(f, t, z, J, tol, 0, true).value; };
  return h;
}

// ---------------------------------------------------------------------------
// Heat-kernel quadrature: F = pi^{-1/2} int e^{-u^2} f(z + 2u sqrt t) du

struct KernelValue {
  cplx value = 0.0;
  double change = 0.0;  // |Q_{2n} - Q_n|
  int nodes = 0;
};

namespace detail {

inline cplx kernel_rule(const std::function<cplx(cplx)>& f, cplx t, cplx z, int nodes, bool t_derivative) {
  static thread_local std::map<int, special::QuadratureRule<xreal>> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) it = cache.emplace(nodes, special::gauss_hermite(nodes)).first;
  const auto& rule = it->second;
  const cplx s = std::sqrt(t);
  xcplx sum = 0;
  for (int i = 0; i < nodes; ++i) {
    const double u = static_cast<double>(rule.nodes[i]);
    cplx v = f(z + 2.0 * u * s);
    if (t_derivative) v *= u / s;
    sum += rule.weights[i] * widen(v);
  }
  return narrow(sum) / std::sqrt(pi);
}

inline KernelValue doubled_kernel(const std::function<cplx(cplx)>& f, cplx t, cplx z, int nodes, double tol,
                                  bool t_derivative = false) {
  if (nodes < 1) throw std::invalid_argument("propagate_kernel: nodes must be >= 1");
  KernelValue out;
  const cplx a = kernel_rule(f, t, z, nodes, t_derivative);
  const cplx b = kernel_rule(f, t, z, 2 * nodes, t_derivative);
  out.value = b;
  out.change = std::abs(b - a);
  out.nodes = 2 * nodes;
  if (out.change > tol * (1 + std::abs(b)))
    throw convergence_error("propagate_kernel: node doubling changed the value by " + std::to_string(out.change));
  return out;
}

}  // namespace detail

/// Gauss-Hermite quadrature of the heat-kernel integral with `nodes` and
/// 2*nodes points; throws convergence_error if the two disagree beyond tol.
inline KernelValue propagate_kernel(const CoefficientSeries& f, cplx t, cplx z, int nodes = 40, double tol = 1e-10) {
  if (t == 0.0) return {f(z), 0.0, 0};
  return detail::doubled_kernel([&f](cplx w) { return f(w); }, t, z, nodes, tol);
}

inline HeatSolution kernel_solution(const CoefficientSeries& source, int nodes = 40, double tol = 1e-10) {
  const CoefficientSeries f = materialize(source);
  const CoefficientSeries f1 = derivative(f), f2 = derivative(f1);
  HeatSolution h;
  h.backing = Backing::quadrature;
  h.label = "kernel(" + f.label + ")";
  h.F = [f, nodes, tol](cplx t, cplx z) { return propagate_kernel(f, t, z, nodes, tol).value; };
  h.dz = [f1, nodes, tol](cplx t, cplx z) { return propagate_kernel(f1, t, z, nodes, tol).value; };
  h.dzz = [f2, nodes, tol](cplx t, cplx z) { return propagate_kernel(f2, t, z, nodes, tol).value; };
  h.dt = [f1, f2, nodes, tol](cplx t, cplx z) {
    if (t == 0.0) return f2(z);
    return detail::doubled_kernel([&f1](cplx w) { return f1(w); }, t, z, nodes, tol, true).value;
  };
  return h;
}

// ---------------------------------------------------------------------------
// Polynomial backing: F = sum_m A_m P_m

inline HeatSolution polynomial_solution(std::vector<cplx> A) {
  std::vector<CaloricPolynomial> P;
  for (std::size_t m = 0; m < A.size(); ++m) P.push_back(build(static_cast<int>(m)));
  auto tables = std::make_shared<const std::vector<CaloricPolynomial>>(std::move(P));
  auto coeffs = std::make_shared<const std::vector<cplx>>(std::move(A));
  HeatSolution h;
  h.backing = Backing::polynomial;
  h.label = "polynomial";
  // d_z P_m = m P_{m-1}, d_z^2 P_m = m (m-1) P_{m-2}
  h.F = [tables, coeffs](cplx t, cplx z) {
    cplx s = 0.0;
    for (std::size_t m = 0; m < coeffs->size(); ++m)
      if ((*coeffs)[m] != 0.0) s += (*coeffs)[m] * eval((*tables)[m], t, z);
    return s;
  };
  h.dz = [tables, coeffs](cplx t, cplx z) {
    cplx s = 0.0;
    for (std::size_t m = 1; m < coeffs->size(); ++m)
      if ((*coeffs)[m] != 0.0) s += (*coeffs)[m] * static_cast<double>(m) * eval((*tables)[m - 1], t, z);
    return s;
  };
  h.dzz = [tables, coeffs](cplx t, cplx z) {
    cplx s = 0.0;
    for (std::size_t m = 2; m < coeffs->size(); ++m)
      if ((*coeffs)[m] != 0.0) s += (*coeffs)[m] * static_cast<double>(m * (m - 1)) * eval((*tables)[m - 2], t, z);
    return s;
  };
  h.dt = [tables, coeffs](cplx t, cplx z) {
    cplx s = 0.0;
    for (std::size_t m = 2; m < coeffs->size(); ++m)
      if ((*coeffs)[m] != 0.0) s += (*coeffs)[m] * eval_dt((*tables)[m], t, z);
    return s;
  };
  return h;
}

inline HeatSolution caloric_polynomial_solution(int m) {
  std::vector<cplx> A(m + 1, 0.0);
  A[m] = 1.0;
  HeatSolution h = polynomial_solution(std::move(A));
  h.label = "P_" + std::to_string(m);
  return h;
}

/// Coefficients of prod (1 - z / a_k), ascending.
inline std::vector<cplx> coefficients_from_roots(const std::vector<cplx>& a) {
  std::vector<cplx> c{1.0};
  for (cplx ak : a) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= c[k] / ak;
    }
    c = std::move(next);
  }
  return c;
}

/// F(t, z) = sum_k A_k P_k(t, z) with f(z) = prod (1 - z / a_k).
inline HeatSolution propagate_from_roots(const std::vector<cplx>& a) {
  if (a.empty()) throw std::invalid_argument("propagate_from_roots: empty root list");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) throw std::invalid_argument("propagate_from_roots: zero root");
    if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag()))
      throw std::invalid_argument("propagate_from_roots: non-finite root");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a[i] - a[j]) <= 1e-14 * (std::abs(a[i]) + std::abs(a[j])))
        throw std::invalid_argument("propagate_from_roots: repeated root");
  }
  HeatSolution h = polynomial_solution(coefficients_from_roots(a));
  h.label = "from_roots";
  return h;
}

// ---------------------------------------------------------------------------
// Closed forms

/// E_lambda = exp(lambda^2 t + lambda z).
inline HeatSolution exp_solution(cplx lambda) {
  HeatSolution h;
  h.label = "E_lambda";
  const auto E = [lambda](cplx t, cplx z) { return std::exp(lambda * lambda * t + lambda * z); };
  h.F = E;
  h.dz = [E, lambda](cplx t, cplx z) { return lambda * E(t, z); };
  h.dzz = [E, lambda](cplx t, cplx z) { return lambda * lambda * E(t, z); };
  h.dt = h.dzz;
  return h;
}

namespace detail {

inline cplx gauss_denominator(cplx a, cplx t) {
  const cplx s = 1.0 - 4.0 * a * t;
  if (std::abs(s) <= 1e-10) throw singular_time_error("gaussian_solution: t is at the singularity 1/(4a)");
  return s;
}

}  // namespace detail

/// (1 - 4at)^{-1/2} exp(a z^2 / (1 - 4at)), principal square root.
inline cplx gaussian_solution(cplx a, cplx t, cplx z) {
  const cplx s = detail::gauss_denominator(a, t);
  return std::exp(a * z * z / s) / std::sqrt(s);
}

inline HeatSolution gaussian(cplx a) {
  HeatSolution h;
  h.label = "gaussian";
  h.F = [a](cplx t, cplx z) { return gaussian_solution(a, t, z); };
  h.dz = [a](cplx t, cplx z) {
    const cplx s = detail::gauss_denominator(a, t);
    return gaussian_solution(a, t, z) * 2.0 * a * z / s;
  };
  h.dzz = [a](cplx t, cplx z) {
    const cplx s = detail::gauss_denominator(a, t);
    const cplx g = 2.0 * a * z / s;
    return gaussian_solution(a, t, z) * (g * g + 2.0 * a / s);
  };
  h.dt = [a](cplx t, cplx z) {
    const cplx s = detail::gauss_denominator(a, t);
    return gaussian_solution(a, t, z) * (2.0 * a / s + 4.0 * a * a * z * z / (s * s));
  };
  return h;
}

/// (G(ia) + G(-ia)) / 2 with G the gaussian solution: initial data cos(a z^2).
inline cplx cos_sq_solution(cplx a, cplx t, cplx z) {
  const cplx i(0.0, 1.0);
  return 0.5 * (gaussian_solution(i * a, t, z) + gaussian_solution(-i * a, t, z));
}

inline HeatSolution cos_sq(cplx a) {
  const cplx i(0.0, 1.0);
  const HeatSolution p = gaussian(i * a), m = gaussian(-i * a);
  HeatSolution h;
  h.label = "cos_sq";
  h.F = [p, m](cplx t, cplx z) { return 0.5 * (p.F(t, z) + m.F(t, z)); };
  h.dz = [p, m](cplx t, cplx z) { return 0.5 * (p.dz(t, z) + m.dz(t, z)); };
  h.dzz = [p, m](cplx t, cplx z) { return 0.5 * (p.dzz(t, z) + m.dzz(t, z)); };
  h.dt = [p, m](cplx t, cplx z) { return 0.5 * (p.dt(t, z) + m.dt(t, z)); };
  return h;
}

/// A zero of cos_sq_solution(a, t, .) from
///   z^2 = (1 + 16 a^2 t^2) [pi/(2a) + (Ln((1 - 4iat)/(1 + 4iat)) + 2 pi i branch) / (4ia)],
/// principal root of z^2. Odd branches satisfy F_+ = +F_- instead of F_+ = -F_-
/// (the other sheet of the square roots) and are reported as errors.
inline cplx cos_sq_zero_locus(cplx a, cplx t, int branch) {
  const cplx i(0.0, 1.0);
  (void)detail::gauss_denominator(i * a, t);
  (void)detail::gauss_denominator(-i * a, t);
  const cplx ln = std::log((1.0 - 4.0 * i * a * t) / (1.0 + 4.0 * i * a * t)) + 2.0 * pi * i * static_cast<double>(branch);
  const cplx z2 = (1.0 + 16.0 * a * a * t * t) * (pi / (2.0 * a) + ln / (4.0 * i * a));
  const cplx z = std::sqrt(z2);
  const cplx Fp = 0.5 * gaussian_solution(i * a, t, z), Fm = 0.5 * gaussian_solution(-i * a, t, z);
  const double scale = std::abs(Fp) + std::abs(Fm);
  if (!(std::abs(Fp + Fm) <= 1e-8 * std::max(scale, 1.0)))
    throw convergence_error("cos_sq_zero_locus: branch " + std::to_string(branch) +
                            " gives z^2 on the wrong sheet (F(t,z) != 0)");
  return z;
}

// Example 3: F(t, z; alpha) built from the even/odd Hermite-equation solutions.

struct HermiteSeries {
  xcplx ue = 0, uo = 0, due = 0, duo = 0;
};

/// u_e, u_o (and derivatives) of u'' - 2x u' + 2 alpha u = 0 at x, K terms each.
inline HermiteSeries hermite_equation_series(cplx alpha, cplx x, int K, double tol = 1e-15) {
  if (K < 1) throw std::invalid_argument("hermite_alpha_solution: K must be >= 1");
  const xcplx al = widen(alpha), xx = widen(x), x2 = xx * xx;
  HermiteSeries r;
  // a_{n+2} = a_n 2(n - alpha) / ((n+1)(n+2))
  xcplx ae = 1, ao = 1;      // a_{2k}, a_{2k+1}
  xcplx pe = 1, po = xx, pq = xx;  // x^{2k}, x^{2k+1}, x^{2k-1}
  xcplx last = 0;
  for (int k = 0; k < K; ++k) {
    const int ne = 2 * k, no = 2 * k + 1;
    r.ue += ae * pe;
    r.uo += ao * po;
    if (k > 0) {
      r.due += static_cast<xreal>(ne) * ae * pq;
      pq *= x2;
    }
    r.duo += static_cast<xreal>(no) * ao * pe;
    last = ae * pe + ao * po;
    ae *= 2.0L * (static_cast<xreal>(ne) - al) / static_cast<xreal>((ne + 1) * (ne + 2));
    ao *= 2.0L * (static_cast<xreal>(no) - al) / static_cast<xreal>((no + 1) * (no + 2));
    pe *= x2;
    po *= x2;
  }
  const xreal size = std::abs(r.ue) + std::abs(r.uo) + 1;
  if (std::abs(last) > tol * size && std::abs(ae * pe) + std::abs(ao * po) > tol * size)
    throw truncation_error("hermite_alpha_solution: series tail above tolerance, raise K");
  return r;
}

/// sqrt(pi) (2i)^alpha t^{alpha/2} [u_e(x)/Gamma((1-alpha)/2) + 2 u_o(x)/Gamma(-alpha/2)],
/// x = i z / (2 sqrt t), principal branches.
inline cplx hermite_alpha_solution(cplx alpha, cplx t, cplx z, int K = 200) {
  if (t == 0.0) throw singular_time_error("hermite_alpha_solution: t = 0 is an essential singularity");
  const cplx i(0.0, 1.0);
  const cplx st = std::sqrt(t);
  const cplx x = i * z / (2.0 * st);
  const HermiteSeries u = hermite_equation_series(alpha, x, K);
  const cplx C = std::sqrt(pi) * std::exp(alpha * std::log(2.0 * i)) * std::exp(0.5 * alpha * std::log(t));
  const cplx A = special::rgamma(0.5 * (1.0 - alpha)), B = 2.0 * special::rgamma(-0.5 * alpha);
  return C * (A * narrow(u.ue) + B * narrow(u.uo));
}

inline HeatSolution hermite_alpha(cplx alpha, int K = 200) {
  const cplx i(0.0, 1.0);
  struct Parts {
    cplx C, x, w, dw;  // F = C w(x), w = A u_e + B u_o
  };
  const auto parts = [alpha, K, i](cplx t, cplx z) {
    if (t == 0.0) throw singular_time_error("hermite_alpha: t = 0 is an essential singularity");
    const cplx st = std::sqrt(t);
    const cplx x = i * z / (2.0 * st);
    const HermiteSeries u = hermite_equation_series(alpha, x, K);
    const cplx C = std::sqrt(pi) * std::exp(alpha * std::log(2.0 * i)) * std::exp(0.5 * alpha * std::log(t));
    const cplx A = special::rgamma(0.5 * (1.0 - alpha)), B = 2.0 * special::rgamma(-0.5 * alpha);
    return Parts{C, x, A * narrow(u.ue) + B * narrow(u.uo), A * narrow(u.due) + B * narrow(u.duo)};
  };
  HeatSolution h;
  h.label = "hermite_alpha";
  h.F = [parts](cplx t, cplx z) {
    const Parts p = parts(t, z);
    return p.C * p.w;
  };
  h.dz = [parts, i](cplx t, cplx z) {
    const Parts p = parts(t, z);
    return p.C * p.dw * i / (2.0 * std::sqrt(t));
  };
  // w'' = 2x w' - 2 alpha w and dx/dz = i / (2 sqrt t)
  h.dzz = [parts, alpha](cplx t, cplx z) {
    const Parts p = parts(t, z);
    return p.C * (2.0 * p.x * p.dw - 2.0 * alpha * p.w) * (-1.0 / (4.0 * t));
  };
  // dC/dt = alpha C / (2t), dx/dt = -x / (2t)
  h.dt = [parts, alpha](cplx t, cplx z) {
    const Parts p = parts(t, z);
    return p.C * (alpha * p.w - p.x * p.dw) / (2.0 * t);
  };
  return h;
}

/// (i / sqrt t) e^{-z^2/4t} (sqrt(pi)/2 + int_0^{-iz/(2 sqrt t)} e^{-s^2} ds).
inline cplx erf_form_solution(cplx t, cplx z) {
  if (t == 0.0) throw singular_time_error("erf_form_solution: t = 0");
  const cplx i(0.0, 1.0);
  const cplx st = std::sqrt(t);
  return i / st * std::exp(-z * z / (4.0 * t)) * (0.5 * std::sqrt(pi) + special::gauss_integral(-i * z / (2.0 * st)));
}

// ---------------------------------------------------------------------------
// Transformations

/// G(t, z) = F(t, z + 2 lambda t) exp(lambda^2 t + lambda z).
inline HeatSolution tilt(const HeatSolution& F, cplx lambda) {
  HeatSolution g;
  g.backing = F.backing;
  g.label = "tilt(" + F.label + ")";
  const auto E = [lambda](cplx t, cplx z) { return std::exp(lambda * lambda * t + lambda * z); };
  g.F = [F, lambda, E](cplx t, cplx z) { return F.F(t, z + 2.0 * lambda * t) * E(t, z); };
  g.dz = [F, lambda, E](cplx t, cplx z) {
    const cplx w = z + 2.0 * lambda * t;
    return (F.dz(t, w) + lambda * F.F(t, w)) * E(t, z);
  };
  g.dzz = [F, lambda, E](cplx t, cplx z) {
    const cplx w = z + 2.0 * lambda * t;
    return (F.dzz(t, w) + 2.0 * lambda * F.dz(t, w) + lambda * lambda * F.F(t, w)) * E(t, z);
  };
  g.dt = [F, lambda, E](cplx t, cplx z) {
    const cplx w = z + 2.0 * lambda * t;
    return (F.dt(t, w) + 2.0 * lambda * F.dz(t, w) + lambda * lambda * F.F(t, w)) * E(t, z);
  };
  return g;
}

/// z-even and z-odd parts.
inline std::pair<HeatSolution, HeatSolution> even_odd_split(const HeatSolution& F) {
  const auto make = [&F](double sign, const char* tag) {
    HeatSolution h;
    h.backing = F.backing;
    h.label = F.label + tag;
    h.F = [F, sign](cplx t, cplx z) { return 0.5 * (F.F(t, z) + sign * F.F(t, -z)); };
    h.dz = [F, sign](cplx t, cplx z) { return 0.5 * (F.dz(t, z) - sign * F.dz(t, -z)); };
    h.dzz = [F, sign](cplx t, cplx z) { return 0.5 * (F.dzz(t, z) + sign * F.dzz(t, -z)); };
    h.dt = [F, sign](cplx t, cplx z) { return 0.5 * (F.dt(t, z) + sign * F.dt(t, -z)); };
    return h;
  };
  return {make(1.0, "_e"), make(-1.0, "_o")};
}

/// sum_{k <= K} phi^{(k)}(t) z^{2k}/(2k)! + psi^{(k)}(t) z^{2k+1}/(2k+1)!.
inline SeriesValue phi_psi_expand(const CoefficientSeries& phi, const CoefficientSeries& psi, cplx t, cplx z, int K,
                                  double tol = 1e-12) {
  if (K < 0) throw std::invalid_argument("phi_psi_expand: K must be nonnegative");
  const auto dphi = detail::derivatives_at(phi.coefficients(phi.n_max), phi.finite, t, std::min(K, phi.finite ? K : phi.n_max - 12));
  const auto dpsi = detail::derivatives_at(psi.coefficients(psi.n_max), psi.finite, t, std::min(K, psi.finite ? K : psi.n_max - 12));
  const xcplx zz = widen(z);
  xcplx sum = 0, pe = 1, po = zz;  // z^{2k}/(2k)!, z^{2k+1}/(2k+1)!
  xreal last = 0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      pe *= zz * zz / static_cast<xreal>((2 * k - 1) * (2 * k));
      po *= zz * zz / static_cast<xreal>((2 * k) * (2 * k + 1));
    }
    const xcplx a = (k < static_cast<int>(dphi.size()) ? dphi[k] : xcplx(0)) * pe;
    const xcplx b = (k < static_cast<int>(dpsi.size()) ? dpsi[k] : xcplx(0)) * po;
    sum += a + b;
    last = std::abs(a + b);
  }
  SeriesValue out{narrow(sum), static_cast<double>(last), K};
  const bool exact = phi.finite && psi.finite && K >= phi.n_max && K >= psi.n_max;
  if (exact) out.tail_estimate = 0.0;
  if (!exact && out.tail_estimate > tol * (1 + std::abs(out.value)))
    throw truncation_error("phi_psi_expand: last term above tolerance, raise K");
  return out;
}

// ---------------------------------------------------------------------------
// Residual checks

/// First and second derivative of an analytic function of one variable from
/// n samples on a circle of radius r (symmetric difference stencil; error
/// decays like (r/R)^n with R the distance to the nearest singularity).
inline std::pair<cplx, cplx> circle_derivatives(const std::function<cplx(cplx)>& g, cplx x, double r, int n = 16) {
  cplx d1 = 0.0, d2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx w = std::polar(1.0, 2.0 * pi * k / n);
    const cplx v = g(x + r * w);
    d1 += v / w;
    d2 += v / (w * w);
  }
  return {d1 / (n * r), 2.0 * d2 / (n * r * r)};
}

/// |d_t F - d_z^2 F| from function values only (circle stencils of radius h).
inline double heat_residual_fd(const Field& F, cplx t, cplx z, double h = 0.02) {
  const cplx ft = circle_derivatives([&](cplx s) { return F(s, z); }, t, h).first;
  const cplx fzz = circle_derivatives([&](cplx w) { return F(t, w); }, z, h).second;
  return std::abs(ft - fzz);
}

/// |dt - dzz| from the handle's own evaluators.
inline double heat_residual(const HeatSolution& F, cplx t, cplx z) { return std::abs(F.dt(t, z) - F.dzz(t, z)); }

}  // namespace caloric
