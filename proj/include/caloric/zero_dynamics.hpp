#pragma once

// Zeros of caloric functions as functions of t: continuation of z_k(t) along
// complex t-paths, the interacting-particle ODE systems they satisfy, and a
// scanner for the ramification set {F = d_z F = 0}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "caloric/caloric_poly.hpp"
#include "caloric/heat_propagate.hpp"
#include "caloric/roots.hpp"
#include "caloric/types.hpp"

namespace caloric {

/// d_z F vanished where a velocity was needed (close to a ramification point).
class ramification_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

struct ODEPathConfig {
  std::vector<cplx> t_path{0.0, 1.0};  // polyline waypoints
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double min_separation = 1e-3;
  double max_step = 0.05;
  int samples_per_segment = 20;
  double escape_radius = 1e6;

  void validate() const {
    if (t_path.size() < 2) throw std::invalid_argument("ODEPathConfig: need at least two waypoints");
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("ODEPathConfig: tolerances must be positive");
    if (!(min_separation > 0)) throw std::invalid_argument("ODEPathConfig: min_separation must be positive");
    if (!(max_step > 0)) throw std::invalid_argument("ODEPathConfig: max_step must be positive");
    if (samples_per_segment < 1) throw std::invalid_argument("ODEPathConfig: samples_per_segment must be >= 1");
    if (!(escape_radius > 0)) throw std::invalid_argument("ODEPathConfig: escape_radius must be positive");
  }
};

enum class TrajectoryStatus { ok, collision, escaped, stalled };

inline const char* to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::ok: return "ok";
    case TrajectoryStatus::collision: return "collision";
    case TrajectoryStatus::escaped: return "escaped";
    case TrajectoryStatus::stalled: return "stalled";
  }
  return "?";
}

struct TrajectorySample {
  cplx t;
  cplx z;
  double residual = 0.0;  // |F(t, z)|, zero for pure ODE trajectories
};

struct ZeroTrajectory {
  int index = 0;
  std::vector<TrajectorySample> samples;
  TrajectoryStatus status = TrajectoryStatus::ok;
  std::optional<cplx> t_star;  // collision time, set with status collision
  std::optional<int> partner;  // the other trajectory in the collision
};

struct RamificationPoint {
  cplx t, z;
  double residual_F = 0.0, residual_dz = 0.0;
};

/// Axis-aligned rectangle in the complex plane.
struct Rect {
  cplx lo, hi;

  bool contains(cplx w, double margin = 0.0) const {
    return w.real() >= lo.real() - margin && w.real() <= hi.real() + margin && w.imag() >= lo.imag() - margin &&
           w.imag() <= hi.imag() + margin;
  }
  /// n x n grid of points (n = 1 gives the centre).
  std::vector<cplx> grid(int n) const {
    std::vector<cplx> g;
    if (n <= 1) return {0.5 * (lo + hi)};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g.emplace_back(lo.real() + (hi.real() - lo.real()) * i / (n - 1),
                       lo.imag() + (hi.imag() - lo.imag()) * j / (n - 1));
    return g;
  }
};

inline Rect square(double half) { return {cplx(-half, -half), cplx(half, half)}; }

/// -d_z^2 F / d_z F, the velocity of a simple zero.
inline cplx log_deriv_velocity(const HeatSolution& F, cplx t, cplx z) {
  const cplx d1 = F.dz(t, z), d2 = F.dzz(t, z);
  if (std::abs(d1) <= 1e-12 * (1.0 + std::abs(d2)))
    throw ramification_error("log_deriv_velocity: d_z F vanishes (near a ramification point)");
  return -d2 / d1;
}

/// z-coefficients (ascending) of sum_k A_k P_k(t, z) at fixed t.
inline std::vector<cplx> caloric_z_coefficients(const std::vector<cplx>& A, cplx t) {
  std::vector<cplx> c(A.size(), 0.0);
  for (std::size_t k = 0; k < A.size(); ++k) {
    if (A[k] == 0.0) continue;
    const CaloricPolynomial p = build(static_cast<int>(k));
    cplx tj = 1.0;
    for (std::size_t j = 0; j < p.coeffs.size(); ++j, tj *= t) c[k - 2 * j] += A[k] * to_double(p.coeffs[j]) * tj;
  }
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

namespace detail {

struct Segment {
  cplx start, dir;  // unit direction
  double length;
};

inline std::vector<Segment> segments(const ODEPathConfig& cfg) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cfg.t_path.size(); ++i) {
    const cplx d = cfg.t_path[i + 1] - cfg.t_path[i];
    if (std::abs(d) == 0.0) continue;
    out.push_back({cfg.t_path[i], d / std::abs(d), std::abs(d)});
  }
  if (out.empty()) throw std::invalid_argument("ODEPathConfig: path has zero length");
  return out;
}

// Smallest pairwise distance and the pair attaining it.
inline double min_separation(const std::vector<cplx>& z, int& a, int& b) {
  double best = std::numeric_limits<double>::infinity();
  a = b = -1;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < best) {
        best = std::abs(z[i] - z[j]);
        a = static_cast<int>(i);
        b = static_cast<int>(j);
      }
  return best;
}

// At a simple collision d^2 is analytic with a simple zero in t, so one
// Newton step on d^2 from the detection point locates it.
inline cplx extrapolate_collision(cplx t, cplx d, cplx d_velocity) {
  if (d_velocity == 0.0) return t;
  return t - d / (2.0 * d_velocity);
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace detail

/// Newton on F(t, .) from z. Returns nullopt unless the correction falls below
/// 1e-13 (1 + |z|) within the iteration budget.
inline std::optional<cplx> newton_zero(const HeatSolution& F, cplx t, cplx z, int max_iter = 30) {
  for (int it = 0; it < max_iter; ++it) {
    const cplx d = F.dz(t, z);
    if (d == 0.0) return std::nullopt;
    const cplx step = F.F(t, z) / d;
    if (!detail::finite(step)) return std::nullopt;
    z -= step;
    if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) return z;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Continuation: Euler predictor with the zero velocity, Newton corrector.

inline std::vector<ZeroTrajectory> track_roots(const HeatSolution& F, const std::vector<cplx>& initial,
                                               const ODEPathConfig& cfg) {
  cfg.validate();
  const auto segs = detail::segments(cfg);
  const int N = static_cast<int>(initial.size());
  std::vector<ZeroTrajectory> out(N);
  std::vector<cplx> z = initial;
  cplx t = segs.front().start;
  for (int k = 0; k < N; ++k) {
    out[k].index = k;
    const double res = std::abs(F.F(t, z[k]));
    if (res > 1e-8 * (1.0 + std::abs(F.dz(t, z[k])) * (1.0 + std::abs(z[k]))))
      throw std::invalid_argument("track_roots: initial point is not a zero of F");
    out[k].samples.push_back({t, z[k], res});
  }
  if (N == 0) return out;

  auto halt = [&](TrajectoryStatus s) {
    for (auto& tr : out)
      if (tr.status == TrajectoryStatus::ok) tr.status = s;
  };
  auto collide = [&](int a, int b, cplx t_star) {
    for (int k : {a, b}) {
      out[k].status = TrajectoryStatus::collision;
      out[k].t_star = t_star;
      out[k].partner = k == a ? b : a;
    }
    halt(TrajectoryStatus::stalled);  // the rest stop with the pair
  };

  double h = cfg.max_step;
  for (const auto& seg : segs) {
    const double ds = seg.length / cfg.samples_per_segment;
    for (int s = 1; s <= cfg.samples_per_segment; ++s) {
      double sigma = (s - 1) * ds;
      const double target = s * ds;
      while (sigma < target) {
        const double hs = std::min(h, target - sigma);
        const cplx t_new = seg.start + seg.dir * (sigma + hs);
        std::vector<cplx> v(N), z_new(N);
        try {
          for (int k = 0; k < N; ++k) v[k] = log_deriv_velocity(F, t, z[k]);
        } catch (const ramification_error&) {
          int a, b;
          detail::min_separation(z, a, b);
          if (a < 0) a = b = 0;
          collide(a, b, t);
          return out;
        }
        bool ok = true, easy = true;
        for (int k = 0; k < N && ok; ++k) {
          double gap = std::numeric_limits<double>::infinity();
          for (int j = 0; j < N; ++j)
            if (j != k) gap = std::min(gap, std::abs(z[k] - z[j]));
          const cplx pred = z[k] + seg.dir * hs * v[k];
          const auto corr = newton_zero(F, t_new, pred, 12);
          // A corrector that moves far relative to the neighbour gap may have
          // jumped to another branch.
          const double limit = std::min(0.1 * gap, 0.05 * (1.0 + std::abs(z[k])));
          if (!corr || std::abs(*corr - pred) > limit) {
            ok = false;
          } else {
            z_new[k] = *corr;
            if (std::abs(*corr - pred) > 0.01 * limit) easy = false;
          }
        }
        if (!ok) {
          h = hs / 2;
          if (h < 1e-14 * seg.length) {
            halt(TrajectoryStatus::stalled);
            return out;
          }
          continue;
        }
        sigma += hs;
        t = t_new;
        z = z_new;
        if (easy) h = std::min(cfg.max_step, 2 * hs);
        for (int k = 0; k < N; ++k)
          if (std::abs(z[k]) > cfg.escape_radius) {
            out[k].status = TrajectoryStatus::escaped;
            out[k].samples.push_back({t, z[k], std::abs(F.F(t, z[k]))});
            halt(TrajectoryStatus::stalled);
            return out;
          }
        int a, b;
        if (detail::min_separation(z, a, b) < cfg.min_separation) {
          cplx t_star = t;
          try {
            const cplx dv = log_deriv_velocity(F, t, z[a]) - log_deriv_velocity(F, t, z[b]);
            t_star = detail::extrapolate_collision(t, z[a] - z[b], dv);
          } catch (const ramification_error&) {
          }
          for (int k = 0; k < N; ++k) out[k].samples.push_back({t, z[k], std::abs(F.F(t, z[k]))});
          collide(a, b, t_star);
          return out;
        }
      }
      for (int k = 0; k < N; ++k) out[k].samples.push_back({t, z[k], std::abs(F.F(t, z[k]))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero-dynamics ODE systems

enum class VariantKind { genus0, genus1, even, odd, tilt };

struct Variant {
  VariantKind kind = VariantKind::genus0;
  cplx lambda = 0.0;  // exponential factor for genus1 and tilt

  static Variant genus0() { return {VariantKind::genus0, 0.0}; }
  static Variant genus1(cplx lambda = 0.0) { return {VariantKind::genus1, lambda}; }
  static Variant even() { return {VariantKind::even, 0.0}; }
  static Variant odd() { return {VariantKind::odd, 0.0}; }
  static Variant tilt(cplx lambda) { return {VariantKind::tilt, lambda}; }
};

inline const char* to_string(VariantKind k) {
  switch (k) {
    case VariantKind::genus0: return "genus0";
    case VariantKind::genus1: return "genus1";
    case VariantKind::even: return "even";
    case VariantKind::odd: return "odd";
    case VariantKind::tilt: return "tilt";
  }
  return "?";
}

/// dz/dt for every particle. For even/odd the state holds mu_k = z_k^2.
inline void zero_velocity(const Variant& var, const std::vector<cplx>& z, std::vector<cplx>& dz) {
  const std::size_t n = z.size();
  dz.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      s += 1.0 / (z[k] - z[j]);
      if (var.kind == VariantKind::genus1) s += 1.0 / z[j];
    }
    switch (var.kind) {
      case VariantKind::genus0: dz[k] = -2.0 * s; break;
      case VariantKind::genus1:
      case VariantKind::tilt: dz[k] = -2.0 * var.lambda - 2.0 * s; break;
      case VariantKind::even: dz[k] = -2.0 - 8.0 * z[k] * s; break;
      case VariantKind::odd: dz[k] = -6.0 - 8.0 * z[k] * s; break;
    }
  }
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DoPri {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr std::array<double, 7> e{71.0 / 57600,     0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                                           22.0 / 525, -1.0 / 40};
};

// Closest approach in the z-plane, including the collision of +-sqrt(mu)
// with each other (even) or with the fixed zero at the origin (odd).
struct Approach {
  double distance;
  int a, b;  // b < 0: mu_a meets the origin
};

inline Approach closest_approach(const Variant& var, const std::vector<cplx>& y) {
  if (var.kind != VariantKind::even && var.kind != VariantKind::odd) {
    int a, b;
    const double d = min_separation(y, a, b);
    return {d, a, b};
  }
  Approach best{std::numeric_limits<double>::infinity(), -1, -1};
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double r = std::sqrt(std::abs(y[k]));
    const double d = var.kind == VariantKind::even ? 2 * r : r;
    if (d < best.distance) best = {d, static_cast<int>(k), -1};
    for (std::size_t j = k + 1; j < y.size(); ++j) {
      // closest pair among +-sqrt(mu_k), +-sqrt(mu_j)
      const cplx zk = std::sqrt(y[k]), zj = std::sqrt(y[j]);
      const double dj = std::min(std::abs(zk - zj), std::abs(zk + zj));
      if (dj < best.distance) best = {dj, static_cast<int>(k), static_cast<int>(j)};
    }
  }
  return best;
}

}  // namespace detail

/// Adaptive Dormand-Prince integration of the chosen system along the
/// polyline t-path, parameterised by arclength on each segment. Samples land
/// exactly on samples_per_segment equispaced points per segment.
inline std::vector<ZeroTrajectory> ode_evolve(const std::vector<cplx>& initial, const ODEPathConfig& cfg,
                                              const Variant& var = Variant::genus0()) {
  cfg.validate();
  const auto segs = detail::segments(cfg);
  const std::size_t N = initial.size();
  std::vector<ZeroTrajectory> out(N);
  std::vector<cplx> y = initial;
  cplx t = segs.front().start;
  for (std::size_t k = 0; k < N; ++k) {
    out[k].index = static_cast<int>(k);
    out[k].samples.push_back({t, y[k], 0.0});
  }
  if (N == 0) return out;
  {
    const auto ap = detail::closest_approach(var, y);
    if (ap.distance <= cfg.min_separation)
      throw std::invalid_argument("ode_evolve: initial points closer than min_separation");
  }

  auto halt = [&](TrajectoryStatus s) {
    for (auto& tr : out)
      if (tr.status == TrajectoryStatus::ok) tr.status = s;
  };

  using DP = detail::DoPri;
  std::array<std::vector<cplx>, 7> K;
  std::vector<cplx> stage(N), y5(N);
  double h = std::min(cfg.max_step, 1e-3);
  for (const auto& seg : segs) {
    auto rhs = [&](const std::vector<cplx>& state, std::vector<cplx>& d) {
      zero_velocity(var, state, d);
      for (auto& v : d) v *= seg.dir;  // d/dsigma = dir * d/dt
    };
    const double ds = seg.length / cfg.samples_per_segment;
    for (int s = 1; s <= cfg.samples_per_segment; ++s) {
      double sigma = (s - 1) * ds;
      const double target = s * ds;
      while (sigma < target) {
        const double hs = std::min(h, target - sigma);
        rhs(y, K[0]);
        for (int i = 1; i < 7; ++i) {
          for (std::size_t k = 0; k < N; ++k) {
            cplx acc = y[k];
            for (int j = 0; j < i; ++j) acc += hs * DP::a[i][j] * K[j][k];
            stage[k] = acc;
          }
          if (i == 6) y5 = stage;
          rhs(stage, K[i]);
        }
        double err = 0.0;
        bool finite = true;
        for (std::size_t k = 0; k < N; ++k) {
          cplx e = 0.0;
          for (int i = 0; i < 7; ++i) e += DP::e[i] * K[i][k];
          e *= hs;
          if (!detail::finite(y5[k]) || !detail::finite(e)) finite = false;
          const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[k]), std::abs(y5[k]));
          err = std::max(err, std::abs(e) / sc);
        }
        if (!finite || err > 1.0) {
          h = hs * (finite ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.25);
          if (h < 1e-15 * seg.length) {
            halt(TrajectoryStatus::stalled);
            return out;
          }
          continue;
        }
        const std::vector<cplx> y_old = y;
        const cplx t_old = t;
        sigma += hs;
        t = seg.start + seg.dir * sigma;
        y = y5;
        const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
        h = std::min(cfg.max_step, std::max(hs, h) * grow);

        for (std::size_t k = 0; k < N; ++k)
          if (std::abs(y[k]) > cfg.escape_radius) {
            out[k].status = TrajectoryStatus::escaped;
            out[k].samples.push_back({t, y[k], 0.0});
            halt(TrajectoryStatus::stalled);
            return out;
          }
        // mu is regular through 0, so a step can carry +-sqrt(mu) straight
        // through the origin; test the chord of the step as well.
        if (var.kind == VariantKind::even || var.kind == VariantKind::odd) {
          const double r = var.kind == VariantKind::even ? 0.25 : 1.0;
          const double thr = r * cfg.min_separation * cfg.min_separation;
          for (std::size_t k = 0; k < N; ++k) {
            const cplx d = y[k] - y_old[k];
            const double u = d == 0.0 ? 0.0 : std::clamp(-std::real(std::conj(d) * y_old[k]) / std::norm(d), 0.0, 1.0);
            if (std::abs(y_old[k] + u * d) >= thr || std::abs(y[k]) < thr) continue;
            const bool use_old = std::abs(y_old[k]) < std::abs(y[k]);
            const std::vector<cplx>& base = use_old ? y_old : y;
            std::vector<cplx> v;
            zero_velocity(var, base, v);
            out[k].status = TrajectoryStatus::collision;
            out[k].t_star = (use_old ? t_old : t) - base[k] / v[k];
            for (std::size_t j = 0; j < N; ++j) out[j].samples.push_back({t, y[j], 0.0});
            halt(TrajectoryStatus::stalled);
            return out;
          }
        }
        const auto ap = detail::closest_approach(var, y);
        if (ap.distance < cfg.min_separation) {
          std::vector<cplx> v;
          zero_velocity(var, y, v);
          cplx t_star;
          if (ap.b < 0)
            t_star = t - y[ap.a] / v[ap.a];  // mu is linear near 0
          else if (var.kind == VariantKind::even || var.kind == VariantKind::odd)
            t_star = t - (y[ap.a] - y[ap.b]) / (v[ap.a] - v[ap.b]);  // mu_a - mu_b is linear
          else
            t_star = detail::extrapolate_collision(t, y[ap.a] - y[ap.b], v[ap.a] - v[ap.b]);
          for (std::size_t k = 0; k < N; ++k) out[k].samples.push_back({t, y[k], 0.0});
          for (int k : {ap.a, ap.b}) {
            if (k < 0) continue;
            out[k].status = TrajectoryStatus::collision;
            out[k].t_star = t_star;
            out[k].partner = k == ap.a ? ap.b : ap.a;
          }
          halt(TrajectoryStatus::stalled);
          return out;
        }
      }
      for (std::size_t k = 0; k < N; ++k) out[k].samples.push_back({t, y[k], 0.0});
    }
  }
  return out;
}

/// Collision time of the first colliding trajectory, if any.
inline std::optional<cplx> first_collision(const std::vector<ZeroTrajectory>& tr) {
  for (const auto& x : tr)
    if (x.status == TrajectoryStatus::collision) return x.t_star;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ODE against the zeros of the polynomial built from the same initial data

struct VerifyRow {
  cplx t;
  int k;
  cplx z_ode, z_tracked;
  double deviation;
};

struct VerifyReport {
  double max_deviation = 0.0;
  double endpoint_deviation = 0.0;  // tracked zeros vs a direct root solve at the path end
  std::vector<VerifyRow> rows;
};

inline VerifyReport closed_form_verify(const std::vector<cplx>& a, const ODEPathConfig& cfg) {
  const HeatSolution F = propagate_from_roots(a);
  const auto tracked = track_roots(F, a, cfg);
  const auto ode = ode_evolve(a, cfg, Variant::genus0());
  const double radius = cfg.min_separation / 2;
  const std::size_t n_samples = std::min(tracked.front().samples.size(), ode.front().samples.size());

  VerifyReport rep;
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::vector<cplx> zt;
    for (const auto& tr : tracked) zt.push_back(tr.samples[s].z);
    int i0, j0;
    if (detail::min_separation(zt, i0, j0) < 2 * radius)
      throw numerical_error("closed_form_verify: pairing ambiguity at t = " + std::to_string(ode[0].samples[s].t.real()));
    for (std::size_t k = 0; k < ode.size(); ++k) {
      const cplx zo = ode[k].samples[s].z;
      std::size_t best = 0;
      for (std::size_t j = 1; j < zt.size(); ++j)
        if (std::abs(zt[j] - zo) < std::abs(zt[best] - zo)) best = j;
      const double dev = std::abs(zt[best] - zo);
      rep.rows.push_back({ode[k].samples[s].t, static_cast<int>(k), zo, zt[best], dev});
      rep.max_deviation = std::max(rep.max_deviation, dev);
    }
  }
  // Independent endpoint check.
  const cplx t_end = tracked.front().samples[n_samples - 1].t;
  const auto roots = polynomial_roots(caloric_z_coefficients(coefficients_from_roots(a), t_end));
  for (const auto& tr : tracked) {
    double best = std::numeric_limits<double>::infinity();
    for (cplx r : roots) best = std::min(best, std::abs(r - tr.samples[n_samples - 1].z));
    rep.endpoint_deviation = std::max(rep.endpoint_deviation, best);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Ramification scan and zero-freeness

namespace detail {

// d_z g by a symmetric four-point stencil, O(h^4).
inline cplx dz4(const Field& g, cplx t, cplx z, double h = 1e-3) {
  const cplx ih(0.0, h);
  return (g(t, z + h) - g(t, z - h) - cplx(0, 1) * (g(t, z + ih) - g(t, z - ih))) / (4.0 * h);
}

}  // namespace detail

/// Newton on (F, d_z F) = 0 seeded on a grid over t_region x z_region.
inline std::vector<RamificationPoint> collision_scan(const HeatSolution& F, const Rect& t_region, const Rect& z_region,
                                                     int grid = 5, double dedup = 1e-6) {
  std::vector<RamificationPoint> found;
  const auto tg = t_region.grid(grid), zg = z_region.grid(grid);
  for (cplx t0 : tg)
    for (cplx z0 : zg) {
      cplx t = t0, z = z0;
      bool alive = true;
      // The set is often a degenerate root of the system (e.g. P_m at the
      // origin), where Newton is only linear; keep going until the step stalls.
      for (int it = 0; it < 400 && alive; ++it) {
        try {
          const cplx f = F.F(t, z), fz = F.dz(t, z);
          const cplx ft = F.dt(t, z), fzz = F.dzz(t, z);
          const cplx fzt = detail::dz4(F.dzz, t, z);  // d_t d_z F = d_z^3 F
          const cplx det = ft * fzz - fz * fzt;
          if (det == 0.0 || !detail::finite(det)) break;
          const cplx dt = (f * fzz - fz * fz) / det;
          const cplx dzv = (ft * fz - fzt * f) / det;
          if (!detail::finite(dt) || !detail::finite(dzv)) {
            alive = false;
            break;
          }
          t -= dt;
          z -= dzv;
          if (!t_region.contains(t, 1.0) || !z_region.contains(z, 1.0)) alive = false;
          if (std::abs(dt) + std::abs(dzv) <= 1e-15 * (1.0 + std::abs(t) + std::abs(z))) break;
        } catch (const numerical_error&) {
          alive = false;
        }
      }
      if (!alive || !t_region.contains(t) || !z_region.contains(z)) continue;
      double rf, rz;
      try {
        rf = std::abs(F.F(t, z));
        rz = std::abs(F.dz(t, z));
      } catch (const numerical_error&) {
        continue;
      }
      if (!(rf <= 1e-9 && rz <= 1e-9)) continue;
      bool dup = false;
      for (auto& p : found)
        if (std::abs(p.t - t) + std::abs(p.z - z) <= dedup) {
          dup = true;
          // keep the representative with the smaller residual
          if (rf + rz < p.residual_F + p.residual_dz) p = {t, z, rf, rz};
        }
      if (!dup) found.push_back({t, z, rf, rz});
    }
  return found;
}

/// True when no grid-seeded Newton run on F(t, .) converges to a zero inside
/// the region.
inline bool never_zero_check(const HeatSolution& F, const Rect& t_region, const Rect& z_region, int grid = 7) {
  const double margin = 0.5 * std::abs(z_region.hi - z_region.lo);
  for (cplx t : t_region.grid(grid))
    for (cplx z0 : z_region.grid(grid)) {
      cplx z = z0;
      try {
        for (int it = 0; it < 60; ++it) {
          const cplx f = F.F(t, z), d = F.dz(t, z);
          if (f == 0.0) return false;
          if (d == 0.0) break;
          const cplx step = f / d;
          if (!detail::finite(step)) break;
          z -= step;
          if (!z_region.contains(z, margin)) break;
          if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) {
            if (z_region.contains(z)) return false;
            break;
          }
        }
      } catch (const numerical_error&) {
        // singular t (e.g. the gaussian's pole) carries no zeros
      }
    }
  return true;
}

}  // namespace caloric
