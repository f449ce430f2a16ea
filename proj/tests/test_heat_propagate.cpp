#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "caloric/heat_propagate.hpp"

using namespace caloric;

namespace {

const cplx I(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(PropagateSeries, MonomialGivesCaloricPolynomial) {
  const auto f = series::monomial_rule(5);
  const auto P5 = build(5);
  for (cplx t : {cplx(0.3), cplx(-0.2, 0.7)})
    for (cplx z : {cplx(0.8), cplx(1.1, -0.4)})
      EXPECT_LT(rel(propagate_series(f, t, z, 4).value, eval(P5, t, z)), 1e-14);
}

TEST(PropagateSeries, ExponentialGivesGeneratingFunction) {
  const auto v = propagate_series(series::exp_rule(1.0), 0.3, 1.0, 40);
  EXPECT_NEAR(std::abs(v.value - std::exp(1.3)), 0.0, 1e-10);
}

TEST(PropagateSeries, ZeroTimeIsInitialData) {
  const auto f = series::sin_rule(1.0);
  EXPECT_NEAR(std::abs(propagate_series(f, 0.0, cplx(0.4, 0.2), 10).value - std::sin(cplx(0.4, 0.2))), 0.0, 1e-15);
}

TEST(PropagateSeries, CapWithoutConvergenceSignalsTruncation) {
  EXPECT_THROW(propagate_series(series::exp_rule(3.0), 2.0, 0.0, 6), truncation_error);
}

TEST(PropagateFromRoots, Examples) {
  const auto two = propagate_from_roots({1.0, -1.0});
  const auto one = propagate_from_roots({1.0});
  const auto four = propagate_from_roots({1.0, I, -1.0, -I});
  const auto P4 = build(4);
  for (cplx t : {cplx(0.1), cplx(0.3, -0.2)})
    for (cplx z : {cplx(0.5), cplx(-0.7, 0.9)}) {
      EXPECT_LT(std::abs(two(t, z) - (1.0 - (z * z + 2.0 * t))), 1e-14);
      EXPECT_LT(std::abs(one(t, z) - (1.0 - z)), 1e-15);
      EXPECT_LT(std::abs(four(t, z) - (1.0 - eval(P4, t, z))), 1e-13);
    }
}

TEST(PropagateFromRoots, RejectsZeroAndRepeatedRoots) {
  EXPECT_THROW(propagate_from_roots({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(propagate_from_roots({2.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(propagate_from_roots({}), std::invalid_argument);
}

TEST(PropagateFromRoots, InitialDataReproducedExactly) {
  const std::vector<cplx> a{cplx(1, 0.5), cplx(-0.7, 0.2), cplx(0.3, -1.1)};
  const auto F = propagate_from_roots(a);
  for (cplx z : {cplx(0.2), cplx(1.5, -0.3)}) {
    cplx f = 1.0;
    for (cplx ak : a) f *= 1.0 - z / ak;
    EXPECT_LT(std::abs(F(0.0, z) - f), 1e-14);
  }
}

TEST(PropagateKernel, SecondMomentAndMass) {
  EXPECT_NEAR(std::abs(propagate_kernel(series::monomial_rule(2), 0.5, 0.0).value - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(propagate_kernel(series::list_rule({1.0}), cplx(0.4, 0.3), 1.7).value - 1.0), 0.0, 1e-14);
}

TEST(PropagateKernel, QuinticMatchesPolynomial) {
  const auto v = propagate_kernel(series::monomial_rule(5), 0.3, 0.8, 6);
  EXPECT_NEAR(std::abs(v.value - eval(build(5), 0.3, 0.8)), 0.0, 1e-10);
}

TEST(PropagateKernel, AgreesWithSeriesOnComplexTime) {
  const auto f = series::sin_rule(1.0);
  for (cplx t : {cplx(0.5), cplx(-0.6, 0.5), cplx(0.0, -1.0)}) {
    const cplx z(1.2, -0.7);
    const cplx a = propagate_kernel(f, t, z).value, b = propagate_series(f, t, z, 60).value;
    EXPECT_LT(std::abs(a - b), 1e-8);
    EXPECT_LT(std::abs(b - std::exp(-t) * std::sin(z)), 1e-12);
  }
}

TEST(Admissibility, Verdicts) {
  EXPECT_EQ(admissibility_check(series::gauss_rule(1.0), 400).verdict, Verdict::rejected);
  EXPECT_EQ(admissibility_check(series::exp_rule(1.0), 400).verdict, Verdict::admissible);
  // (n!)^{-3/2} has order 2/3
  EXPECT_EQ(admissibility_check(series::gamma_power_rule(1.5), 400).verdict, Verdict::admissible);
  EXPECT_EQ(admissibility_check(series::list_rule({1.0, 2.0, 3.0}), 60).verdict, Verdict::admissible);
  const auto r = admissibility_check(series::gauss_rule(0.5), 400);
  EXPECT_NEAR(r.even_sequence.back(), 0.5 * std::exp(1.0), 0.05);
}

TEST(Gaussian, ValuesAndSingularity) {
  const cplx a(0.4, 0.3), z(0.5, -1.0);
  EXPECT_LT(std::abs(gaussian_solution(a, 0.0, z) - std::exp(a * z * z)), 1e-15);
  EXPECT_NEAR(std::abs(gaussian_solution(1.0, 0.1, 0.0) - 1.0 / std::sqrt(0.6)), 0.0, 1e-15);
  EXPECT_THROW(gaussian_solution(1.0, 0.25, 0.3), singular_time_error);
}

TEST(Gaussian, HeatResidualByFiniteDifferences) {
  const auto F = [](cplx t, cplx z) { return gaussian_solution(1.0, t, z); };
  EXPECT_LE(heat_residual_fd(F, 0.1, 0.7), 1e-9);
}

TEST(CosSq, InitialDataResidualAndZero) {
  const cplx z(0.6, 0.2);
  EXPECT_LT(std::abs(cos_sq_solution(1.0, 0.0, z) - std::cos(z * z)), 1e-15);
  const auto F = [](cplx t, cplx z) { return cos_sq_solution(1.0, t, z); };
  EXPECT_LE(heat_residual_fd(F, 0.05, 0.3), 1e-9);
  EXPECT_NEAR(std::abs(cos_sq_zero_locus(1.0, 0.0, 0) - std::sqrt(pi / 2)), 0.0, 1e-14);
}

TEST(CosSq, ZeroLocusAtPositiveTime) {
  for (int branch : {0, 2, -2, 4}) {
    const cplx z = cos_sq_zero_locus(cplx(0.8, 0.1), cplx(0.07, 0.02), branch);
    EXPECT_LE(std::abs(cos_sq_solution(cplx(0.8, 0.1), cplx(0.07, 0.02), z)), 1e-8) << branch;
  }
  EXPECT_THROW(cos_sq_zero_locus(1.0, 0.05, 1), convergence_error);
}

TEST(HermiteAlpha, IntegerAlphaGivesCaloricPolynomials) {
  for (int m = 0; m <= 5; ++m) {
    const cplx v = hermite_alpha_solution(static_cast<double>(m), 0.7, 1.3);
    EXPECT_LT(rel(v, eval(build(m), 0.7, 1.3)), 1e-8) << m;
  }
}

TEST(HermiteAlpha, HeatResidual) {
  const cplx alpha(0.5, 0.5);
  const auto F = [alpha](cplx t, cplx z) { return hermite_alpha_solution(alpha, t, z); };
  EXPECT_LE(heat_residual_fd(F, 0.4, 0.6), 1e-8);
  const auto h = hermite_alpha(alpha);
  EXPECT_LE(heat_residual(h, 0.4, 0.6), 1e-12);
  EXPECT_THROW(hermite_alpha_solution(alpha, 0.0, 0.6), singular_time_error);
}

TEST(HermiteAlpha, AlphaMinusOneDiffersFromPrintedErfFormByKernelTerm) {
  // The two forms differ by i sqrt(pi/t) exp(-z^2/4t), itself a heat solution.
  for (cplx t : {cplx(0.7), cplx(0.3, 0.2)})
    for (cplx z : {cplx(1.3), cplx(0.4, -0.5)}) {
      const cplx a = hermite_alpha_solution(-1.0, t, z);
      const cplx b = erf_form_solution(t, z);
      const cplx kernel = I * std::sqrt(pi / t) * std::exp(-z * z / (4.0 * t));
      EXPECT_LT(std::abs(b - a - kernel), 1e-12);
    }
}

TEST(HermiteAlpha, ErfFormIsCaloric) {
  const auto F = [](cplx t, cplx z) { return erf_form_solution(t, z); };
  EXPECT_LE(heat_residual_fd(F, 0.7, 1.3), 1e-8);
}

TEST(Tilt, OfConstantIsExponential) {
  const auto G = tilt(polynomial_solution({1.0}), cplx(0.3, -0.4));
  const auto E = exp_solution(cplx(0.3, -0.4));
  EXPECT_LT(rel(G(0.2, 0.5), E(0.2, 0.5)), 1e-15);
}

TEST(Tilt, OfCaloricPolynomial) {
  const double lambda = 1.0;
  const auto G = tilt(caloric_polynomial_solution(3), lambda);
  const cplx t = 0.2, z = 0.5;
  const cplx expected = std::exp(lambda * lambda * t + lambda * z) * eval(build(3), t, z + 2.0 * lambda * t);
  EXPECT_LT(rel(G(t, z), expected), 1e-14);
  EXPECT_LE(heat_residual(G, t, z), 1e-12);
}

TEST(Tilt, GroupProperty) {
  const auto F = gaussian(cplx(0.2, 0.1));
  const cplx lambda(0.7, -0.3);
  const auto back = tilt(tilt(F, lambda), -lambda);
  for (cplx t : {cplx(0.1), cplx(-0.3, 0.4)})
    for (cplx z : {cplx(0.5), cplx(-0.2, 1.1)}) EXPECT_LT(rel(back(t, z), F(t, z)), 1e-12);
}

TEST(EvenOddSplit, Examples) {
  const cplx lambda(0.6, 0.2);
  const auto [Fe, Fo] = even_odd_split(exp_solution(lambda));
  const cplx t(0.3, 0.1), z(0.9, -0.4);
  EXPECT_LT(rel(Fe(t, z), std::exp(lambda * lambda * t) * std::cosh(lambda * z)), 1e-14);
  EXPECT_LT(rel(Fe(t, z) + Fo(t, z), std::exp(lambda * lambda * t + lambda * z)), 1e-14);
  EXPECT_EQ(Fe(t, -z), Fe(t, z));
  EXPECT_EQ(Fo(t, -z), -Fo(t, z));

  const auto [Pe, Po] = even_odd_split(caloric_polynomial_solution(3));
  EXPECT_LT(std::abs(Pe(t, z)), 1e-15);
  EXPECT_LT(rel(Po(t, z), eval(build(3), t, z)), 1e-15);

  const auto [Ge, Go] = even_odd_split(gaussian(0.3));
  EXPECT_LT(rel(Ge(t, z), gaussian_solution(0.3, t, z)), 1e-15);
  EXPECT_LT(std::abs(Go(t, z)), 1e-15);
  EXPECT_LE(heat_residual(Fo, t, z), 1e-12);
}

TEST(PhiPsi, Examples) {
  const auto one = series::list_rule({1.0}), zero = series::list_rule({0.0});
  EXPECT_NEAR(std::abs(phi_psi_expand(one, zero, 0.3, 0.7, 5).value - 1.0), 0.0, 1e-15);
  const auto two_t = series::list_rule({0.0, 2.0});
  const cplx t(0.2, 0.1), z(0.5, -0.3);
  EXPECT_LT(rel(phi_psi_expand(two_t, zero, t, z, 1).value, z * z + 2.0 * t), 1e-15);
  const auto e = series::exp_rule(1.0, 200);
  EXPECT_NEAR(std::abs(phi_psi_expand(e, e, 0.2, 0.4, 30).value - std::exp(0.6)), 0.0, 1e-10);
}

TEST(HeatResidual, EveryBackingOnRandomPoints) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<HeatSolution> handles{
      propagate_from_roots({cplx(1, 0.5), cplx(-0.7, 0.2), cplx(0.3, -1.1)}),
      series_solution(series::sin_rule(1.0, 200), 60),
      kernel_solution(series::exp_rule(cplx(0.5, 0.2), 200)),
      exp_solution(cplx(0.3, 0.8)),
      gaussian(0.2),
      hermite_alpha(cplx(0.5, 0.5)),
  };
  for (const auto& h : handles)
    for (int k = 0; k < 100; ++k) {
      const cplx t(0.5 * u(rng), 0.5 * u(rng)), z(2 * u(rng), 2 * u(rng));
      // principal-branch cut of sqrt(t) along t <= 0
      if (h.label == "hermite_alpha" && (t.real() < 0.1 || std::abs(t) < 0.2)) continue;
      const double r = heat_residual_fd(h.F, t, z);
      EXPECT_LE(r, 1e-7 * (1 + std::abs(h(t, z)))) << h.label << " t=" << t << " z=" << z;
      EXPECT_LE(std::abs(h.dt(t, z) - h.dzz(t, z)), 1e-7 * (1 + std::abs(h(t, z)))) << h.label;
    }
}
