#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "caloric/caloric_poly.hpp"
#include "caloric/special.hpp"

using namespace caloric;

namespace {

std::vector<long> as_longs(const std::vector<BigInt>& v) {
  std::vector<long> out;
  for (const auto& c : v) out.push_back(c.convert_to<long>());
  return out;
}

cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

}  // namespace

TEST(CaloricPolyBuild, LowDegreesMatchKnownList) {
  EXPECT_EQ(as_longs(build(0).coeffs), (std::vector<long>{1}));
  EXPECT_EQ(as_longs(build(1).coeffs), (std::vector<long>{1}));
  EXPECT_EQ(as_longs(build(2).coeffs), (std::vector<long>{1, 2}));
  EXPECT_EQ(as_longs(build(3).coeffs), (std::vector<long>{1, 6}));
  EXPECT_EQ(as_longs(build(4).coeffs), (std::vector<long>{1, 12, 12}));
  EXPECT_EQ(as_longs(build(5).coeffs), (std::vector<long>{1, 20, 60}));
}

TEST(CaloricPolyBuild, CoefficientsArePositiveIntegersWithUnitLead) {
  for (int m = 0; m <= 120; ++m) {
    const auto p = build(m);
    ASSERT_EQ(p.coeffs.size(), static_cast<std::size_t>(m / 2 + 1));
    EXPECT_EQ(p.coeffs.front(), 1);
    for (const auto& c : p.coeffs) EXPECT_GT(c, 0);
  }
}

TEST(CaloricPolyBuild, ExactBeyondSixtyFourBits) {
  // c_{22,0..} includes 22!/(11! 0!) = 22!/11!, which does not fit in 64 bits when multiplied out.
  const auto p = build(40);
  BigInt fact40 = 1, fact20 = 1;
  for (int i = 1; i <= 40; ++i) fact40 *= i;
  for (int i = 1; i <= 20; ++i) fact20 *= i;
  EXPECT_EQ(p.coeffs.back(), fact40 / fact20);
  EXPECT_THROW(build(-1), std::invalid_argument);
}

TEST(CaloricPolyEval, InitialConditionAndSmallValues) {
  EXPECT_NEAR(std::abs(eval(build(3), 0.0, 2.0) - 8.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval(build(2), 1.0, 2.0) - 6.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval(build(0), 0.4, 1.7) - 1.0), 0.0, 0.0);
  for (int m = 0; m <= 12; ++m)
    EXPECT_NEAR(std::abs(eval(build(m), 0.0, cplx(0.3, 1.1)) - std::pow(cplx(0.3, 1.1), m)), 0.0, 1e-12);
}

TEST(CaloricPolyEval, ParabolicScalingAtFixedPoint) {
  const cplx t = 0.3, z = 1.1;
  const auto p3 = build(3);
  EXPECT_NEAR(std::abs(eval(p3, 4.0 * t, 2.0 * z) - 8.0 * eval(p3, t, z)), 0.0, 1e-12);
}

TEST(CaloricPolyEval, HermiteRouteIsBranchIndependentAndMatchesHorner) {
  const cplx t(0.4, -0.2), z(1.1, 0.5);
  for (int m : {5, 17, 40, 61, 80}) {
    const cplx a = eval_hermite_route(m, t, z, true);
    const cplx b = eval_hermite_route(m, t, z, false);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(a)) << m;
    if (m <= hermite_route_threshold) {
      const cplx h = eval(build(m), t, z);
      EXPECT_LE(std::abs(a - h), 1e-9 * std::abs(h)) << m;
    }
  }
  // Above the threshold eval() takes the Hermite route; compare with the recurrence
  // P_{n+1} = z P_n + 2 n t P_{n-1}.
  cplx p0 = 1.0, p1 = z;
  for (int n = 1; n < 80; ++n) {
    const cplx p2 = z * p1 + 2.0 * n * t * p0;
    p0 = p1;
    p1 = p2;
  }
  const cplx direct = eval(build(80), t, z);
  EXPECT_LE(std::abs(direct - p1), 1e-9 * std::abs(p1));
}

TEST(CaloricPolyEval, OverflowIsSignaled) {
  EXPECT_THROW(eval(build(400), 1e200, 1e200), caloric::overflow_error);
}

TEST(CaloricPolyProperty, ParabolicHomogeneity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = static_cast<int>(rng() % 31);
    const cplx lambda = random_point(rng, 1.5), t = random_point(rng, 1.0), z = random_point(rng, 1.5);
    const auto p = build(m);
    const cplx lhs = eval(p, lambda * lambda * t, lambda * z);
    const cplx rhs = std::pow(lambda, m) * eval(p, t, z);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs) + 1e-300) << "m=" << m;
  }
}

TEST(CaloricPolyDerivative, LadderExamples) {
  const auto d3 = dz(build(3));
  EXPECT_EQ(d3.factor, 3);
  EXPECT_EQ(as_longs(d3.coeffs), (std::vector<long>{3, 6}));  // 3 (z^2 + 2t)
  const auto d1 = dz(build(1));
  EXPECT_EQ(as_longs(d1.coeffs), (std::vector<long>{1}));
  const auto d5 = dz(build(5));
  EXPECT_EQ(as_longs(d5.coeffs), (std::vector<long>{5, 60, 60}));  // 5 (z^4 + 12 t z^2 + 12 t^2)
  EXPECT_THROW(dz(build(0)), std::domain_error);
}

TEST(CaloricPolyDerivative, LadderExactUpTo200) {
  for (int m = 1; m <= 200; ++m) ASSERT_TRUE(derivative_ladder_holds(m)) << m;
}

TEST(CaloricPolyDerivative, TimeDerivativeEqualsSecondSpaceDerivative) {
  // d_t P_m = d_z^2 P_m = m (m-1) P_{m-2}
  const cplx t(0.3, 0.2), z(-0.7, 0.4);
  for (int m = 2; m <= 20; ++m) {
    const cplx dt = eval_dt(build(m), t, z);
    const cplx dzz = static_cast<double>(m * (m - 1)) * eval(build(m - 2), t, z);
    EXPECT_LE(std::abs(dt - dzz), 1e-11 * (1.0 + std::abs(dzz))) << m;
  }
}

TEST(Hermite, ValuesAndParity) {
  EXPECT_NEAR(std::abs(hermite_value(2, 1.0) - 2.0), 0.0, 1e-14);
  EXPECT_EQ(hermite_value(0, cplx(3.0, 1.0)), cplx(1.0));
  EXPECT_NEAR(std::abs(hermite_value(3, 0.0)), 0.0, 1e-15);
  const auto c = hermite_coefficients(4);  // 16x^4 - 48x^2 + 12
  EXPECT_EQ(as_longs(c), (std::vector<long>{12, 0, -48, 0, 16}));
}

TEST(Hermite, BridgeToCaloricPolynomials) {
  for (int m = 0; m <= 30; ++m) {
    const auto p = build(m);
    double max_h = 0.0, max_err = 0.0;
    for (int i = 0; i <= 600; ++i) {
      const double x = -3.0 + 6.0 * i / 600.0;
      const cplx h = hermite_value(m, x);
      max_h = std::max(max_h, std::abs(h));
      max_err = std::max(max_err, std::abs(eval(p, -1.0, 2.0 * x) - h));
    }
    EXPECT_LE(max_err, 1e-8 * max_h) << m;
  }
}

TEST(RhoSpectrum, SmallDegrees) {
  const auto s2 = rho_spectrum(2);
  ASSERT_EQ(s2.values.size(), 1u);
  EXPECT_NEAR(s2.values[0], 2.0, 1e-12);
  const auto s3 = rho_spectrum(3);
  ASSERT_EQ(s3.values.size(), 1u);
  EXPECT_NEAR(s3.values[0], 6.0, 1e-12);
  EXPECT_TRUE(s3.odd);
  // quadratic formula on w^2 + 12 w + 12 = 0 (w = z^2 / t): rho = 6 -+ 2 sqrt(6)
  const auto s4 = rho_spectrum(4);
  ASSERT_EQ(s4.values.size(), 2u);
  EXPECT_NEAR(s4.values[0], 6.0 - 2.0 * std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(s4.values[1], 6.0 + 2.0 * std::sqrt(6.0), 1e-11);
  EXPECT_THROW(rho_spectrum(1), std::invalid_argument);
}

TEST(RhoSpectrum, FactorizationReproducesPolynomial) {
  const cplx t(0.6, -0.3), z(0.9, 0.2);
  for (int m : {6, 11, 24, 37}) {
    const auto s = rho_spectrum(m);
    cplx prod = (m % 2 == 1) ? z : cplx(1.0);
    for (double r : s.values) prod *= z * z + r * t;
    const cplx direct = eval(build(m), t, z);
    EXPECT_LE(std::abs(prod - direct), 1e-9 * std::abs(direct)) << m;
  }
}

TEST(Interlacing, HoldsForEveryDegreeUpTo50) {
  EXPECT_TRUE(interlacing_check(3));
  EXPECT_TRUE(interlacing_check(4));
  for (int m = 3; m <= 50; ++m) EXPECT_TRUE(interlacing_check(m)) << m;
  EXPECT_THROW(interlacing_check(2), std::invalid_argument);
}

TEST(Zeros, SimpleForNonzeroTime) {
  for (int m = 1; m <= 30; ++m) {
    const auto p = build(m);
    std::vector<cplx> coeffs(m + 1, 0.0);
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) coeffs[m - 2 * j] = to_double(p.coeffs[j]);
    const auto roots = polynomial_roots(coeffs);
    for (std::size_t a = 0; a < roots.size(); ++a)
      for (std::size_t b = a + 1; b < roots.size(); ++b)
        EXPECT_GT(std::abs(roots[a] - roots[b]), 1e-6) << "m=" << m;
  }
}

TEST(CrudeBound, KappaAndDominance) {
  EXPECT_EQ(crude_bound_kappa(4), 2);
  EXPECT_EQ(crude_bound_kappa(6), 2);
  EXPECT_DOUBLE_EQ(crude_bound(0, 0.3, 0.2), 1.0);
  // P_6(1,1) = 1 + 30 + 180 + 120 = 331; bound = 720 * 4 / (2! 2!) = 720
  EXPECT_NEAR(std::abs(eval(build(6), 1.0, 1.0)), 331.0, 1e-12);
  EXPECT_NEAR(crude_bound(6, 1.0, 1.0), 720.0, 1e-9);
  // kappa_m indexes the largest coefficient
  for (int m = 0; m <= 60; ++m) {
    const auto p = build(m);
    const auto largest = *std::max_element(p.coeffs.begin(), p.coeffs.end());
    EXPECT_EQ(p.coeffs[crude_bound_kappa(m)], largest) << m;
  }
}

TEST(CrudeBound, DominatesOnRandomSample) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = static_cast<int>(rng() % 41);
    const cplx t = random_point(rng, 2.0), z = random_point(rng, 2.0);
    EXPECT_GE(crude_bound(m, t, z) * (1 + 1e-12), std::abs(eval(build(m), t, z))) << m;
  }
}

TEST(GeneratingFunction, PartialSums) {
  EXPECT_EQ(generating_partial_sum(0.0, 0.7, 1.2, 10), cplx(1.0));
  EXPECT_NEAR(std::abs(generating_partial_sum(1.0, 0.0, 1.0, 40) - std::exp(1.0)), 0.0, 1e-12);
  const cplx lambda(0.7, 0.3), t(0.4, -0.2), z(1.1, 0.5);
  const cplx exact = std::exp(lambda * lambda * t + lambda * z);
  EXPECT_LT(std::abs(generating_partial_sum(lambda, t, z, 60) - exact), 1e-10);
}

TEST(HeatKernelMoments, GaussHermiteReproducesPolynomials) {
  // P_m(t, z) = (1/sqrt(pi)) int exp(-u^2) (z + 2 u sqrt(t))^m du
  const auto rule = special::gauss_hermite(12);
  const double t = 0.3;
  for (int m = 0; m <= 10; ++m) {
    for (cplx z : {cplx(0.0), cplx(0.8), cplx(-1.3, 0.4)}) {
      cplx sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += static_cast<double>(rule.weights[i]) *
               std::pow(z + 2.0 * static_cast<double>(rule.nodes[i]) * std::sqrt(t), m);
      sum /= std::sqrt(pi);
      EXPECT_LT(std::abs(sum - eval(build(m), t, z)), 1e-10) << m;
    }
  }
}
