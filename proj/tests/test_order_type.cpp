#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "caloric/order_type.hpp"

using namespace caloric;

TEST(EstimateOrder, ExponentialHasOrderOne) {
  const auto e = estimate_order(series::exp_rule(1.0, 500), {200, 500});
  EXPECT_NEAR(e.rho_hat, 1.0, 0.02);
  EXPECT_TRUE(e.stabilized);
  // the literal limsup is kept as a diagnostic; it approaches 1 only like 1/ln n
  EXPECT_GT(e.literal_limsup, 1.0);
  EXPECT_FALSE(e.diagnostic.empty());
}

TEST(EstimateOrder, PolynomialHasOrderZero) {
  const auto e = estimate_order(series::list_rule({1.0, -2.0, 0.5}), {200, 500});
  EXPECT_EQ(e.rho_hat, 0.0);
  EXPECT_TRUE(std::isnan(e.tau_hat));
  EXPECT_THROW(estimate_order(series::list_rule({0.0}), {200, 500}), numerical_error);
}

TEST(EstimateOrder, GaussianHasOrderTwo) {
  const auto e = estimate_order(series::gauss_rule(cplx(0.3, 0.4), 500), {200, 500});
  EXPECT_NEAR(e.rho_hat, 2.0, 0.05);
  EXPECT_NEAR(e.tau_hat, 0.5, 0.025);
}

TEST(EstimateOrder, GammaPowerFamily) {
  for (double rho : {0.5, 1.0, 4.0 / 3.0, 1.5, 3.0}) {
    const auto e = estimate_order(series::gamma_power_rule(1.0 / rho, 500), {200, 500});
    EXPECT_NEAR(e.rho_hat, rho, 0.02 * rho) << rho;
  }
}

TEST(EstimateOrder, SharpGivesIdenticalEstimate) {
  const auto s = series::sin_rule(cplx(1.5, -0.7), 500);
  const auto a = estimate_order(s, {200, 500}), b = estimate_order(sharp(s), {200, 500});
  EXPECT_EQ(a.rho_hat, b.rho_hat);
  EXPECT_EQ(a.tau_hat, b.tau_hat);
}

TEST(EstimateType, Examples) {
  EXPECT_NEAR(estimate_type(series::sin_rule(2.0, 500), 1.0, {200, 500}), 2.0, 0.1);
  EXPECT_NEAR(estimate_type(series::gauss_rule(0.5, 500), 2.0, {200, 500}), 0.5, 0.025);
  EXPECT_NEAR(estimate_type(series::exp_rule(3.0, 500), 1.0, {200, 500}), 3.0, 0.15);
}

TEST(ExactOrderClass, MinimalExactMaximal) {
  EXPECT_EQ(estimate_order(series::exp_rule(2.0, 500)).exact_order_class, ExactOrderClass::exact);
  EXPECT_EQ(estimate_order(series::exp_rule(1e-4, 500)).exact_order_class, ExactOrderClass::minus);
  // a_n = (ln n)^n / n!: order 1 with type growing like ln n
  CoefficientSeries maximal{[](int n) -> xcplx {
                              if (n < 3) return 1;
                              const xreal ln = std::log(static_cast<xreal>(n));
                              return std::exp(n * std::log(ln) * 6 - std::lgamma(n + 1.0L));
                            },
                            500, 0.0, false, "maximal"};
  EXPECT_EQ(estimate_order(maximal).exact_order_class, ExactOrderClass::plus);
}

TEST(ThetaSubseq, SineAtGenericPointAndLattice) {
  const auto s = series::sin_rule(1.0, 260);
  EXPECT_NEAR(theta_subseq(s, 1.0, Parity::even), 1.0, 0.05);
  EXPECT_EQ(theta_subseq(s, pi, Parity::even), 0.0);
  EXPECT_EQ(theta_subseq(s, 0.0, Parity::even), 0.0);
  EXPECT_NEAR(theta_subseq(s, pi, Parity::odd), 1.0, 0.05);
}

TEST(ThetaSubseq, ExponentialEverywhereOne) {
  const auto s = series::exp_rule(1.0, 260);
  for (cplx z : {cplx(0.0), cplx(2.0, -1.0), cplx(-3.0, 3.0)}) {
    EXPECT_NEAR(theta_subseq(s, z, Parity::even), 1.0, 0.05);
    EXPECT_NEAR(theta_subseq(s, z, Parity::odd), 1.0, 0.05);
  }
}

TEST(ThetaSubseq, BoundedByE) {
  const auto s = series::gamma_power_rule(0.5, 600);  // order 2, theta = e^{1/2}
  for (cplx z : {cplx(0.3), cplx(-1.0, 1.0)}) {
    const auto smp = theta_sample(s.coefficients(), z, 100);
    EXPECT_LE(std::max(smp.theta0, smp.theta1), std::exp(1.0) + 1e-9);
    EXPECT_GT(smp.theta0, 1.0);
  }
}

TEST(Theorem1, ExponentialMatchesEverywhere) {
  const auto r = theorem1_sample(series::exp_rule(1.0, 500), square_grid(-2, 2, 11), 100);
  EXPECT_EQ(r.fraction_theta0, 1.0);
  EXPECT_EQ(r.fraction_theta1, 1.0);
}

TEST(Theorem1, CosineOddOutliersOnTheLattice) {
  const auto r = theorem1_sample(series::cos_rule(1.0, 500), square_grid(-4, 4, 21), 100);
  EXPECT_FALSE(r.outliers1.empty());
  for (const auto& o : r.outliers1) {
    const double k = std::round(o.z.real() / pi);
    EXPECT_LT(std::abs(o.z - cplx(k * pi, 0.0)), 0.1) << o.z;
  }
  EXPECT_TRUE(r.outliers0.empty());
}

TEST(CaloricTOrder, Values) {
  EXPECT_EQ(caloric_t_order(1.0), 1.0);
  EXPECT_EQ(caloric_t_order(0.0), 0.0);
  EXPECT_NEAR(caloric_t_order(4.0 / 3.0), 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(caloric_t_order(2.0)));
  EXPECT_THROW(caloric_t_order(2.5), std::domain_error);
  double prev = -1;
  for (double r = 0; r < 1.99; r += 0.01) {
    EXPECT_GT(caloric_t_order(r), prev);
    prev = caloric_t_order(r);
  }
}

TEST(CaloricTType, Values) {
  EXPECT_NEAR(caloric_t_type(1.0, 1.7), 1.7 * 1.7, 1e-14);
  EXPECT_EQ(caloric_t_type(1.0, 0.0), 0.0);
  EXPECT_NEAR(caloric_t_type(1.0, 3.0), 9.0, 1e-13);
  for (double rho : {0.5, 1.0, 1.5})
    for (double tau = 0.1; tau < 5; tau += 0.1) EXPECT_GT(caloric_t_type(rho, tau + 0.1), caloric_t_type(rho, tau));
}

TEST(TSeries, ExponentialAtOrigin) {
  const auto b = t_series_coeffs(series::exp_rule(1.0, 520), 0.0, Parity::even, 250);
  // F(t, 0) = e^t, so b_j = 1/j!
  for (int j = 0; j <= 10; ++j) {
    const double expected = 1.0 / std::tgamma(j + 1.0);
    EXPECT_NEAR(static_cast<double>(std::abs(b.coeff(j))) / expected, 1.0, 1e-12);
  }
  EXPECT_NEAR(estimate_order(b, {100, 250}).rho_hat, 1.0, 0.05);
}

TEST(TSeries, SquareGivesCaloricPolynomialAtOrigin) {
  const auto b = t_series_coeffs(series::monomial_rule(2), 0.0, Parity::even, 4);
  EXPECT_EQ(b.coeff(0), xcplx(0));
  EXPECT_EQ(b.coeff(1), xcplx(2));
  EXPECT_EQ(b.coeff(2), xcplx(0));
}

TEST(TSeries, SineEvenPartVanishesOnLattice) {
  const auto b = t_series_coeffs(series::sin_rule(1.0, 200), pi, Parity::even, 60);
  for (int j = 0; j <= 60; ++j) {
    const double scale = std::tgamma(2 * j + 1.0) / std::tgamma(j + 1.0);
    EXPECT_LT(static_cast<double>(std::abs(b.coeff(j))), 1e-15 * scale) << j;
  }
}

TEST(TSeries, TransferLawClosure) {
  // c_n = (n!)^{-1/rho} has order rho; its t-series must have order rho / (2 - rho)
  for (double rho : {1.0, 4.0 / 3.0, 1.5}) {
    const auto f = series::gamma_power_rule(1.0 / rho, 620);
    const auto b = t_series_coeffs(f, 0.0, Parity::even, 300);
    EXPECT_NEAR(estimate_order(b, {120, 300}).rho_hat, caloric_t_order(rho), 0.05) << rho;
  }
}

TEST(TSeries, ExponentialTType) {
  const double lambda = 1.7;
  const auto b = t_series_coeffs(series::exp_rule(lambda, 620), 0.0, Parity::even, 300);
  const auto e = estimate_order(b, {120, 300});
  EXPECT_NEAR(e.tau_hat / (lambda * lambda), 1.0, 0.05);
}
