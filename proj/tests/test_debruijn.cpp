#include <cstdio>
#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "caloric/debruijn.hpp"

using namespace caloric;

TEST(Phi, IsEven) {
  for (double x : {0.1, 0.25, 0.4}) EXPECT_NEAR(phi(x) / phi(-x), 1.0, 1e-10) << x;
}

TEST(Phi, SuperExponentialDecay) {
  EXPECT_LT(phi(2.0), 1e-80);
  // about e^-9365: zero in double, still positive in float128
  EXPECT_GT(phi_q(2.0), 0);
  EXPECT_LT(phi_q(2.0), qreal("1e-4000"));
}

TEST(Phi, TruncationsAgree) {
  PhiConfig a, b;
  a.n_terms = 20;
  b.n_terms = 40;
  EXPECT_NEAR(phi(0.0, a), phi(0.0, b), 1e-14);
  EXPECT_THROW(phi(0.0, PhiConfig{0, 1e-30}), std::invalid_argument);
}

TEST(HEval, EvenInZ) {
  EXPECT_NEAR(std::abs(h_eval(0.0, 1.5).value - h_eval(0.0, -1.5).value), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h_eval(0.3, cplx(2.0, 0.5)).value - h_eval(0.3, cplx(-2.0, -0.5)).value), 0.0, 1e-12);
}

TEST(HEval, MatchesXiAtTheOrigin) {
  // H(0, 0) = xi(1/2) / 8 with xi(1/2) = 0.497120778188314...
  EXPECT_NEAR(h_eval(0.0, 0.0).value.real(), 0.4971207781883141 / 8, 1e-15);
}

TEST(HEval, BackwardHeatResidual) {
  const auto Hh = h_hat();
  // H(-t, z) solves the forward equation, so H itself the backward one
  EXPECT_LE(heat_residual_fd(Hh.F, -0.1, 5.0), 1e-6);
  EXPECT_LE(heat_residual_fd(Hh.F, -0.4, cplx(3.0, 0.5)), 1e-6);
  EXPECT_LE(heat_residual(Hh, -0.1, 5.0), 1e-15);
}

TEST(HEval, PanelDoublingIsStable) {
  HQuadConfig fine;
  fine.panels = 240;
  for (double z : {0.0, 5.0, 28.0, 60.0})
    EXPECT_LT(std::abs(h_eval(0.0, z).value - h_eval(0.0, z, fine).value), 1e-12) << z;
}

TEST(HZeros, FirstZeroAndCounts) {
  const auto z = h_zeros(0.0, 20.0, 40.0);
  ASSERT_EQ(z.size(), 1u);
  // twice the first zeta-zero ordinate 14.134725141734693
  EXPECT_NEAR(z[0], 2 * 14.134725141734693, 1e-8);
  EXPECT_TRUE(h_zeros(0.0, 0.0, 10.0).empty());
  EXPECT_EQ(h_zeros(0.0, 0.0, 60.0).size(), 3u);
  const auto neg = h_zeros(0.0, -40.0, -20.0);
  ASSERT_EQ(neg.size(), 1u);
  EXPECT_NEAR(neg[0], -z[0], 1e-10);
  EXPECT_THROW(h_zeros(-0.1, 0.0, 10.0), std::invalid_argument);
}

TEST(HZeros, ZerosMoveLeftForPositiveT) {
  // backward heat flow pulls real zeros together
  const auto z0 = h_zeros(0.0, 20.0, 40.0), z1 = h_zeros(0.2, 20.0, 40.0);
  ASSERT_EQ(z1.size(), 1u);
  EXPECT_LT(z1[0], z0[0]);
}

TEST(Rt5, WindowOneWithoutMirrorsIsEmptySum) {
  const auto r = rt5_check(0.2, 1, 1e-3, {}, false);
  EXPECT_EQ(r.rows[0].velocity_sum, 0.0);
  EXPECT_GT(r.rows[0].mismatch, 0.0);
}

TEST(Rt5, PairSymmetry) {
  const auto z = h_first_zeros(0.2, 3);
  const auto v = h_zero_velocities(z, 0.2, 1e-3);
  std::vector<double> mz;
  for (double x : z) mz.push_back(-x);
  // zeros of an even function come in pairs; the mirrored pair moves oppositely
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double lo = mz[k] - 0.3, hi = mz[k] + 0.3;
    const auto a = h_zeros(0.2 + 1e-3, lo, hi), b = h_zeros(0.2 - 1e-3, lo, hi);
    ASSERT_EQ(a.size(), 1u);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_NEAR((a[0] - b[0]) / 2e-3, -v[k], 1e-6);
  }
}

TEST(Rt5, MismatchShrinksWithWindow) {
  double prev = INFINITY;
  for (int w : {5, 10, 20}) {
    const auto r = rt5_check(0.2, w);
    EXPECT_LT(r.relative_mismatch, prev) << w;
    std::printf("window %d: relative mismatch %.3e\n", w, r.relative_mismatch);
    prev = r.relative_mismatch;
  }
}
