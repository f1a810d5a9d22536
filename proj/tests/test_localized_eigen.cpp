// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "cbfed/constants.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/localized_eigen.hpp"
#include "test_util.hpp"

using namespace cbfed;
using namespace cbfed::testing;

namespace {

const TorusGrid g16(2, 16, 2.0 * kPi);

}  // namespace

TEST(Ak, Examples) {
  PhysicalParams p;
  p.alpha = 0.7;
  p.mu = 1.3;
  SpectralField c = constant_field(g16, {1, -2, 0});
  EXPECT_LT(norm_h(apply_ak(c, 0.0, DomainMask::strip_complement(g16, 0, 1.0), p) - 0.7 * c), 1e-14);
  SpectralField y = random_solenoidal(g16, 3, 2.0);
  SpectralField full = apply_ak(y, 5.0, DomainMask::full(g16), p);
  EXPECT_LT(norm_h(full - (1.3 * stokes_apply(y) + 5.7 * y)), 1e-12 * norm_h(full));
  auto mask = DomainMask::strip_complement(g16, 1, 2.0);
  for (int s = 0; s < 10; ++s) {
    SpectralField z = random_solenoidal(g16, 100 + s, 1.0);
    EXPECT_GE(inner_product(apply_ak(z, 20.0, mask, p), z), 0.7 * std::pow(norm_h(z), 2) * (1 - 1e-14));
  }
}

TEST(AkEigen, ZeroGainGivesAlpha) {
  PhysicalParams p;
  p.alpha = 0.6;
  auto e = smallest_eigenvalue_ak(0.0, DomainMask::strip_complement(g16, 0, 1.0), p, 1e-9);
  EXPECT_NEAR(e.nu, 0.6, 1e-12);
  EXPECT_LT(norm_grad(e.field), 1e-6);
  EXPECT_NEAR(norm_h(e.field), 1.0, 1e-12);
}

TEST(AkEigen, FullMaskShiftsByGain) {
  PhysicalParams p;
  auto e = smallest_eigenvalue_ak(7.0, DomainMask::full(g16), p, 1e-9);
  EXPECT_NEAR(e.nu, 8.0, 1e-10);
  EXPECT_LT(norm_grad(e.field), 1e-6);
}

TEST(AkEigen, ResidualAndMonotoneLadder) {
  PhysicalParams p;
  auto mask = DomainMask::strip_complement(g16, 0, 1.0);
  double prev = 0.0;
  for (double k : {5.0, 10.0, 20.0}) {
    auto e = smallest_eigenvalue_ak(k, mask, p, 1e-8);
    EXPECT_LT(e.residual, 1e-8);
    SpectralField r = apply_ak(e.field, k, mask, p) - e.nu * e.field;
    EXPECT_LT(norm_h(r), 1e-8);
    EXPECT_GE(e.nu, prev - 1e-8);
    EXPECT_LT(e.nu, 1.0 + k);
    prev = e.nu;
  }
}

TEST(LambdaStar, RejectsFullMaskAndShortLadder) {
  PhysicalParams p;
  EXPECT_THROW(lambda_star_estimate(DomainMask::full(g16), p, {10, 20, 40, 80}, 1e-8), ConfigError);
  EXPECT_THROW(lambda_star_estimate(DomainMask::strip_complement(g16, 0, 1.0), p, {10, 20, 40}, 1e-8),
               ConfigError);
}

TEST(LambdaStar, SmallerComplementRaisesEstimate) {
  PhysicalParams p;
  auto wide = lambda_star_estimate(DomainMask::strip_complement(g16, 0, 2.0), p, {10, 20, 40, 80}, 1e-7);
  auto thin = lambda_star_estimate(DomainMask::strip_complement(g16, 0, 1.0), p, {10, 20, 40, 80}, 1e-7);
  EXPECT_TRUE(wide.monotone);
  EXPECT_TRUE(thin.monotone);
  EXPECT_GT(thin.lambda_star, wide.lambda_star);
  EXPECT_GT(thin.largest_nu, wide.largest_nu);
  EXPECT_GE(thin.lambda_star, thin.largest_nu);
  EXPECT_LT(thin.complement_volume, wide.complement_volume);
  EXPECT_GT(thin.rfk_printed, wide.rfk_printed);
}

TEST(Bessel, SeriesAndZeros) {
  for (double x : {0.1, 1.0, 2.5, 5.0, 9.0}) {
    EXPECT_NEAR(bessel_j_series(0.0, x), std::cyl_bessel_j(0.0, x), 1e-13);
    EXPECT_NEAR(bessel_j_series(1.5, x), std::cyl_bessel_j(1.5, x), 1e-13);
  }
  EXPECT_NEAR(bessel_first_zero(0.0), 2.404825557695773, 1e-12);
  EXPECT_NEAR(bessel_first_zero(0.5), kPi, 1e-12);
  EXPECT_NEAR(bessel_first_zero(1.0), 3.831705970207512, 1e-12);
}

TEST(Rfk, Examples) {
  EXPECT_NEAR(rfk_bound(kPi, 2), 2.404825557695773, 1e-12);
  EXPECT_NEAR(rfk_bound(kPi / 2, 2), 2 * 2.404825557695773, 1e-12);
  EXPECT_NEAR(rfk_bound(4 * kPi / 3, 3), kPi, 1e-12);
  const double j = 2.404825557695773;
  EXPECT_NEAR(rfk_bound_scaled(kPi, 2, 2.0, 0.5), 2.0 * j * j + 0.5, 1e-11);
}

TEST(ProportionalDecay, Constants) {
  PhysicalParams p;
  p.r = 5.0;
  auto d = proportional_decay_constant(3.0, p, 0.5);
  EXPECT_NEAR(d.varrho_star, 0.25, 1e-15);
  EXPECT_EQ(d.varrho1_star, 0.0);
  EXPECT_EQ(d.varrho2_star, 0.0);
  EXPECT_NEAR(d.delta, 3.0 - 0.5 - 0.25, 1e-15);
  EXPECT_TRUE(d.positive);
  EXPECT_FALSE(proportional_decay_constant(0.6, p, 0.5).positive);
  p.gamma = -1.0;
  p.q = 2.0;
  auto dp = proportional_decay_constant(3.0, p, 0.5);
  EXPECT_GT(dp.varrho1_star, 0.0);
  EXPECT_GT(dp.varrho2_star, 0.0);
  EXPECT_NEAR(dp.delta, 3.0 - 0.5 - dp.varrho_star - dp.varrho1_star - dp.varrho2_star, 1e-15);
}
