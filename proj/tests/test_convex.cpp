// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "cbfed/convex.hpp"
#include "test_util.hpp"

using namespace cbfed;
using namespace cbfed::testing;

namespace {

const TorusGrid g2(2, 16, 2.0 * kPi);

// {|x| <= R, (x, a) >= 0} with a = w_lo + w_hi built from eigenfunctions with
// different eigenvalues; the resolvent tilts w_hi - w_lo across the cut.
class HalfBall : public ConvexSet {
 public:
  HalfBall() {
    auto m = eigenbasis(8, g2);
    lo_ = m[2].field;
    hi_ = m[6].field;
    a_ = lo_ + hi_;
  }
  std::string name() const override { return "half_ball"; }
  SpectralField project(const SpectralField& x) const override { return x; }
  double violation(const SpectralField& x) const override {
    return std::max(norm_h(x) - 1.0, -inner_product(x, a_) / norm_h(a_));
  }
  SpectralField sample_boundary(const TorusGrid&, std::uint64_t) const override {
    return 0.5 * (hi_ - lo_);
  }

 private:
  SpectralField lo_, hi_, a_;
};

}  // namespace

TEST(Ball, Projection) {
  Ball b(1.0);
  SpectralField x = random_solenoidal(g2, 1, 2.0);
  x *= 0.5 / norm_h(x);
  EXPECT_EQ(b.project(x).data(), x.data());
  SpectralField y = (2.0 / norm_h(x)) * x;  // |y| = 2
  EXPECT_LT(norm_h(b.project(y) - 0.5 * y), 1e-15);
  EXPECT_NEAR(b.distance(y), 1.0, 1e-14);
  EXPECT_EQ(b.distance(x), 0.0);
  EXPECT_TRUE(b.contains(x));
  EXPECT_FALSE(b.contains(y));
}

TEST(Ball, NonexpansiveProjection) {
  Ball b(0.3);
  for (int s = 0; s < 10; ++s) {
    SpectralField x = random_solenoidal(g2, s, 2.0), y = random_solenoidal(g2, 50 + s, 2.0);
    EXPECT_LE(norm_h(b.project(x) - b.project(y)), norm_h(x - y) * (1 + 1e-14));
    EXPECT_EQ(b.distance(b.project(x)), 0.0);
  }
}

TEST(EigenSpan, ConstantsOnlyKeepsMean) {
  EigenSpan span(g2, 2);
  SpectralField x = random_solenoidal(g2, 3, 1.0);
  SpectralField p = span.project(x);
  EXPECT_LT(std::abs(p.at(0, 0) - x.at(0, 0)), 1e-15);
  EXPECT_LT(std::abs(p.at(1, 0) - x.at(1, 0)), 1e-15);
  for (std::size_t i = 1; i < p.modes(); ++i) EXPECT_EQ(std::abs(p.at(0, i)) + std::abs(p.at(1, i)), 0.0);
}

TEST(EigenSpan, CoefficientsRoundTrip) {
  EigenSpan span(g2, 12);
  std::vector<double> c(12);
  for (int i = 0; i < 12; ++i) c[i] = 0.1 * i - 0.4;
  SpectralField x = span.combine(c);
  auto back = span.coefficients(x);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(back[i], c[i], 1e-14);
  EXPECT_LT(span.distance(x), 1e-14);
  EXPECT_LT(norm_h(span.project(x) - x), 1e-14);
}

TEST(Yosida, Examples) {
  Ball b(1.0);
  SpectralField x = random_solenoidal(g2, 4, 2.0);
  x *= 0.9 / norm_h(x);
  EXPECT_EQ(norm_h(yosida(b, x, 0.1)), 0.0);
  SpectralField y = (2.0 / norm_h(x)) * x;
  EXPECT_LT(norm_h(yosida(b, y, 0.5) - y), 1e-14);
  EXPECT_LT(norm_h(yosida(b, y, 0.25) - 2.0 * yosida(b, y, 0.5)), 1e-14);
  EXPECT_THROW(yosida(b, y, 0.0), std::invalid_argument);
}

TEST(Invariance, BallAndSpanAreInvariant) {
  const std::vector<double> lambdas{1e-3, 1e-2, 0.1, 1.0, 10.0};
  auto rb = check_resolvent_invariance(Ball(0.7), g2, lambdas, 10, 1);
  EXPECT_TRUE(rb.ok);
  EXPECT_LE(rb.worst_violation, 0.0);
  EXPECT_EQ(rb.samples, 50);
  auto rs = check_resolvent_invariance(EigenSpan(g2, 10), g2, lambdas, 10, 2);
  EXPECT_TRUE(rs.ok);
  EXPECT_LT(rs.worst_violation, 1e-14);
}

TEST(Invariance, DetectsNonInvariantSet) {
  HalfBall hb;
  auto rep = check_resolvent_invariance(hb, g2, {0.1, 1.0}, 1, 0);
  EXPECT_FALSE(rep.ok);
  EXPECT_GT(rep.worst_violation, 1e-3);
}
