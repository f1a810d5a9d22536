// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <memory>

#include "cbfed/controllers.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/galerkin.hpp"
#include "cbfed/nonlinear.hpp"
#include "cbfed/rng.hpp"
#include "cbfed/stationary.hpp"
#include "test_util.hpp"

using namespace cbfed;
using namespace cbfed::testing;

namespace {

const TorusGrid g16(2, 16, 2.0 * kPi);

PhysicalParams critical_params() {
  PhysicalParams p;
  p.r = 3.0;
  return p;
}

SpectralField small_equilibrium(const PhysicalParams& p) {
  SpectralField f = eigenbasis(8, g16)[3].field + eigenbasis(8, g16)[5].field;
  f *= 0.05;
  return solve_stationary(p, f).y;
}

Eigen::VectorXd random_vec(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

}  // namespace

TEST(Reduction, ZeroEquilibriumIsDiagonal) {
  PhysicalParams p = critical_params();
  p.mu = 0.8;
  p.alpha = 0.3;
  auto red = assemble_reduction(SpectralField(g16, true), 8, p, DomainMask::full(g16));
  EXPECT_LT(red.h1.norm(), 1e-15);
  EXPECT_LT(red.h2.norm(), 1e-15);
  const auto& modes = red.span->modes();
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      EXPECT_NEAR(red.Lmat(i, k), i == k ? 0.8 * (modes[k].lambda - 1.0) + 0.3 : 0.0, 1e-14);
  EXPECT_LT((red.Bmat - Eigen::MatrixXd::Identity(8, 8)).norm(), 1e-13);
}

TEST(Reduction, TrilinearTensorMatchesQuadrature) {
  TorusGrid g(2, 8, 2.0 * kPi);
  auto red = assemble_reduction(SpectralField(g, true), 8, critical_params(), DomainMask::full(g));
  const auto& m = red.span->modes();
  const double bound = 32 * kPi * kPi / std::pow(g.length, 4);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) worst = std::max(worst, std::abs(red.g1_at(i, j, k)));
  EXPECT_LE(worst, bound);
  for (auto [i, j, k] : {std::array<int, 3>{2, 3, 4}, {4, 5, 6}, {6, 2, 7}, {3, 3, 5}}) {
    const double oracle = integrate(g, 16, [&](const std::array<double, 3>& x) {
      const auto a = eval_series(m[i].field, x), c = eval_series(m[k].field, x);
      double s = 0.0;
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) s += a[u] * eval_derivative(m[j].field, v, u, x) * c[v];
      return s;
    });
    EXPECT_NEAR(red.g1_at(i, j, k), oracle, 1e-10);
  }
}

TEST(Reduction, QuadraticAndRemainderTerms) {
  PhysicalParams p = critical_params();
  p.beta = 1.3;
  SpectralField ye = small_equilibrium(p);
  auto red = assemble_reduction(ye, 8, p, DomainMask::strip_complement(g16, 0, 1.0));
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXd v = 0.3 * random_vec(8, s);
    SpectralField z = red.lift(v);
    Eigen::VectorXd q = red.restrict(convective(z));
    EXPECT_LT((red.Q(v) - q).norm(), 1e-12);
    // Exact Taylor remainder of the absorption about y_e.
    SpectralField rem = power_damping(ye + z, 3.0) - power_damping(ye, 3.0) - gateaux_first(ye, z, 3.0);
    Eigen::VectorXd n = p.beta * red.restrict(rem);
    EXPECT_LT((red.N(v) - n).norm(), 1e-10 * std::max(1.0, n.norm()));
  }
  // Linear part reproduces the linearized operator.
  Eigen::VectorXd v = random_vec(8, 9);
  SpectralField z = red.lift(v);
  SpectralField lin = p.mu * stokes_apply(z) + p.alpha * z + convective_pair(ye, z) +
                      convective_pair(z, ye) + p.beta * gateaux_first(ye, z, 3.0);
  EXPECT_LT((red.Lmat * v - red.restrict(lin)).norm(), 1e-11);
}

TEST(Reduction, LiftRestrictIdentity) {
  auto red = assemble_reduction(SpectralField(g16, true), 8, critical_params(), DomainMask::full(g16));
  Eigen::VectorXd v = random_vec(8, 4);
  EXPECT_LT((red.restrict(red.lift(v)) - v).norm(), 1e-12);
}

TEST(Reduction, RegimeGuards) {
  PhysicalParams p;
  p.r = 2.0;
  EXPECT_THROW(assemble_reduction(SpectralField(g16, true), 4, p, DomainMask::full(g16)), RegimeError);
  p.r = 5.0;
  p.gamma = -1.0;
  p.q = 2.0;
  EXPECT_THROW(assemble_reduction(SpectralField(g16, true), 4, p, DomainMask::full(g16)), RegimeError);
}

TEST(Controllability, RankExamples) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(4, 4);
  L(0, 0) = 3.0;
  EXPECT_EQ(controllability_rank(L, Eigen::MatrixXd::Identity(4, 4)), 4);
  EXPECT_EQ(controllability_rank(L, Eigen::MatrixXd::Zero(4, 4)), 0);
  auto red = assemble_reduction(small_equilibrium(critical_params()), 8, critical_params(),
                                DomainMask::strip_complement(g16, 0, 0.5));
  EXPECT_EQ(controllability_rank(red.Lmat, red.Bmat), 8);
}

TEST(Gain, ScalarCase) {
  Eigen::MatrixXd L(1, 1), B(1, 1), G(1, 1);
  L << 1.0;
  B << 1.0;
  G << -1.0;
  auto v = verify_gain(L, B, G, 2.0);
  EXPECT_NEAR(v.min_re, 2.0, 1e-15);
  EXPECT_TRUE(v.ok);
  auto s = synthesize_gain(L, B, 2.0);
  // Riccati 2P - P^2 + 1 = 0 on A = 1 gives P = 1 + sqrt 2.
  EXPECT_NEAR(s.G(0, 0), -(1.0 + std::sqrt(2.0)), 1e-12);
  EXPECT_TRUE(s.ok);
  EXPECT_DOUBLE_EQ(s.m_hat, 1.0);
}

TEST(Gain, AlreadyStableNeedsNoGain) {
  Eigen::MatrixXd L = Eigen::Vector4d(3, 4, 5, 6).asDiagonal();
  auto v = verify_gain(L, Eigen::MatrixXd::Identity(4, 4), Eigen::MatrixXd::Zero(4, 4), 2.0);
  EXPECT_TRUE(v.ok);
  EXPECT_NEAR(v.min_re, 3.0, 1e-14);
}

TEST(Gain, DiagonalPairPlacesSpectrum) {
  Eigen::MatrixXd L = Eigen::Vector4d(-1, 0.5, 2, -3).asDiagonal();
  auto s = synthesize_gain(L, Eigen::MatrixXd::Identity(4, 4), 1.5);
  EXPECT_GE(s.min_re, 1.5 - 1e-8);
  EXPECT_LT(s.riccati_residual, 1e-10);
}

TEST(Gain, ThinMaskReduction) {
  PhysicalParams p = critical_params();
  auto red = assemble_reduction(small_equilibrium(p), 8, p, DomainMask::strip_complement(g16, 0, 0.5));
  auto s = synthesize_gain(red.Lmat, red.Bmat, 1.0);
  EXPECT_EQ(s.rank, 8);
  EXPECT_GE(s.min_re, 1.0 - 1e-8);
  EXPECT_GE(s.m_hat, 1.0);
}

TEST(Growth, HandValues) {
  EXPECT_NEAR(gamma0_constant(2 * kPi, 2), std::sqrt(2.0) / kPi, 1e-15);
  PhysicalParams p = critical_params();
  p.beta = 2.0;
  auto red = assemble_reduction(SpectralField(g16, true), 8, p, DomainMask::full(g16));
  auto gc = growth_constants(red, p, SpectralField(g16, true), 1.0);
  EXPECT_TRUE(gc.critical);
  EXPECT_EQ(gc.C1, 0.0);
  const double L = 2 * kPi;
  EXPECT_NEAR(gc.gamma1, 6 * 2.0 * std::pow(16.0 / (L * L), 1.5) * std::sqrt(8.0) * L, 1e-10);
  auto tiny = growth_constants(red, p, SpectralField(g16, true), 1e-10);
  EXPECT_GT(tiny.rho1, 0.0);
  EXPECT_LT(tiny.rho1, 1e-9);
  EXPECT_LT(tiny.rho1, gc.rho1);
}

TEST(Growth, SupercriticalRegime) {
  PhysicalParams p;
  p.r = 5.0;
  p.q = 3.0;
  p.gamma = -0.1;
  auto red = assemble_reduction(SpectralField(g16, true), 4, p, DomainMask::full(g16));
  auto gc = growth_constants(red, p, SpectralField(g16, true), 1.0);
  EXPECT_FALSE(gc.critical);
  EXPECT_GT(gc.gamma2, 0.0);
  EXPECT_GT(gc.rho1, 0.0);
  p.q = 2.0;
  EXPECT_THROW(growth_constants(red, p, SpectralField(g16, true), 1.0), RegimeError);
}

TEST(ReducedLoop, ZeroStaysZero) {
  PhysicalParams p = critical_params();
  auto red = assemble_reduction(SpectralField(g16, true), 4, p, DomainMask::full(g16));
  auto tr = reduced_simulate(Eigen::VectorXd::Zero(4), red, Eigen::MatrixXd::Zero(4, 4), 1.0, 0.1);
  EXPECT_EQ(tr.max_norm, 0.0);
}

TEST(ReducedLoop, LinearSemigroupBound) {
  PhysicalParams p = critical_params();
  auto red = assemble_reduction(small_equilibrium(p), 8, p, DomainMask::strip_complement(g16, 0, 0.5));
  auto gs = synthesize_gain(red.Lmat, red.Bmat, 1.0);
  ReducedOptions opt;
  opt.include_q = opt.include_n = false;
  Eigen::VectorXd v0 = random_vec(8, 2);
  auto tr = reduced_simulate(v0, red, gs.G, 3.0, 0.005, opt);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    EXPECT_LE(tr.norm[i], gs.m_hat * std::exp(-1.0 * tr.t[i]) * v0.norm() * (1 + 1e-8));
}

TEST(ReducedLoop, FullControllerOnFullMask) {
  PhysicalParams p = critical_params();
  auto red = std::make_shared<GalerkinReduction>(
      assemble_reduction(SpectralField(g16, true), 8, p, DomainMask::full(g16)));
  Eigen::MatrixXd G = Eigen::MatrixXd::Random(8, 8);
  SpectralField z = random_solenoidal(g16, 3, 2.0);
  SpectralField u = full_controller(z, *red, G);
  EXPECT_LT(norm_h(u - red->lift(G * red->restrict(z))), 1e-12);
  auto ctl = make_galerkin_controller(red, G);
  EXPECT_LT(norm_h(ctl(z) - u), 1e-15);
}
