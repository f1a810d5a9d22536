// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cbfed/errors.hpp"
#include "cbfed/snapshot.hpp"
#include "cbfed/spectral.hpp"
#include "test_util.hpp"

using namespace cbfed;
using namespace cbfed::testing;

namespace {

const TorusGrid g2(2, 16, 2.0 * kPi);

std::size_t idx(const TorusGrid& g, int k0, int k1, int k2 = 0) {
  return flat_index(IVec{k0, k1, k2}, g.d, g.n);
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(TorusGrid(4, 16, 1.0), ConfigError);
  EXPECT_THROW(TorusGrid(2, 15, 1.0), ConfigError);
  EXPECT_THROW(TorusGrid(2, 16, -1.0), ConfigError);
  EXPECT_NO_THROW(TorusGrid(3, 8, 1.0));
}

TEST(Transform, ConstantGoesToMeanMode) {
  SpectralField u = field_of(g2, [](auto) { return std::array<double, 3>{0.3, -1.5, 0}; });
  EXPECT_NEAR(std::abs(u.at(0, 0) - Complex(0.3)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at(1, 0) - Complex(-1.5)), 0.0, 1e-15);
  for (std::size_t i = 1; i < u.modes(); ++i) {
    EXPECT_LT(std::abs(u.at(0, i)), 1e-15);
    EXPECT_LT(std::abs(u.at(1, i)), 1e-15);
  }
}

TEST(Transform, SineIsOneConjugatePair) {
  SpectralField u = field_of(g2, [](auto x) { return std::array<double, 3>{std::sin(x[1]), 0, 0}; });
  const std::size_t p = idx(g2, 0, 1), m = idx(g2, 0, -1);
  EXPECT_NEAR(std::abs(u.at(0, p) - Complex(0, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.at(0, m) - Complex(0, 0.5)), 0.0, 1e-15);
  double rest = 0.0;
  for (std::size_t i = 0; i < u.modes(); ++i)
    if (i != p && i != m) rest += std::abs(u.at(0, i)) + std::abs(u.at(1, i));
  EXPECT_LT(rest, 1e-14);
}

TEST(Transform, RandomRoundTrip) {
  for (int d : {2, 3}) {
    TorusGrid g(d, d == 2 ? 32 : 8, 1.7);
    SpectralField u = random_solenoidal(g, 5, 1.0);
    SpectralField v = from_physical(to_physical(u, g.n), g);
    EXPECT_LT(max_abs_diff(u, v), 1e-12);
    SpectralField w = from_physical(to_physical(u, oversampled_size(g.n, 2.0)), g);
    EXPECT_LT(max_abs_diff(u, w), 1e-12);
    EXPECT_LT(max_imag_physical(u), 1e-12);
  }
}

TEST(Transform, MatchesNaiveSeries) {
  TorusGrid g(2, 8, 3.0);
  SpectralField u = random_solenoidal(g, 9, 1.0);
  PhysicalField p = to_physical(u, 12);
  for (std::size_t i = 0; i < p.points(); i += 7) {
    const std::array<double, 3> x{static_cast<double>(i / 12) * 3.0 / 12,
                                  static_cast<double>(i % 12) * 3.0 / 12, 0};
    const auto v = eval_series(u, x);
    EXPECT_NEAR(p.comp[0][i], v[0], 1e-12);
    EXPECT_NEAR(p.comp[1][i], v[1], 1e-12);
  }
}

TEST(Leray, AnnihilatesGradients) {
  SpectralField u = field_of(g2, [](auto x) { return std::array<double, 3>{std::cos(x[0]), 0, 0}; });
  EXPECT_LT(norm_h(leray_project(u)), 1e-14);
}

TEST(Leray, IdentityOnSolenoidal) {
  SpectralField u = random_solenoidal(g2, 3, 1.0);
  EXPECT_LT(max_abs_diff(leray_project(u), u), 1e-14);
}

TEST(Leray, SingleCoefficient) {
  SpectralField u(g2);
  u.at(0, idx(g2, 1, 0)) = 1.0;
  u.at(1, idx(g2, 1, 0)) = 1.0;
  u.at(0, idx(g2, -1, 0)) = 1.0;
  u.at(1, idx(g2, -1, 0)) = 1.0;
  SpectralField p = leray_project(u);
  EXPECT_NEAR(std::abs(p.at(0, idx(g2, 1, 0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.at(1, idx(g2, 1, 0)) - 1.0), 0.0, 1e-15);
}

TEST(Leray, SymmetricIdempotentDivergenceFree) {
  for (int s = 0; s < 5; ++s) {
    SpectralField u = from_physical(sample(g2, g2.n, [s](auto x) {
                                      return std::array<double, 3>{std::sin(x[0] + s) * std::cos(2 * x[1]),
                                                                   std::exp(std::sin(x[0] - x[1])), 0};
                                    }),
                                    g2);
    SpectralField v = from_physical(sample(g2, g2.n, [s](auto x) {
                                      return std::array<double, 3>{std::cos(3 * x[1] - s), std::sin(x[0]) * x[1] * 0.0 + std::cos(x[0] * 2), 0};
                                    }),
                                    g2);
    SpectralField pu = leray_project(u);
    EXPECT_LT(norm_h(leray_project(pu) - pu), 1e-11 * norm_h(pu));
    EXPECT_NEAR(inner_product(pu, v), inner_product(u, leray_project(v)), 1e-11 * norm_h(u) * norm_h(v));
    EXPECT_LT(divergence_max(pu), 1e-11);
  }
}

TEST(Stokes, ConstantsAndEigenvalues) {
  SpectralField c = constant_field(g2, {1.0, 2.0, 0});
  EXPECT_LT(norm_h(stokes_apply(c)), 1e-15);
  EXPECT_LT(max_abs_diff(script_a_apply(c), c), 1e-15);

  SpectralField s = field_of(g2, [](auto x) { return std::array<double, 3>{std::sin(x[1]), 0, 0}; });
  EXPECT_LT(norm_h(script_a_apply(s) - 2.0 * s), 1e-13);

  TorusGrid g1(2, 16, 1.0);
  SpectralField w = field_of(g1, [](auto x) {
    const double a = 2 * kPi * (x[0] + x[1]);
    return std::array<double, 3>{std::sin(a), -std::sin(a), 0};
  });
  EXPECT_LT(norm_h(script_a_apply(w) - (1.0 + 8 * kPi * kPi) * w), 1e-11 * norm_h(w));
}

TEST(Resolvent, Examples) {
  SpectralField c = constant_field(g2, {1.0, -1.0, 0});
  EXPECT_LT(max_abs_diff(resolvent(c, 7.0), c), 1e-15);
  SpectralField s = field_of(g2, [](auto x) { return std::array<double, 3>{std::sin(x[1]), 0, 0}; });
  EXPECT_LT(norm_h(resolvent(s, 1.0) - 0.5 * s), 1e-14);
  SpectralField u = random_solenoidal(g2, 4, 3.0);
  const double lam = 1e-6;
  EXPECT_LT(norm_h(resolvent(u, lam) - u), 2.0 * lam * norm_h(stokes_apply(u)));
}

TEST(Norms, SineExamples) {
  SpectralField u = field_of(g2, [](auto x) { return std::array<double, 3>{std::sin(x[1]), 0, 0}; });
  EXPECT_NEAR(norm_h(u) * norm_h(u), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(std::pow(norm_lp(u, 4.0), 4.0), 1.5 * kPi * kPi, 1e-12);
  EXPECT_NEAR(norm_grad(u) * norm_grad(u), 2 * kPi * kPi, 1e-12);
  SpectralField c = constant_field(g2, {3.0, 4.0, 0});
  EXPECT_NEAR(norm_v(c), 5.0 * 2 * kPi, 1e-12);
  EXPECT_NEAR(norm_h(c), 5.0 * 2 * kPi, 1e-12);
}

TEST(Norms, LpMatchesQuadratureOracle) {
  SpectralField u = random_solenoidal(g2, 12, 2.0, 4);
  for (double p : {2.0, 4.0, 6.0}) {
    const double oracle = integrate(g2, 40, [&](const std::array<double, 3>& x) {
      const auto v = eval_series(u, x);
      return std::pow(v[0] * v[0] + v[1] * v[1], p / 2);
    });
    EXPECT_NEAR(std::pow(norm_lp(u, p), p), oracle, 1e-10 * oracle);
  }
}

TEST(Eigenbasis, ConstantsFirstThenUnitShell) {
  auto one = eigenbasis(1, g2);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].phase, Phase::Constant);
  EXPECT_DOUBLE_EQ(one[0].lambda, 1.0);
  EXPECT_LT(norm_grad(one[0].field), 1e-15);

  auto modes = eigenbasis(6, g2);
  EXPECT_EQ(modes[1].phase, Phase::Constant);
  for (int i = 2; i < 6; ++i) EXPECT_NEAR(modes[i].lambda, 2.0, 1e-14);
  int sines = 0;
  for (int i = 2; i < 6; ++i) sines += modes[i].phase == Phase::Sine;
  EXPECT_EQ(sines, 2);
  auto more = eigenbasis(7, g2);
  EXPECT_NEAR(more[6].lambda, 3.0, 1e-14);
}

TEST(Eigenbasis, OrthonormalEigenfunctions) {
  for (int d : {2, 3}) {
    TorusGrid g(d, 8, 2.5);
    auto modes = eigenbasis(d == 2 ? 30 : 40, g);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      EXPECT_LT(norm_h(script_a_apply(modes[i].field) - modes[i].lambda * modes[i].field), 1e-12);
      EXPECT_LT(divergence_max(modes[i].field), 1e-14);
      for (std::size_t j = 0; j < modes.size(); ++j)
        EXPECT_NEAR(inner_product(modes[i].field, modes[j].field), i == j ? 1.0 : 0.0, 1e-12);
    }
    for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LE(modes[i - 1].lambda, modes[i].lambda);
  }
}

TEST(RandomSolenoidal, DeterministicAndDivergenceFree) {
  SpectralField a = random_solenoidal(g2, 77, 1.5), b = random_solenoidal(g2, 77, 1.5);
  EXPECT_EQ(a.data(), b.data());
  EXPECT_LT(divergence_max(a), 1e-12);
  EXPECT_LT(max_imag_physical(a), 1e-12);
  SpectralField c = random_solenoidal(g2, 78, 1.5);
  EXPECT_GT(norm_h(a - c), 0.0);
}

TEST(RandomSolenoidal, SmootherForLargerExponent) {
  double rough = 0.0, smooth = 0.0;
  for (int s = 0; s < 100; ++s) {
    SpectralField a = random_solenoidal(g2, s, 1.0), b = random_solenoidal(g2, s, 3.0);
    rough += norm_v(a) / norm_h(a);
    smooth += norm_v(b) / norm_h(b);
  }
  EXPECT_LT(smooth, rough);
}

TEST(Snapshot, RoundTripWithHash) {
  const auto path = std::filesystem::temp_directory_path() / "cbfed_snapshot_test.bin";
  for (int d : {2, 3}) {
    TorusGrid g(d, 8, 1.25);
    SpectralField u = random_solenoidal(g, 21, 1.0);
    write_snapshot(path.string(), u, 0xabcdef12345ULL);
    Snapshot s = read_snapshot(path.string());
    EXPECT_TRUE(s.field.grid() == g);
    EXPECT_EQ(s.field.data(), u.data());
    ASSERT_TRUE(s.config_hash.has_value());
    EXPECT_EQ(*s.config_hash, 0xabcdef12345ULL);
    write_snapshot(path.string(), u);
    EXPECT_FALSE(read_snapshot(path.string()).config_hash.has_value());
  }
  const auto size = std::filesystem::file_size(path);
  EXPECT_EQ(size, 4 + 4 + 4 + 4 + 8 + 8 + 3 * 343 * 16u);
  {
    std::ofstream os(path, std::ios::binary);
    os << "JUNKJUNKJUNK";
  }
  EXPECT_THROW(read_snapshot(path.string()), Error);
  std::filesystem::remove(path);
}
