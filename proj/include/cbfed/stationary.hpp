// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "cbfed/field.hpp"
#include "cbfed/params.hpp"

namespace cbfed {

// K1 bounds the pumping term by the absorption, K2 enters the uniqueness margin.
struct StationaryConstants {
  double K1 = 0.0;
  double K2 = 0.0;
};
StationaryConstants stationary_constants(const PhysicalParams& p);

// min{mu, alpha} >= 2 K2 + C (|f|^2/(beta mu) + K1 |T^d| / beta)^{1/2}
struct UniquenessReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool certified = false;
};
UniquenessReport uniqueness_margin(const PhysicalParams& p, const SpectralField& f,
                                   double c_embed = 1.0);

// min{mu, alpha/2} |y|_{H^1}^2 + beta/2 |y|_{L^{r+1}}^{r+1} against
// |f|^2 / (2 mu) + K1 |T^d| (printed form) and |f|^2 / (2 alpha) + K1 |T^d|
// (the form that follows from testing the equation with y).
struct EnergyBound {
  double lhs = 0.0;
  double rhs_printed = 0.0;
  double rhs_derived = 0.0;
  bool printed_ok = false;
  bool derived_ok = false;
};
EnergyBound energy_bound_check(const SpectralField& y, const SpectralField& f,
                               const PhysicalParams& p);

// mu A y + B(y) + alpha y + beta C1(y) + gamma C2(y) - P f
SpectralField stationary_residual(const SpectralField& y, const SpectralField& f,
                                  const PhysicalParams& p);

struct StationaryOptions {
  double tol = 1e-10;
  int max_iter = 5000;
  double relax = 1.0;
  int max_halvings = 4;
  double c_embed = 1.0;
};

struct StationarySolution {
  SpectralField y;
  double residual = 0.0;
  int iterations = 0;
  double relax = 1.0;
  std::vector<double> residual_history;
  UniquenessReport uniqueness;
  EnergyBound energy;
};

// Damped Picard iteration
// y <- (1 - w) y + w (mu A + alpha)^{-1} P[f - B(y) - beta C1(y) - gamma C2(y)].
// w is halved whenever the residual grows; DivergenceError after max_halvings
// or max_iter.
StationarySolution solve_stationary(const PhysicalParams& p, const SpectralField& f,
                                    const StationaryOptions& opt = {},
                                    const std::optional<SpectralField>& y0 = std::nullopt);

}  // namespace cbfed
