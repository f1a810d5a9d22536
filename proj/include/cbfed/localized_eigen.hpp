// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbfed/field.hpp"
#include "cbfed/mask.hpp"
#include "cbfed/params.hpp"

namespace cbfed {

// A_k y = mu A y + alpha y + k P(m y)
SpectralField apply_ak(const SpectralField& y, double k_gain, const DomainMask& mask,
                       const PhysicalParams& p);

struct AkEigen {
  double nu = 0.0;
  SpectralField field;  // unit H norm
  int iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;  // |A_k w - nu w|_H
};

// Inverse power iteration with diagonally preconditioned CG inner solves.
// Stops when the eigen-residual drops below tol (and the Rayleigh quotient has
// settled). DivergenceError when CG or the outer loop hits its cap.
AkEigen smallest_eigenvalue_ak(double k_gain, const DomainMask& mask, const PhysicalParams& p,
                               double tol, int max_outer = 20000);

struct LadderEntry {
  double k_gain = 0.0;
  double nu = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

struct EigenReport {
  std::vector<LadderEntry> ladder;
  double largest_nu = 0.0;
  double lambda_star = 0.0;     // extrapolant, never below a computed nu
  double order = 0.0;           // fitted p in nu_k ~ lambda* - c k^{-p}
  double complement_volume = 0.0;
  double rfk_printed = 0.0;     // (omega_d / |Q~|)^{2/d} j
  double rfk_scaled = 0.0;      // mu (omega_d / |Q~|)^{2/d} j^2 + alpha
  bool monotone = true;
  bool below_extrapolant = true;
};

// Extrapolates nu_k to k -> infinity assuming nu_k ~ lambda* - c k^{-p}, with p
// taken from the last three ladder entries (p = 1 when that fit is not
// contracting). Rejects a full mask and non-monotone ladders.
EigenReport lambda_star_estimate(const DomainMask& mask, const PhysicalParams& p,
                                 const std::vector<double>& ladder, double tol);

// Bessel J_nu by its power series, and its first positive zero by bisection.
double bessel_j_series(double nu, double x);
double bessel_first_zero(double nu);

// (omega_d / |Q~|)^{2/d} j_{d/2-1,1}
double rfk_bound(double volume, int d);
double rfk_bound_scaled(double volume, int d, double mu, double alpha);

struct ProportionalDecay {
  double delta = 0.0;
  double varrho_star = 0.0;
  double varrho1_star = 0.0;
  double varrho2_star = 0.0;
  bool positive = false;
};

// delta = lambda - eps - varrho* - varrho1* - varrho2* (supercritical regime).
ProportionalDecay proportional_decay_constant(double lambda, const PhysicalParams& p, double eps);

}  // namespace cbfed
