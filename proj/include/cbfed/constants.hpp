// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbfed/params.hpp"

namespace cbfed {

// Scalar constants behind the monotonicity of the shifted operator
// G(z) = mu A z + B~(z) + beta C1~(z) + gamma C2~(z) + alpha z.
// The free functions evaluate the raw formulas for any positive epsilon; the
// struct builder enforces the admissible window 0 < eps <= 1/2, 0 < eps~ <= 1.
double varrho(const PhysicalParams& p, double eps);    // needs r > 3
double rho_pump(const PhysicalParams& p, double eps);  // 0 when gamma = 0
double eta1(const PhysicalParams& p);
double eta2(const PhysicalParams& p);
// r = 3, 2 beta mu > 1 variants.
double rho_tilde1(const PhysicalParams& p);
double rho_tilde2(const PhysicalParams& p);

struct MonotonicityConstants {
  double epsilon = 0.5;
  double epsilon_tilde = 1.0;
  double M = 0.0;
  bool critical = false;
  double varrho_eps = 0.0;
  double rho_eps_tilde = 0.0;
  double rho_eps = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double rho_tilde1 = 0.0;
  double rho_tilde2 = 0.0;
  double c = 0.0;      // varrho_eps + rho_eps~ + rho_eps (or rho~1 + rho~2 when r = 3)
  double K = 0.0;      // M + varrho_{1/2} + rho_1 + rho_{1/2} (or M + rho~1 + rho~2)
  double kappa = 0.0;  // max{c, eta1 + eta2}
};

// Throws RegimeError outside r > 3 or (r = 3, 2 beta mu > 1), ConfigError for
// epsilons outside the window.
MonotonicityConstants monotonicity_constants(const PhysicalParams& p, double eps = 0.5,
                                             double eps_tilde = 1.0, double M = 0.0);

struct ThetaThreshold {
  double c_min = 0.0;
  double epsilon = 0.5;
  double epsilon_tilde = 1.0;
  double alpha = 0.0;
  double delta1(double theta) const { return theta + alpha - c_min; }
};

// Minimum of c over a 16 x 16 log grid in the admissible window.
ThetaThreshold theta_threshold(const PhysicalParams& p);

// k = M + 1 + varrho_{1/2} + rho_1 + rho_{1/2} of the energy inequality
// (supercritical regime only).
double energy_constant(const PhysicalParams& p, double M);

}  // namespace cbfed
