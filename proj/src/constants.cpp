// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbfed/errors.hpp"

namespace cbfed {

double varrho(const PhysicalParams& p, double eps) {
  if (!(p.r > 3.0)) throw RegimeError("varrho needs r > 3");
  const double r = p.r;
  return (r - 3.0) / (2.0 * p.mu * (r - 1.0)) *
         std::pow(4.0 / (eps * p.beta * p.mu * (r - 1.0)), 2.0 / (r - 3.0));
}

double rho_pump(const PhysicalParams& p, double eps) {
  if (p.gamma == 0.0) return 0.0;  // no pumping term at all, even when q = 1
  const double r = p.r, q = p.q, g = std::abs(p.gamma);
  return (r - q) / (r - 1.0) *
         std::pow(std::pow(2.0, q) * q * g * (q - 1.0) / (eps * p.beta * (r - 1.0)),
                  (q - 1.0) / (r - q));
}

double eta1(const PhysicalParams& p) {
  if (!(p.r > 3.0)) throw RegimeError("eta1 needs r > 3");
  const double r = p.r;
  return (r - 3.0) / (2.0 * p.mu * (r - 1.0)) *
         std::pow(4.0 / (p.beta * p.mu * (r - 1.0)), 2.0 / (r - 3.0));
}

double eta2(const PhysicalParams& p) {
  if (p.gamma == 0.0) return 0.0;
  const double r = p.r, q = p.q, g = std::abs(p.gamma);
  return std::pow(q * g, (r - 1.0) / (r - q)) *
         std::pow(4.0 / p.beta * (q - 1.0) / (r - 1.0), (q - 1.0) / (r - q)) * (r - q) / (r - 1.0);
}

double rho_tilde1(const PhysicalParams& p) {
  if (p.gamma == 0.0) return 0.0;
  const double q = p.q, g = std::abs(p.gamma);
  return std::pow(std::pow(2.0, q - 1.0) * q * g * p.mu * (q - 1.0), (q - 1.0) / (3.0 - q)) *
         (3.0 - q) / 2.0;
}

double rho_tilde2(const PhysicalParams& p) {
  if (p.gamma == 0.0) return 0.0;
  const double q = p.q, g = std::abs(p.gamma);
  return std::pow(std::pow(2.0, q - 1.0) * q * g * (q - 1.0) / (p.beta - 1.0 / (2.0 * p.mu)),
                  (q - 1.0) / (3.0 - q)) *
         (3.0 - q) / 2.0;
}

MonotonicityConstants monotonicity_constants(const PhysicalParams& p, double eps,
                                             double eps_tilde, double M) {
  p.validate();
  if (!(eps > 0.0 && eps <= 0.5)) throw ConfigError("epsilon outside (0, 1/2]");
  if (!(eps_tilde > 0.0 && eps_tilde <= 1.0)) throw ConfigError("epsilon_tilde outside (0, 1]");
  MonotonicityConstants mc;
  mc.epsilon = eps;
  mc.epsilon_tilde = eps_tilde;
  mc.M = M;
  if (p.supercritical()) {
    mc.varrho_eps = varrho(p, eps);
    mc.rho_eps_tilde = rho_pump(p, eps_tilde);
    mc.rho_eps = rho_pump(p, eps);
    mc.eta1 = eta1(p);
    mc.eta2 = eta2(p);
    mc.c = mc.varrho_eps + mc.rho_eps_tilde + mc.rho_eps;
    mc.K = M + varrho(p, 0.5) + rho_pump(p, 1.0) + rho_pump(p, 0.5);
    mc.kappa = std::max(mc.c, mc.eta1 + mc.eta2);
  } else if (p.critical()) {
    mc.critical = true;
    mc.rho_tilde1 = rho_tilde1(p);
    mc.rho_tilde2 = rho_tilde2(p);
    mc.c = mc.rho_tilde1 + mc.rho_tilde2;
    mc.K = M + mc.c;
    mc.kappa = mc.c;
  } else {
    throw RegimeError("monotonicity constants need r > 3, or r = 3 with 2 beta mu > 1");
  }
  return mc;
}

ThetaThreshold theta_threshold(const PhysicalParams& p) {
  ThetaThreshold best;
  best.alpha = p.alpha;
  best.c_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 16; ++i) {
    const double eps = 0.5 * std::pow(10.0, -2.0 * i / 15.0);
    for (int j = 0; j < 16; ++j) {
      const double et = std::pow(10.0, -2.0 * j / 15.0);
      const double c = monotonicity_constants(p, eps, et).c;
      if (c < best.c_min) {
        best.c_min = c;
        best.epsilon = eps;
        best.epsilon_tilde = et;
      }
    }
  }
  return best;
}

double energy_constant(const PhysicalParams& p, double M) {
  if (!p.supercritical()) throw RegimeError("energy constant needs r > 3");
  return M + 1.0 + varrho(p, 0.5) + rho_pump(p, 1.0) + rho_pump(p, 0.5);
}

}  // namespace cbfed
