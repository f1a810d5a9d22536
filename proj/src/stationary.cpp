// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbfed/errors.hpp"
#include "cbfed/nonlinear.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {

StationaryConstants stationary_constants(const PhysicalParams& p) {
  StationaryConstants c;
  if (p.gamma == 0.0) return c;
  const double r = p.r, q = p.q, g = std::abs(p.gamma);
  c.K1 = std::pow(g, (r + 1.0) / (r - q)) *
         std::pow(2.0 * (q + 1.0) / (p.beta * (r + 1.0)), (r - q) / (q + 1.0)) * (r - q) /
         (r + 1.0);
  c.K2 = std::pow(std::pow(2.0, q - 1.0) * q * g * (q - 1.0) / (p.beta * (r - 1.0)),
                  (q - 1.0) / (r - q)) *
         (r - q) / (r - 1.0);
  return c;
}

UniquenessReport uniqueness_margin(const PhysicalParams& p, const SpectralField& f,
                                   double c_embed) {
  const StationaryConstants sc = stationary_constants(p);
  const double vol = f.grid().volume();
  const double nf2 = std::pow(norm_h(f), 2);
  UniquenessReport u;
  u.lhs = std::min(p.mu, p.alpha);
  u.rhs = 2.0 * sc.K2 + c_embed * std::sqrt(nf2 / (p.beta * p.mu) + sc.K1 * vol / p.beta);
  u.margin = u.lhs - u.rhs;
  u.certified = u.margin >= 0.0;
  return u;
}

EnergyBound energy_bound_check(const SpectralField& y, const SpectralField& f,
                               const PhysicalParams& p) {
  const StationaryConstants sc = stationary_constants(p);
  const double vol = y.grid().volume();
  const double h1 = std::pow(norm_v(y), 2);
  const double lr = std::pow(norm_lp(y, p.r + 1.0), p.r + 1.0);
  const double nf2 = std::pow(norm_h(f), 2);
  EnergyBound e;
  e.lhs = std::min(p.mu, p.alpha / 2.0) * h1 + 0.5 * p.beta * lr;
  e.rhs_printed = nf2 / (2.0 * p.mu) + sc.K1 * vol;
  e.rhs_derived = p.alpha > 0.0 ? nf2 / (2.0 * p.alpha) + sc.K1 * vol
                                : std::numeric_limits<double>::infinity();
  const double slack = 1e-10 * std::max(1.0, e.lhs);
  e.printed_ok = e.lhs <= e.rhs_printed + slack;
  e.derived_ok = e.lhs <= e.rhs_derived + slack;
  return e;
}

namespace {

SpectralField nonlinear_part(const SpectralField& y, const PhysicalParams& p) {
  SpectralField out = convective(y);
  if (p.beta != 0.0) out.axpy(p.beta, power_damping(y, p.r));
  if (p.gamma != 0.0) out.axpy(p.gamma, power_damping(y, p.q));
  return out;
}

}  // namespace

SpectralField stationary_residual(const SpectralField& y, const SpectralField& f,
                                  const PhysicalParams& p) {
  SpectralField res = p.mu * stokes_apply(y);
  res.axpy(p.alpha, y);
  res += nonlinear_part(y, p);
  res -= leray_project(f);
  return res;
}

StationarySolution solve_stationary(const PhysicalParams& p, const SpectralField& f,
                                    const StationaryOptions& opt,
                                    const std::optional<SpectralField>& y0) {
  p.validate();
  if (!(p.alpha > 0.0)) throw ConfigError("stationary solve needs alpha > 0");
  const TorusGrid& g = f.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  const double ks2 = g.kscale() * g.kscale();
  const SpectralField pf = leray_project(f);

  StationarySolution sol;
  sol.y = y0 ? leray_project(*y0) : SpectralField(g, true);
  double w = opt.relax;
  int halvings = 0;
  double res = norm_h(stationary_residual(sol.y, f, p));

  auto picard = [&](const SpectralField& y, double omega) {
    SpectralField rhs = pf - nonlinear_part(y, p);
    for (int a = 0; a < g.d; ++a)
      for (std::size_t i = 0; i < wt.k.size(); ++i)
        rhs.at(a, i) /= p.mu * ks2 * wt.k2[i] + p.alpha;
    SpectralField out = (1.0 - omega) * y;
    out.axpy(omega, rhs);
    out.set_solenoidal(true);
    return out;
  };

  for (int it = 1; it <= opt.max_iter; ++it) {
    SpectralField trial = picard(sol.y, w);
    const double tres = norm_h(stationary_residual(trial, f, p));
    if (!std::isfinite(tres) || tres > res) {
      if (++halvings > opt.max_halvings)
        throw DivergenceError("stationary iteration stagnated after relaxation halvings");
      w *= 0.5;
      continue;
    }
    sol.y = std::move(trial);
    res = tres;
    sol.residual_history.push_back(res);
    sol.iterations = it;
    if (res < opt.tol) break;
  }
  if (!(res < opt.tol)) throw DivergenceError("stationary iteration hit the iteration cap");
  sol.residual = res;
  sol.relax = w;
  sol.uniqueness = uniqueness_margin(p, f, opt.c_embed);
  sol.energy = energy_bound_check(sol.y, f, p);
  return sol;
}

}  // namespace cbfed
