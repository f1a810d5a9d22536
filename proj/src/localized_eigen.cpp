// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/localized_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbfed/constants.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {

SpectralField apply_ak(const SpectralField& y, double k_gain, const DomainMask& mask,
                       const PhysicalParams& p) {
  SpectralField out = p.mu * stokes_apply(y);
  out.axpy(p.alpha, y);
  if (k_gain != 0.0) out.axpy(k_gain, leray_project(mask.apply(y)));
  out.set_solenoidal(true);
  return out;
}

namespace {

struct Operator {
  double k;
  const DomainMask& mask;
  const PhysicalParams& p;
  std::vector<double> diag;  // mu lambda~ + alpha per flat index

  SpectralField apply(const SpectralField& y) const { return apply_ak(y, k, mask, p); }
  SpectralField precondition(const SpectralField& r) const {
    SpectralField out = r;
    for (int a = 0; a < r.dim(); ++a)
      for (std::size_t i = 0; i < diag.size(); ++i) out.at(a, i) /= diag[i];
    return out;
  }
};

// Preconditioned CG for A x = b starting from x. Returns iterations used.
int pcg(const Operator& op, const SpectralField& b, SpectralField& x, double rtol, int cap) {
  SpectralField r = b - op.apply(x);
  const double bn = std::max(norm_h(b), 1e-300);
  if (norm_h(r) <= rtol * bn) return 0;
  SpectralField z = op.precondition(r);
  SpectralField d = z;
  double rz = inner_product(r, z);
  for (int it = 1; it <= cap; ++it) {
    SpectralField ad = op.apply(d);
    const double a = rz / inner_product(d, ad);
    x.axpy(a, d);
    r.axpy(-a, ad);
    if (norm_h(r) <= rtol * bn) return it;
    z = op.precondition(r);
    const double rz2 = inner_product(r, z);
    d = z + (rz2 / rz) * d;
    rz = rz2;
  }
  throw DivergenceError("conjugate gradient hit its iteration cap");
}

}  // namespace

AkEigen smallest_eigenvalue_ak(double k_gain, const DomainMask& mask, const PhysicalParams& p,
                               double tol, int max_outer) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(p.alpha > 0.0)) throw ConfigError("A_k eigenproblem needs alpha > 0");
  const TorusGrid& g = mask.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  Operator op{k_gain, mask, p, {}};
  const double ks2 = g.kscale() * g.kscale();
  op.diag.resize(wt.k.size());
  for (std::size_t i = 0; i < wt.k.size(); ++i) op.diag[i] = p.mu * ks2 * wt.k2[i] + p.alpha;

  SpectralField v = random_solenoidal(g, 0x5eed, 2.0);
  v *= 0.1 / norm_h(v);
  for (int c = 0; c < g.d; ++c) v.at(c, 0) += 1.0 / std::sqrt(g.volume());
  v *= 1.0 / norm_h(v);

  AkEigen res;
  SpectralField av = op.apply(v);
  double nu = inner_product(av, v);
  const double cg_tol = std::min(1e-10, 1e-3 * tol);
  for (int it = 1; it <= max_outer; ++it) {
    SpectralField w = (1.0 / nu) * v;
    res.cg_iterations += pcg(op, v, w, cg_tol, 5000);
    // The mask product drops any non-real part, where A_k has no k term and
    // smaller eigenvalues; round-off there would win the power iteration.
    w = leray_project(transform_forward(g, transform_inverse(w)));
    v = (1.0 / norm_h(w)) * w;
    av = op.apply(v);
    const double nu_new = inner_product(av, v);
    SpectralField resid = av;
    resid.axpy(-nu_new, v);
    res.residual = norm_h(resid);
    const bool settled = std::abs(nu_new - nu) < tol;
    nu = nu_new;
    res.iterations = it;
    if (settled && res.residual < tol) {
      res.nu = nu;
      res.field = v;
      return res;
    }
  }
  throw DivergenceError("inverse iteration did not converge");
}

EigenReport lambda_star_estimate(const DomainMask& mask, const PhysicalParams& p,
                                 const std::vector<double>& ladder, double tol) {
  if (mask.is_full()) throw ConfigError("complement empty: no lambda* for a full mask");
  if (ladder.size() < 4) throw ConfigError("lambda* estimate needs at least 4 ladder values");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i - 1])) throw ConfigError("k ladder must be increasing");
  EigenReport rep;
  for (double k : ladder) {
    AkEigen e = smallest_eigenvalue_ak(k, mask, p, tol);
    rep.ladder.push_back({k, e.nu, e.iterations, e.residual});
  }
  const std::size_t m = rep.ladder.size();
  for (std::size_t i = 1; i < m; ++i)
    if (rep.ladder[i].nu < rep.ladder[i - 1].nu - 10.0 * tol) rep.monotone = false;
  if (!rep.monotone) throw DivergenceError("non-monotone nu ladder");
  rep.largest_nu = rep.ladder.back().nu;

  const double n1 = rep.ladder[m - 3].nu, n2 = rep.ladder[m - 2].nu, n3 = rep.ladder[m - 1].nu;
  const double k1 = rep.ladder[m - 3].k_gain, k2 = rep.ladder[m - 2].k_gain,
               k3 = rep.ladder[m - 1].k_gain;
  const double d1 = n2 - n1, d2 = n3 - n2;
  double extrap;
  double ratio = d1 > 0.0 ? d2 / d1 : -1.0;
  const double geo = k3 / k2;
  if (ratio > 0.0 && ratio < 1.0 && std::abs(k2 / k1 - geo) < 1e-9 * geo) {
    rep.order = -std::log(ratio) / std::log(geo);
    extrap = n3 + d2 * ratio / (1.0 - ratio);
  } else {
    rep.order = 1.0;
    extrap = n3 + d2 / (k3 / k2 - 1.0);
  }
  rep.lambda_star = std::max(extrap, rep.largest_nu);
  for (const auto& e : rep.ladder)
    rep.below_extrapolant = rep.below_extrapolant && e.nu <= rep.lambda_star + tol;
  rep.complement_volume = mask.complement_volume();
  rep.rfk_printed = rfk_bound(rep.complement_volume, mask.grid().d);
  rep.rfk_scaled = rfk_bound_scaled(rep.complement_volume, mask.grid().d, p.mu, p.alpha);
  return rep;
}

double bessel_j_series(double nu, double x) {
  const double h = 0.5 * x;
  double term = std::pow(h, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -h * h / (m * (m + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_first_zero(double nu) {
  if (nu < 0.0) throw std::invalid_argument("order must be nonnegative");
  double a = 1e-3, fa = bessel_j_series(nu, a);
  double b = a;
  for (;;) {
    b = a + 0.05;
    const double fb = bessel_j_series(nu, b);
    if (fa * fb <= 0.0) break;
    a = b;
    fa = fb;
    if (a > 100.0) throw Error("no Bessel zero bracket found");
  }
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double c = 0.5 * (a + b);
    const double fc = bessel_j_series(nu, c);
    if (fa * fc <= 0.0) {
      b = c;
    } else {
      a = c;
      fa = fc;
    }
  }
  return 0.5 * (a + b);
}

namespace {
double unit_ball_volume(int d) {
  if (d == 2) return std::numbers::pi;
  if (d == 3) return 4.0 * std::numbers::pi / 3.0;
  throw std::invalid_argument("dimension must be 2 or 3");
}
}  // namespace

double rfk_bound(double volume, int d) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  return std::pow(unit_ball_volume(d) / volume, 2.0 / d) * bessel_first_zero(d / 2.0 - 1.0);
}

double rfk_bound_scaled(double volume, int d, double mu, double alpha) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  const double j = bessel_first_zero(d / 2.0 - 1.0);
  return mu * std::pow(unit_ball_volume(d) / volume, 2.0 / d) * j * j + alpha;
}

ProportionalDecay proportional_decay_constant(double lambda, const PhysicalParams& p, double eps) {
  if (!p.supercritical()) throw RegimeError("proportional decay constant needs r > 3");
  ProportionalDecay out;
  out.varrho_star = eta1(p);
  if (p.gamma != 0.0) {
    const double r = p.r, q = p.q, g = std::abs(p.gamma);
    const double base = std::pow(2.0, q) * q * g * (q - 1.0) / (p.beta * (r - 1.0));
    out.varrho1_star = std::pow(base / 2.0, (q - 1.0) / (r - q)) * (r - q) / (r - 1.0);
    out.varrho2_star = std::pow(base, (q - 1.0) / (r - q)) * (r - q) / (r - 1.0);
  }
  out.delta = lambda - eps - out.varrho_star - out.varrho1_star - out.varrho2_star;
  out.positive = out.delta > 0.0;
  return out;
}

}  // namespace cbfed
