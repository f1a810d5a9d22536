// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbfed/errors.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {

// ---- controllers ----------------------------------------------------------------

SpectralField theta_control(const SpectralField& z, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  SpectralField out = z;
  out *= -theta;
  return out;
}

Controller make_theta_controller(double theta) {
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  return [theta](const SpectralField& z) { return theta_control(z, theta); };
}

SpectralField proportional_control(const SpectralField& z, double k_gain, const DomainMask& mask) {
  if (!(k_gain > 0.0)) throw std::invalid_argument("gain must be positive");
  SpectralField out = leray_project(mask.apply(z));
  out *= -k_gain;
  return out;
}

Controller make_proportional_controller(double k_gain, const DomainMask& mask) {
  if (!(k_gain > 0.0)) throw ConfigError("gain must be positive");
  return [k_gain, mask](const SpectralField& z) { return proportional_control(z, k_gain, mask); };
}

// ---- decay fit -------------------------------------------------------------------

DecayFit decay_rate_fit(const std::vector<double>& t, const std::vector<double>& norms,
                        double window_fraction, double delta_claim, double tol) {
  if (t.size() != norms.size() || t.empty()) throw std::invalid_argument("bad trajectory");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("window fraction must lie in (0, 1]");
  DecayFit fit;
  fit.delta_claim = delta_claim;
  const double t0 = t.front(), t1 = t.back();
  fit.window_start = t1 - window_fraction * (t1 - t0);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < fit.window_start - 1e-12 * std::max(1.0, std::abs(t1))) continue;
    if (!(norms[i] >= 1e-300)) continue;
    xs.push_back(t[i]);
    ys.push_back(-std::log(norms[i]));
  }
  fit.samples = static_cast<int>(xs.size());
  if (fit.samples < 10) throw std::invalid_argument("decay fit needs >= 10 samples in the window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.delta_fit = sxy / sxx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;

  fit.pointwise_ok = true;
  fit.worst_ratio = 0.0;
  const double z0 = norms.front();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(norms[i] >= 1e-300)) continue;
    const double bound = std::exp(-delta_claim * (t[i] - t0)) * z0;
    const double ratio = norms[i] / bound;
    fit.worst_ratio = std::max(fit.worst_ratio, ratio);
    if (norms[i] > (1.0 + tol) * bound) fit.pointwise_ok = false;
  }
  return fit;
}

}  // namespace cbfed
