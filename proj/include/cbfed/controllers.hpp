// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cbfed/constants.hpp"
#include "cbfed/field.hpp"
#include "cbfed/integrator.hpp"
#include "cbfed/mask.hpp"

namespace cbfed {

// -theta z. The -dI_K part is handled by the integrator's projection step.
SpectralField theta_control(const SpectralField& z, double theta);
Controller make_theta_controller(double theta);

// -k P(m z)
SpectralField proportional_control(const SpectralField& z, double k_gain, const DomainMask& mask);
Controller make_proportional_controller(double k_gain, const DomainMask& mask);

struct DecayFit {
  double delta_fit = 0.0;
  double r2 = 0.0;
  double delta_claim = 0.0;
  bool pointwise_ok = false;
  double worst_ratio = 0.0;  // max_t |z(t)| / (e^{-delta_claim t} |z(0)|)
  double window_start = 0.0;
  int samples = 0;
};

// Least-squares slope of -log|z| over the trailing window fraction, plus the
// pointwise check |z(t)| <= (1 + tol) e^{-delta_claim t} |z(0)|.
// Norms below 1e-300 are dropped.
DecayFit decay_rate_fit(const std::vector<double>& t, const std::vector<double>& norms,
                        double window_fraction, double delta_claim, double tol = 0.0);

}  // namespace cbfed
