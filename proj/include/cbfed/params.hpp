// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace cbfed {

// Coefficients of the damped, pumped Navier-Stokes model:
// y_t + mu A y + B(y) + alpha y + beta |y|^{r-1} y + gamma |y|^{q-1} y = f.
struct PhysicalParams {
  double mu = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  double r = 3.0;
  double q = 2.0;

  void validate() const;  // throws ConfigError
  bool supercritical() const { return r > 3.0; }
  // r = 3 with 2 beta mu > 1.
  bool critical() const { return r == 3.0 && 2.0 * beta * mu > 1.0; }
  bool pumping() const { return gamma != 0.0; }
};

}  // namespace cbfed
