// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/params.hpp"

#include <cmath>

#include "cbfed/errors.hpp"

namespace cbfed {

void PhysicalParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(mu) || !finite(alpha) || !finite(beta) || !finite(gamma) || !finite(r) || !finite(q))
    throw ConfigError("physical parameters must be finite");
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
  if (beta < 0.0) throw ConfigError("beta must be nonnegative");
  if (!(r >= 1.0)) throw ConfigError("r must be >= 1");
  if (pumping() && !(q >= 1.0 && q < r)) throw ConfigError("pumping exponent needs 1 <= q < r");
}

}  // namespace cbfed
