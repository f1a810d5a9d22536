// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cbfed/field.hpp"
#include "cbfed/params.hpp"

namespace cbfed {

// Evaluation grids: 3/2 padding for the quadratic convective product,
// min(ceil((p+1)/2), 4) times n for |y|^{p-1} y.
int convective_size(int n);
int power_size(int n, double p);

// (y.grad) z truncated to the resolved band, no projection.
SpectralField advection(const SpectralField& y, const SpectralField& z);
// P[(y.grad) y] and the bilinear P[(y.grad) z].
SpectralField convective(const SpectralField& y);
SpectralField convective_pair(const SpectralField& y, const SpectralField& z);
// b(y, z, w) = int (y.grad) z . w
double trilinear(const SpectralField& y, const SpectralField& z, const SpectralField& w);

// |y|^{p-1} y, with or without the Leray projection.
SpectralField power_field(const SpectralField& y, double p);
SpectralField power_damping(const SpectralField& y, double p);

// P of the first and (symmetric) second Gateaux derivative of |y|^{p-1} y.
SpectralField gateaux_first(const SpectralField& y, const SpectralField& z, double p);
SpectralField gateaux_second(const SpectralField& y, const SpectralField& z,
                             const SpectralField& w, double p);

// Pointwise second derivative of |y|^{p-1} y applied to (z, w) at one node.
void power_second_pointwise(const double* y, const double* z, const double* w, double p, int d,
                            double* out);

// Operators shifted about an equilibrium: F~(z) = F(z + y_e) - F(y_e).
// The y_e terms are cached.
class ShiftedOperators {
 public:
  ShiftedOperators(const SpectralField& y_e, const PhysicalParams& p);

  SpectralField b(const SpectralField& z) const;
  SpectralField c1(const SpectralField& z) const;
  SpectralField c2(const SpectralField& z) const;
  // B~ + beta C1~ + gamma C2~ (zero terms skipped).
  SpectralField total(const SpectralField& z) const;
  const SpectralField& equilibrium() const { return ye_; }

 private:
  SpectralField ye_;
  PhysicalParams p_;
  bool ye_zero_;
  SpectralField b_ye_, c1_ye_, c2_ye_;
};

// Relative residual of the torus identity
// int (-Lap y).|y|^{r-1} y = int |grad y|^2 |y|^{r-1} + 4(r-1)/(r+1)^2 int |grad |y|^{(r+1)/2}|^2.
double power_laplacian_identity_residual(const SpectralField& y, double r);

}  // namespace cbfed
