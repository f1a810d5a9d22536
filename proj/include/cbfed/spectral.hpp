// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cbfed/field.hpp"
#include "cbfed/grid.hpp"

namespace cbfed {

// Smallest even m >= factor * n.
int oversampled_size(int n, double factor);

// Samples on the grid nodes and back. transform_forward zeroes the Nyquist plane.
SpectralField transform_forward(const TorusGrid& g, const PhysicalField& u);
PhysicalField transform_inverse(const SpectralField& u);

// Evaluate on a finer m^d node grid (m >= n, even) by zero padding, and the
// truncating inverse of that.
PhysicalField to_physical(const SpectralField& u, int m);
SpectralField from_physical(const PhysicalField& u, const TorusGrid& g);

// grad[c].comp[a] = d u_c / d x_a sampled on the m^d grid.
std::vector<PhysicalField> gradient_physical(const SpectralField& u, int m);

SpectralField leray_project(const SpectralField& u);
SpectralField stokes_apply(const SpectralField& u);
SpectralField script_a_apply(const SpectralField& u);
SpectralField resolvent(const SpectralField& u, double lambda);

double inner_product(const SpectralField& u, const SpectralField& v);
double norm_h(const SpectralField& u);
double norm_grad(const SpectralField& u);  // ||grad u||_H
double norm_v(const SpectralField& u);
// Rectangle rule on an m^d node grid; m = 0 picks an oversampled grid that
// integrates |u|^p exactly for band-limited u when p is an even integer <= 8.
double norm_lp(const SpectralField& u, double p, int m = 0);
int lp_quadrature_size(int n, double p);

// max_k |k . c_k| with integer k.
double divergence_max(const SpectralField& u);
// max |Im u(x_j)| over the grid nodes (reality check).
double max_imag_physical(const SpectralField& u);

// Truncate to |k_i| <= kmax.
SpectralField band_limit(const SpectralField& u, int kmax);

enum class Phase { Sine = 0, Cosine = 1, Constant = 2 };

struct EigenMode {
  IVec k{0, 0, 0};
  std::array<double, 3> polarization{0, 0, 0};
  Phase phase = Phase::Constant;
  double lambda = 1.0;  // eigenvalue of I + A
  SpectralField field;
};

// First n orthonormal divergence-free eigenfunctions of I + A.
std::vector<EigenMode> eigenbasis(int n, const TorusGrid& g);

// Deterministic per seed. kmax < 0 means the full resolved band.
SpectralField random_solenoidal(const TorusGrid& g, std::uint64_t seed, double s,
                                int kmax = -1);

void require_same_grid(const SpectralField& a, const SpectralField& b);

}  // namespace cbfed
