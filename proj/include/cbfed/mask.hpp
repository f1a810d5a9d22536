// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "cbfed/field.hpp"

namespace cbfed {

// Axis-aligned box [lo, hi) in physical coordinates.
struct Box {
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{0, 0, 0};
};

// Indicator m of the control region Omega (a union of boxes) on the grid nodes.
class DomainMask {
 public:
  DomainMask(const TorusGrid& g, std::vector<Box> boxes);
  static DomainMask full(const TorusGrid& g);
  static DomainMask none(const TorusGrid& g);
  // Omega = torus minus the slab {x_axis < width}.
  static DomainMask strip_complement(const TorusGrid& g, int axis, double width);

  const TorusGrid& grid() const { return grid_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  const std::vector<double>& nodal() const { return m_; }
  double omega_volume() const;
  double complement_volume() const;  // |Q~|, node-count measure
  bool is_full() const;

  // Truncated transform of m z sampled on the grid nodes (not projected).
  SpectralField apply(const SpectralField& z) const;

 private:
  TorusGrid grid_;
  std::vector<Box> boxes_;
  std::vector<double> m_;
};

}  // namespace cbfed
