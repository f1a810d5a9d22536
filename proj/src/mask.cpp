// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/mask.hpp"

#include <algorithm>
#include <stdexcept>

#include "cbfed/errors.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {

DomainMask::DomainMask(const TorusGrid& g, std::vector<Box> boxes)
    : grid_(g), boxes_(std::move(boxes)), m_(g.points(), 0.0) {
  const double h = g.length / g.n;
  for (std::size_t idx = 0; idx < m_.size(); ++idx) {
    std::array<double, 3> x{0, 0, 0};
    std::size_t rem = idx;
    for (int a = g.d - 1; a >= 0; --a) {
      x[a] = static_cast<double>(rem % g.n) * h;
      rem /= g.n;
    }
    for (const Box& b : boxes_) {
      bool in = true;
      for (int a = 0; a < g.d; ++a) in = in && x[a] >= b.lo[a] && x[a] < b.hi[a];
      if (in) {
        m_[idx] = 1.0;
        break;
      }
    }
  }
}

DomainMask DomainMask::full(const TorusGrid& g) {
  Box b;
  for (int a = 0; a < g.d; ++a) b.hi[a] = g.length * 2.0;
  return DomainMask(g, {b});
}

DomainMask DomainMask::none(const TorusGrid& g) { return DomainMask(g, {}); }

DomainMask DomainMask::strip_complement(const TorusGrid& g, int axis, double width) {
  if (axis < 0 || axis >= g.d) throw ConfigError("strip axis out of range");
  if (!(width > 0.0 && width < g.length)) throw ConfigError("strip width must lie in (0, L)");
  Box b;
  for (int a = 0; a < g.d; ++a) b.hi[a] = g.length * 2.0;
  b.lo[axis] = width;
  return DomainMask(g, {b});
}

double DomainMask::omega_volume() const {
  double s = 0.0;
  for (double v : m_) s += v;
  return s / static_cast<double>(m_.size()) * grid_.volume();
}

double DomainMask::complement_volume() const { return grid_.volume() - omega_volume(); }

bool DomainMask::is_full() const {
  return std::all_of(m_.begin(), m_.end(), [](double v) { return v == 1.0; });
}

SpectralField DomainMask::apply(const SpectralField& z) const {
  if (z.grid() != grid_) throw std::invalid_argument("grid mismatch");
  PhysicalField ph = transform_inverse(z);
  for (auto& c : ph.comp)
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= m_[j];
  return transform_forward(grid_, ph);
}

}  // namespace cbfed
