// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace cbfed {

using IVec = std::array<int, 3>;  // unused trailing entries are 0

// Periodic box [0, L]^d sampled with N points per axis.
struct TorusGrid {
  int d = 2;
  int n = 32;
  double length = 6.283185307179586;

  TorusGrid() = default;
  TorusGrid(int d_, int n_, double length_);

  std::size_t points() const;  // n^d
  double volume() const;       // L^d
  double kscale() const;       // 2 pi / L

  bool operator==(const TorusGrid& o) const {
    return d == o.d && n == o.n && length == o.length;
  }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

// Index j in [0, m) of an FFT axis of length m -> signed wavenumber.
inline int signed_wavenumber(int j, int m) { return j <= m / 2 - 1 ? j : j - m; }

// Per-grid lookup of wavevectors in FFT storage order (row-major, axis 0 slowest).
struct WaveTable {
  std::vector<IVec> k;
  std::vector<double> k2;        // |k|^2 (integer units)
  std::vector<unsigned char> nyquist;  // any |k_i| == n/2
};

const WaveTable& wave_table(int d, int n);

// Flat index of wavevector k on an m^d FFT array.
std::size_t flat_index(const IVec& k, int d, int m);

}  // namespace cbfed
