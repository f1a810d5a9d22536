// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "cbfed/errors.hpp"

namespace cbfed {

TorusGrid::TorusGrid(int d_, int n_, double length_) : d(d_), n(n_), length(length_) {
  if (d != 2 && d != 3) throw ConfigError("grid dimension must be 2 or 3");
  if (n < 4 || n % 2 != 0) throw ConfigError("grid size must be even and >= 4");
  if (!(length > 0.0)) throw ConfigError("grid period must be positive");
}

std::size_t TorusGrid::points() const {
  std::size_t p = 1;
  for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
  return p;
}

double TorusGrid::volume() const { return std::pow(length, d); }

double TorusGrid::kscale() const { return 2.0 * std::numbers::pi / length; }

const WaveTable& wave_table(int d, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<WaveTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, n}];
  if (!slot) {
    auto t = std::make_unique<WaveTable>();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    t->k.resize(total);
    t->k2.resize(total);
    t->nyquist.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      IVec k{0, 0, 0};
      std::size_t rem = idx;
      bool nyq = false;
      for (int a = d - 1; a >= 0; --a) {
        int j = static_cast<int>(rem % n);
        rem /= n;
        k[a] = signed_wavenumber(j, n);
        if (j == n / 2) nyq = true;
      }
      t->k[idx] = k;
      t->k2[idx] = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
      t->nyquist[idx] = nyq ? 1 : 0;
    }
    slot = std::move(t);
  }
  return *slot;
}

std::size_t flat_index(const IVec& k, int d, int m) {
  std::size_t idx = 0;
  for (int a = 0; a < d; ++a) {
    int j = k[a] >= 0 ? k[a] : k[a] + m;
    idx = idx * m + static_cast<std::size_t>(j);
  }
  return idx;
}

}  // namespace cbfed
