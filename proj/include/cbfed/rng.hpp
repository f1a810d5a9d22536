// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cbfed {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so streams are reproducible across platforms and independent of call order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t h = mix64(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ULL));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;  // open interval (0,1)
}

inline double counter_gaussian(std::uint64_t seed, std::uint64_t counter) {
  double u1 = counter_uniform(seed, 2 * counter);
  double u2 = counter_uniform(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(mix64(seed) ^ mix64(stream + 0x1234567ULL)) {}
  double uniform() { return counter_uniform(seed_, counter_++); }
  double gaussian() { return counter_gaussian(seed_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace cbfed
