// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cbfed/grid.hpp"

namespace cbfed {

using Complex = std::complex<double>;

// Fourier coefficients of a real vector field, u(x) = sum_k c_k exp(2 pi i k.x / L).
// Storage is component-major, each component in FFT order on the n^d grid.
// The Nyquist plane is always zero.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const TorusGrid& g, bool solenoidal = false);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.d; }
  std::size_t modes() const { return modes_; }

  Complex& at(int c, std::size_t i) { return data_[c * modes_ + i]; }
  const Complex& at(int c, std::size_t i) const { return data_[c * modes_ + i]; }
  Complex* component(int c) { return data_.data() + c * modes_; }
  const Complex* component(int c) const { return data_.data() + c * modes_; }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  bool solenoidal() const { return solenoidal_; }
  void set_solenoidal(bool s) { solenoidal_ = s; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  SpectralField& axpy(double a, const SpectralField& x);  // this += a x
  void set_zero();

 private:
  TorusGrid grid_;
  std::size_t modes_ = 0;
  std::vector<Complex> data_;
  bool solenoidal_ = false;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Real samples of a vector field on an m^d node grid, x_j = j L / m.
struct PhysicalField {
  int d = 2;
  int m = 0;
  double length = 0.0;
  std::vector<std::vector<double>> comp;

  PhysicalField() = default;
  PhysicalField(int d_, int m_, double length_);
  std::size_t points() const { return comp.empty() ? 0 : comp[0].size(); }
};

}  // namespace cbfed
