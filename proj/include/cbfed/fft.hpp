// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace cbfed::fft {

// In-place unnormalized transforms of an m^d array (row-major).
// forward uses exp(-i...), backward exp(+i...).
void forward(std::vector<std::complex<double>>& a, int d, int m);
void backward(std::vector<std::complex<double>>& a, int d, int m);

}  // namespace cbfed::fft
