// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace cbfed::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// FFTW planning is not thread safe; plans are created once under a lock and
// executed through the new-array interface.
std::mutex g_mu;

PlanPair& plans(int d, int m) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(g_mu);
  auto& p = cache[{d, m}];
  if (!p.fwd) {
    int dims[3] = {m, m, m};
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= m;
    fftw_complex* buf = fftw_alloc_complex(total);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft(d, dims, buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft(d, dims, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw planning failed");
  }
  return p;
}

void run(std::vector<std::complex<double>>& a, int d, int m, bool fwd) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= m;
  if (a.size() != total) throw std::invalid_argument("fft buffer size mismatch");
  PlanPair& p = plans(d, m);
  auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(fwd ? p.fwd : p.bwd, ptr, ptr);
}

}  // namespace

void forward(std::vector<std::complex<double>>& a, int d, int m) { run(a, d, m, true); }
void backward(std::vector<std::complex<double>>& a, int d, int m) { run(a, d, m, false); }

}  // namespace cbfed::fft
