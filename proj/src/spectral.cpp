// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "cbfed/errors.hpp"
#include "cbfed/fft.hpp"
#include "cbfed/rng.hpp"

namespace cbfed {

// ---- SpectralField / PhysicalField -----------------------------------------

SpectralField::SpectralField(const TorusGrid& g, bool solenoidal)
    : grid_(g), modes_(g.points()), data_(g.points() * g.d), solenoidal_(solenoidal) {}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  solenoidal_ = solenoidal_ && o.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  solenoidal_ = solenoidal_ && o.solenoidal_;
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& v : data_) v *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  require_same_grid(*this, x);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  solenoidal_ = solenoidal_ && x.solenoidal_;
  return *this;
}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), Complex(0.0, 0.0)); }

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

PhysicalField::PhysicalField(int d_, int m_, double length_) : d(d_), m(m_), length(length_) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
  comp.assign(d, std::vector<double>(total, 0.0));
}

// ---- transforms --------------------------------------------------------------

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// For each n-grid mode, its slot on the m-grid (kNone for Nyquist).
const std::vector<std::size_t>& pad_map(int d, int n, int m) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<std::size_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, n, m}];
  if (!slot) {
    const WaveTable& wt = wave_table(d, n);
    auto v = std::make_unique<std::vector<std::size_t>>(wt.k.size());
    for (std::size_t i = 0; i < wt.k.size(); ++i)
      (*v)[i] = wt.nyquist[i] ? kNone : flat_index(wt.k[i], d, m);
    slot = std::move(v);
  }
  return *slot;
}

std::size_t power(int m, int d) {
  std::size_t t = 1;
  for (int i = 0; i < d; ++i) t *= static_cast<std::size_t>(m);
  return t;
}

void check_m(const TorusGrid& g, int m) {
  if (m < g.n || m % 2 != 0) throw std::invalid_argument("evaluation grid must be even and >= n");
}

}  // namespace

int oversampled_size(int n, double factor) {
  int m = static_cast<int>(std::ceil(factor * n - 1e-9));
  if (m % 2) ++m;
  return std::max(m, n);
}

PhysicalField to_physical(const SpectralField& u, int m) {
  const TorusGrid& g = u.grid();
  check_m(g, m);
  const auto& map = pad_map(g.d, g.n, m);
  PhysicalField out(g.d, m, g.length);
  std::vector<Complex> buf(power(m, g.d));
  for (int c = 0; c < g.d; ++c) {
    std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
    const Complex* src = u.component(c);
    for (std::size_t i = 0; i < map.size(); ++i)
      if (map[i] != kNone) buf[map[i]] = src[i];
    fft::backward(buf, g.d, m);
    auto& dst = out.comp[c];
    for (std::size_t j = 0; j < buf.size(); ++j) dst[j] = buf[j].real();
  }
  return out;
}

std::vector<PhysicalField> gradient_physical(const SpectralField& u, int m) {
  const TorusGrid& g = u.grid();
  check_m(g, m);
  const auto& map = pad_map(g.d, g.n, m);
  const WaveTable& wt = wave_table(g.d, g.n);
  const double ks = g.kscale();
  std::vector<PhysicalField> out;
  std::vector<Complex> buf(power(m, g.d));
  for (int c = 0; c < g.d; ++c) {
    PhysicalField grad(g.d, m, g.length);
    const Complex* src = u.component(c);
    for (int a = 0; a < g.d; ++a) {
      std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
      for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] != kNone) buf[map[i]] = src[i] * Complex(0.0, ks * wt.k[i][a]);
      fft::backward(buf, g.d, m);
      for (std::size_t j = 0; j < buf.size(); ++j) grad.comp[a][j] = buf[j].real();
    }
    out.push_back(std::move(grad));
  }
  return out;
}

SpectralField from_physical(const PhysicalField& u, const TorusGrid& g) {
  if (u.d != g.d || u.length != g.length) throw std::invalid_argument("shape mismatch");
  check_m(g, u.m);
  if (u.comp.size() != static_cast<std::size_t>(g.d) || u.points() != power(u.m, g.d))
    throw std::invalid_argument("shape mismatch");
  const auto& map = pad_map(g.d, g.n, u.m);
  SpectralField out(g);
  std::vector<Complex> buf(power(u.m, g.d));
  const double scale = 1.0 / static_cast<double>(buf.size());
  for (int c = 0; c < g.d; ++c) {
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = Complex(u.comp[c][j], 0.0);
    fft::forward(buf, g.d, u.m);
    Complex* dst = out.component(c);
    for (std::size_t i = 0; i < map.size(); ++i)
      dst[i] = map[i] == kNone ? Complex(0.0, 0.0) : buf[map[i]] * scale;
  }
  return out;
}

SpectralField transform_forward(const TorusGrid& g, const PhysicalField& u) {
  if (u.m != g.n) throw std::invalid_argument("shape mismatch");
  return from_physical(u, g);
}

PhysicalField transform_inverse(const SpectralField& u) { return to_physical(u, u.grid().n); }

double max_imag_physical(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  std::vector<Complex> buf(g.points());
  double worst = 0.0;
  for (int c = 0; c < g.d; ++c) {
    std::copy(u.component(c), u.component(c) + g.points(), buf.begin());
    fft::backward(buf, g.d, g.n);
    for (const auto& v : buf) worst = std::max(worst, std::abs(v.imag()));
  }
  return worst;
}

// ---- linear operators ---------------------------------------------------------

SpectralField leray_project(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  SpectralField out = u;
  for (std::size_t i = 0; i < wt.k.size(); ++i) {
    if (wt.k2[i] == 0.0) continue;
    Complex dot(0.0, 0.0);
    for (int a = 0; a < g.d; ++a) dot += double(wt.k[i][a]) * u.at(a, i);
    dot /= wt.k2[i];
    for (int a = 0; a < g.d; ++a) out.at(a, i) -= double(wt.k[i][a]) * dot;
  }
  out.set_solenoidal(true);
  return out;
}

namespace {
template <class F>
SpectralField diagonal(const SpectralField& u, F factor) {
  const TorusGrid& g = u.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  SpectralField out = u;
  for (std::size_t i = 0; i < wt.k.size(); ++i) {
    double s = factor(wt.k2[i]);
    for (int a = 0; a < g.d; ++a) out.at(a, i) *= s;
  }
  return out;
}
}  // namespace

SpectralField stokes_apply(const SpectralField& u) {
  const double ks2 = std::pow(u.grid().kscale(), 2);
  return diagonal(u, [ks2](double k2) { return ks2 * k2; });
}

SpectralField script_a_apply(const SpectralField& u) {
  const double ks2 = std::pow(u.grid().kscale(), 2);
  return diagonal(u, [ks2](double k2) { return 1.0 + ks2 * k2; });
}

SpectralField resolvent(const SpectralField& u, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent parameter must be positive");
  const double ks2 = std::pow(u.grid().kscale(), 2);
  return diagonal(u, [ks2, lambda](double k2) { return 1.0 / (1.0 + lambda * ks2 * k2); });
}

SpectralField band_limit(const SpectralField& u, int kmax) {
  const TorusGrid& g = u.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  SpectralField out = u;
  for (std::size_t i = 0; i < wt.k.size(); ++i) {
    bool keep = true;
    for (int a = 0; a < g.d; ++a) keep = keep && std::abs(wt.k[i][a]) <= kmax;
    if (!keep)
      for (int a = 0; a < g.d; ++a) out.at(a, i) = 0.0;
  }
  return out;
}

// ---- norms ----------------------------------------------------------------------

double inner_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  double s = 0.0;
  const auto& a = u.data();
  const auto& b = v.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s * u.grid().volume();
}

double norm_h(const SpectralField& u) { return std::sqrt(inner_product(u, u)); }

double norm_grad(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  double s = 0.0;
  for (int a = 0; a < g.d; ++a)
    for (std::size_t i = 0; i < wt.k.size(); ++i) s += wt.k2[i] * std::norm(u.at(a, i));
  return std::sqrt(s * g.volume()) * g.kscale();
}

double norm_v(const SpectralField& u) { return std::hypot(norm_h(u), norm_grad(u)); }

int lp_quadrature_size(int n, double p) {
  double factor = std::clamp(std::ceil(p / 2.0), 1.0, 4.0);
  return oversampled_size(n, factor);
}

double norm_lp(const SpectralField& u, double p, int m) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  const TorusGrid& g = u.grid();
  if (m == 0) m = lp_quadrature_size(g.n, p);
  PhysicalField ph = to_physical(u, m);
  double s = 0.0;
  for (std::size_t j = 0; j < ph.points(); ++j) {
    double a2 = 0.0;
    for (int c = 0; c < g.d; ++c) a2 += ph.comp[c][j] * ph.comp[c][j];
    s += std::pow(a2, 0.5 * p);
  }
  s *= g.volume() / static_cast<double>(ph.points());
  return std::pow(s, 1.0 / p);
}

double divergence_max(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  double worst = 0.0;
  for (std::size_t i = 0; i < wt.k.size(); ++i) {
    Complex dot(0.0, 0.0);
    for (int a = 0; a < g.d; ++a) dot += double(wt.k[i][a]) * u.at(a, i);
    worst = std::max(worst, std::abs(dot));
  }
  return worst;
}

// ---- eigenbasis -----------------------------------------------------------------

namespace {

bool upper_half(const IVec& k, int d) {
  for (int a = 0; a < d; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;
}

// d-1 unit vectors perpendicular to k: reference axes ordered by |k_hat_a|,
// the most k-aligned axis dropped, then Gram-Schmidt in axis order.
std::vector<std::array<double, 3>> polarizations(const IVec& k, int d) {
  double kn = 0.0;
  for (int a = 0; a < d; ++a) kn += double(k[a]) * k[a];
  kn = std::sqrt(kn);
  std::array<double, 3> kh{0, 0, 0};
  for (int a = 0; a < d; ++a) kh[a] = k[a] / kn;
  std::vector<int> axes(d);
  for (int a = 0; a < d; ++a) axes[a] = a;
  std::stable_sort(axes.begin(), axes.end(),
                   [&](int x, int y) { return std::abs(kh[x]) < std::abs(kh[y]); });
  axes.resize(d - 1);
  std::sort(axes.begin(), axes.end());
  std::vector<std::array<double, 3>> out;
  for (int ax : axes) {
    std::array<double, 3> v{0, 0, 0};
    v[ax] = 1.0;
    auto remove = [&](const std::array<double, 3>& w) {
      double dot = 0.0;
      for (int a = 0; a < d; ++a) dot += v[a] * w[a];
      for (int a = 0; a < d; ++a) v[a] -= dot * w[a];
    };
    remove(kh);
    for (const auto& p : out) remove(p);
    double nv = 0.0;
    for (int a = 0; a < d; ++a) nv += v[a] * v[a];
    nv = std::sqrt(nv);
    for (int a = 0; a < d; ++a) v[a] /= nv;
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<EigenMode> eigenbasis(int n, const TorusGrid& g) {
  if (n < 1) throw std::invalid_argument("eigenbasis needs n >= 1");
  const WaveTable& wt = wave_table(g.d, g.n);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < wt.k.size(); ++i)
    if (!wt.nyquist[i] && upper_half(wt.k[i], g.d)) reps.push_back(i);
  std::sort(reps.begin(), reps.end(), [&](std::size_t x, std::size_t y) {
    if (wt.k2[x] != wt.k2[y]) return wt.k2[x] < wt.k2[y];
    return wt.k[x] < wt.k[y];
  });
  const std::size_t capacity = g.d + reps.size() * 2 * (g.d - 1);
  if (static_cast<std::size_t>(n) > capacity)
    throw std::invalid_argument("requested more eigenmodes than the grid resolves");

  const double amp = std::sqrt(2.0 / g.volume());
  const double ks2 = g.kscale() * g.kscale();
  std::vector<EigenMode> out;
  out.reserve(n);
  for (int c = 0; c < g.d && static_cast<int>(out.size()) < n; ++c) {
    EigenMode m;
    m.polarization[c] = 1.0;
    m.field = SpectralField(g, true);
    m.field.at(c, 0) = 1.0 / std::sqrt(g.volume());
    out.push_back(std::move(m));
  }
  for (std::size_t r = 0; r < reps.size() && static_cast<int>(out.size()) < n; ++r) {
    const std::size_t i = reps[r];
    const IVec k = wt.k[i];
    IVec mk{-k[0], -k[1], -k[2]};
    const std::size_t j = flat_index(mk, g.d, g.n);
    const auto pols = polarizations(k, g.d);
    for (Phase ph : {Phase::Sine, Phase::Cosine}) {
      for (const auto& p : pols) {
        if (static_cast<int>(out.size()) >= n) break;
        EigenMode m;
        m.k = k;
        m.polarization = p;
        m.phase = ph;
        m.lambda = 1.0 + ks2 * wt.k2[i];
        m.field = SpectralField(g, true);
        for (int a = 0; a < g.d; ++a) {
          if (ph == Phase::Sine) {
            m.field.at(a, i) = Complex(0.0, -0.5 * amp * p[a]);
            m.field.at(a, j) = Complex(0.0, 0.5 * amp * p[a]);
          } else {
            m.field.at(a, i) = 0.5 * amp * p[a];
            m.field.at(a, j) = 0.5 * amp * p[a];
          }
        }
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

// ---- random fields ----------------------------------------------------------------

SpectralField random_solenoidal(const TorusGrid& g, std::uint64_t seed, double s, int kmax) {
  if (!(s > 0.0)) throw std::invalid_argument("spectral decay exponent must be positive");
  const WaveTable& wt = wave_table(g.d, g.n);
  SpectralField u(g);
  for (std::size_t i = 0; i < wt.k.size(); ++i) {
    if (wt.nyquist[i]) continue;
    const IVec& k = wt.k[i];
    bool inside = true;
    for (int a = 0; a < g.d; ++a) inside = inside && (kmax < 0 || std::abs(k[a]) <= kmax);
    if (!inside) continue;
    const bool zero = wt.k2[i] == 0.0;
    const bool upper = zero || upper_half(k, g.d);
    IVec kc = upper ? k : IVec{-k[0], -k[1], -k[2]};
    const double scale = std::pow(1.0 + wt.k2[i], -0.5 * s);
    for (int c = 0; c < g.d; ++c) {
      std::uint64_t key = static_cast<std::uint64_t>(kc[0] + 1024);
      key = key * 2048 + static_cast<std::uint64_t>(kc[1] + 1024);
      key = key * 2048 + static_cast<std::uint64_t>(kc[2] + 1024);
      key = key * 4 + static_cast<std::uint64_t>(c);
      double re = counter_gaussian(seed, 2 * key);
      double im = zero ? 0.0 : counter_gaussian(seed, 2 * key + 1);
      Complex v(re * scale, im * scale);
      u.at(c, i) = upper ? v : std::conj(v);
    }
  }
  return leray_project(u);
}

}  // namespace cbfed
