// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbfed/spectral.hpp"

namespace cbfed {

int convective_size(int n) { return oversampled_size(n, 1.5); }

int power_size(int n, double p) {
  return oversampled_size(n, std::clamp(std::ceil((p + 1.0) / 2.0), 1.0, 4.0));
}

namespace {

// (y.grad) z sampled on the m-grid, truncated back.
SpectralField advect_impl(const SpectralField& y, const SpectralField& z) {
  require_same_grid(y, z);
  const TorusGrid& g = y.grid();
  const int m = convective_size(g.n);
  PhysicalField yp = to_physical(y, m);
  std::vector<PhysicalField> gz = gradient_physical(z, m);
  PhysicalField out(g.d, m, g.length);
  for (int c = 0; c < g.d; ++c) {
    auto& dst = out.comp[c];
    for (int a = 0; a < g.d; ++a) {
      const auto& ya = yp.comp[a];
      const auto& dz = gz[c].comp[a];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += ya[j] * dz[j];
    }
  }
  return from_physical(out, g);
}

inline double dot(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

// Apply a pointwise map f(inputs..., out) on the m-grid and truncate.
template <class F>
SpectralField pointwise(const std::vector<const SpectralField*>& in, int m, F f) {
  const TorusGrid& g = in[0]->grid();
  std::vector<PhysicalField> ph;
  for (const auto* u : in) {
    require_same_grid(*in[0], *u);
    ph.push_back(to_physical(*u, m));
  }
  PhysicalField out(g.d, m, g.length);
  const std::size_t np = out.points();
  double x[3][3];
  double r[3];
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t s = 0; s < ph.size(); ++s)
      for (int c = 0; c < g.d; ++c) x[s][c] = ph[s].comp[c][j];
    for (int c = 0; c < 3; ++c) r[c] = 0.0;
    f(x, r, g.d);
    for (int c = 0; c < g.d; ++c) out.comp[c][j] = r[c];
  }
  return from_physical(out, g);
}

}  // namespace

SpectralField convective_pair(const SpectralField& y, const SpectralField& z) {
  return leray_project(advect_impl(y, z));
}

SpectralField advection(const SpectralField& y, const SpectralField& z) {
  return advect_impl(y, z);
}

SpectralField convective(const SpectralField& y) { return convective_pair(y, y); }

double trilinear(const SpectralField& y, const SpectralField& z, const SpectralField& w) {
  return inner_product(advect_impl(y, z), w);
}

SpectralField power_field(const SpectralField& y, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("power exponent must be >= 1");
  const int m = power_size(y.grid().n, p);
  return pointwise({&y}, m, [p](double (*x)[3], double* r, int d) {
    const double a = std::sqrt(dot(x[0], x[0], d));
    const double s = p == 1.0 ? 1.0 : (a == 0.0 ? 0.0 : std::pow(a, p - 1.0));
    for (int c = 0; c < d; ++c) r[c] = s * x[0][c];
  });
}

SpectralField power_damping(const SpectralField& y, double p) {
  return leray_project(power_field(y, p));
}

SpectralField gateaux_first(const SpectralField& y, const SpectralField& z, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("power exponent must be >= 1");
  const int m = power_size(y.grid().n, p);
  return leray_project(pointwise({&y, &z}, m, [p](double (*x)[3], double* r, int d) {
    const double* yv = x[0];
    const double* zv = x[1];
    const double a = std::sqrt(dot(yv, yv, d));
    if (a == 0.0) {
      if (p == 1.0)
        for (int c = 0; c < d; ++c) r[c] = zv[c];
      return;
    }
    const double s1 = std::pow(a, p - 1.0);
    const double s2 = (p - 1.0) * std::pow(a, p - 3.0) * dot(yv, zv, d);
    for (int c = 0; c < d; ++c) r[c] = s1 * zv[c] + s2 * yv[c];
  }));
}

void power_second_pointwise(const double* yv, const double* zv, const double* wv, double p, int d,
                            double* out) {
  for (int c = 0; c < d; ++c) out[c] = 0.0;
  const double a = std::sqrt(dot(yv, yv, d));
  if (a == 0.0) return;
  const double yz = dot(yv, zv, d), yw = dot(yv, wv, d), zw = dot(zv, wv, d);
  const double s1 = (p - 1.0) * std::pow(a, p - 3.0);
  const double s2 = p == 3.0 ? 0.0 : (p - 1.0) * (p - 3.0) * std::pow(a, p - 5.0) * yz * yw;
  for (int c = 0; c < d; ++c) out[c] = s1 * (yz * wv[c] + yw * zv[c] + zw * yv[c]) + s2 * yv[c];
}

SpectralField gateaux_second(const SpectralField& y, const SpectralField& z,
                             const SpectralField& w, double p) {
  if (p < 3.0) throw std::invalid_argument("second derivative needs p >= 3");
  const int m = power_size(y.grid().n, p);
  return leray_project(pointwise({&y, &z, &w}, m, [p](double (*x)[3], double* r, int d) {
    power_second_pointwise(x[0], x[1], x[2], p, d, r);
  }));
}

// ---- shifted operators ----------------------------------------------------------

ShiftedOperators::ShiftedOperators(const SpectralField& y_e, const PhysicalParams& p)
    : ye_(y_e), p_(p) {
  ye_zero_ = std::all_of(y_e.data().begin(), y_e.data().end(),
                         [](const Complex& c) { return c == Complex(0.0, 0.0); });
  if (!ye_zero_) {
    b_ye_ = convective(ye_);
    if (p_.beta != 0.0) c1_ye_ = power_damping(ye_, p_.r);
    if (p_.gamma != 0.0) c2_ye_ = power_damping(ye_, p_.q);
  }
}

SpectralField ShiftedOperators::b(const SpectralField& z) const {
  if (ye_zero_) return convective(z);
  return convective(z + ye_) - b_ye_;
}

SpectralField ShiftedOperators::c1(const SpectralField& z) const {
  if (ye_zero_) return power_damping(z, p_.r);
  return power_damping(z + ye_, p_.r) - c1_ye_;
}

SpectralField ShiftedOperators::c2(const SpectralField& z) const {
  if (ye_zero_) return power_damping(z, p_.q);
  return power_damping(z + ye_, p_.q) - c2_ye_;
}

SpectralField ShiftedOperators::total(const SpectralField& z) const {
  SpectralField out = b(z);
  if (p_.beta != 0.0) out.axpy(p_.beta, c1(z));
  if (p_.gamma != 0.0) out.axpy(p_.gamma, c2(z));
  return out;
}

// ---- torus identity ---------------------------------------------------------------

double power_laplacian_identity_residual(const SpectralField& y, double r) {
  const TorusGrid& g = y.grid();
  const int m = power_size(g.n, r);
  PhysicalField yp = to_physical(y, m);
  PhysicalField lap = to_physical(stokes_apply(y), m);  // -Lap y
  std::vector<PhysicalField> gy = gradient_physical(y, m);
  double lhs = 0.0, rhs1 = 0.0, rhs2 = 0.0;
  const std::size_t np = yp.points();
  for (std::size_t j = 0; j < np; ++j) {
    double a2 = 0.0;
    for (int c = 0; c < g.d; ++c) a2 += yp.comp[c][j] * yp.comp[c][j];
    const double a = std::sqrt(a2);
    const double ar1 = r == 1.0 ? 1.0 : std::pow(a, r - 1.0);
    double grad2 = 0.0;
    double s[3] = {0, 0, 0};  // sum_c y_c grad y_c
    for (int c = 0; c < g.d; ++c) {
      lhs += lap.comp[c][j] * ar1 * yp.comp[c][j];
      for (int b = 0; b < g.d; ++b) {
        grad2 += gy[c].comp[b][j] * gy[c].comp[b][j];
        s[b] += yp.comp[c][j] * gy[c].comp[b][j];
      }
    }
    rhs1 += grad2 * ar1;
    if (a > 0.0) rhs2 += std::pow(a, r - 3.0) * dot(s, s, g.d);
  }
  // 4(r-1)/(r+1)^2 |grad |y|^{(r+1)/2}|^2 = (r-1) |y|^{r-3} |sum_c y_c grad y_c|^2
  const double rhs = rhs1 + (r - 1.0) * rhs2;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

}  // namespace cbfed
