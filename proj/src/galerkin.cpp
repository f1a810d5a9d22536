// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/galerkin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbfed/errors.hpp"
#include "cbfed/nonlinear.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {
namespace {

// Gauss-Legendre, 8 nodes on [-1, 1].
constexpr double kGaussX[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
constexpr double kGaussW[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};

}  // namespace

// ---- reduction -------------------------------------------------------------------

Eigen::VectorXd GalerkinReduction::Q(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double vij = v[i] * v[j];
      if (vij == 0.0) continue;
      const double* g = &g1[(static_cast<std::size_t>(i) * n + j) * n];
      for (int k = 0; k < n; ++k) out[k] += g[k] * vij;
    }
  return out;
}

Eigen::VectorXd GalerkinReduction::N(const Eigen::VectorXd& v) const {
  const PhysicalParams& p = params;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (p.beta == 0.0 && p.gamma == 0.0) return out;
  const TorusGrid& g = y_e.grid();
  PhysicalField zp = to_physical(lift(v), ye_grid);
  PhysicalField acc(g.d, ye_grid, g.length);
  const std::size_t np = zp.points();
  double yv[3], zv[3], tmp[3];
  for (std::size_t j = 0; j < np; ++j) {
    for (int c = 0; c < g.d; ++c) zv[c] = zp.comp[c][j];
    double sum[3] = {0, 0, 0};
    for (int q = 0; q < 8; ++q) {
      const double x = q < 4 ? -kGaussX[3 - q] : kGaussX[q - 4];
      const double w = q < 4 ? kGaussW[3 - q] : kGaussW[q - 4];
      const double s = 0.5 * (x + 1.0);
      const double weight = 0.5 * w * (1.0 - s);
      for (int c = 0; c < g.d; ++c) yv[c] = ye_nodes[c][j] + s * zv[c];
      if (p.beta != 0.0) {
        power_second_pointwise(yv, zv, zv, p.r, g.d, tmp);
        for (int c = 0; c < g.d; ++c) sum[c] += weight * p.beta * tmp[c];
      }
      if (p.gamma != 0.0) {
        power_second_pointwise(yv, zv, zv, p.q, g.d, tmp);
        for (int c = 0; c < g.d; ++c) sum[c] += weight * p.gamma * tmp[c];
      }
    }
    for (int c = 0; c < g.d; ++c) acc.comp[c][j] = sum[c];
  }
  return restrict(from_physical(acc, g));
}

SpectralField GalerkinReduction::lift(const Eigen::VectorXd& v) const {
  return span->combine(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd GalerkinReduction::restrict(const SpectralField& z) const {
  const auto c = span->coefficients(z);
  return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

GalerkinReduction assemble_reduction(const SpectralField& y_e, int n, const PhysicalParams& p,
                                     const DomainMask& mask) {
  p.validate();
  const TorusGrid& g = y_e.grid();
  if (mask.grid() != g) throw std::invalid_argument("mask grid mismatch");
  if (p.gamma != 0.0 && p.q < 3.0)
    throw RegimeError("reduced remainder needs q >= 3 when pumping is present");
  if (p.beta != 0.0 && p.r < 3.0) throw RegimeError("reduced remainder needs r >= 3");
  GalerkinReduction red;
  red.n = n;
  red.params = p;
  red.y_e = y_e;
  red.span = std::make_shared<EigenSpan>(g, n);
  red.mask = std::make_shared<DomainMask>(mask);
  const auto& modes = red.span->modes();

  red.g1.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SpectralField t = advection(modes[i].field, modes[j].field);
      for (int k = 0; k < n; ++k)
        red.g1[(static_cast<std::size_t>(i) * n + j) * n + k] = inner_product(t, modes[k].field);
    }

  red.h1 = Eigen::MatrixXd::Zero(n, n);
  red.h2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const SpectralField& wi = modes[i].field;
    SpectralField t1 = advection(wi, y_e) + advection(y_e, wi);
    SpectralField t2(g, true);
    if (p.beta != 0.0) t2.axpy(p.beta, gateaux_first(y_e, wi, p.r));
    if (p.gamma != 0.0) t2.axpy(p.gamma, gateaux_first(y_e, wi, p.q));
    for (int k = 0; k < n; ++k) {
      red.h1(i, k) = inner_product(t1, modes[k].field);
      red.h2(i, k) = inner_product(t2, modes[k].field);
    }
  }

  red.Lmat = (red.h1 + red.h2).transpose();
  for (int k = 0; k < n; ++k) red.Lmat(k, k) += p.mu * (modes[k].lambda - 1.0) + p.alpha;

  red.Bmat = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    SpectralField mw = mask.apply(modes[j].field);
    for (int k = 0; k < n; ++k) red.Bmat(k, j) = inner_product(mw, modes[k].field);
  }

  double pmax = 3.0;
  if (p.beta != 0.0) pmax = std::max(pmax, p.r);
  if (p.gamma != 0.0) pmax = std::max(pmax, p.q);
  red.ye_grid = power_size(g.n, pmax);
  red.ye_nodes = to_physical(y_e, red.ye_grid).comp;
  return red;
}

// ---- controllability and gains ------------------------------------------------------

int controllability_rank(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B) {
  const Eigen::Index n = L.rows();
  if (L.cols() != n || B.rows() != n) throw std::invalid_argument("matrix shape mismatch");
  Eigen::MatrixXd K(n, n * B.cols());
  Eigen::MatrixXd blk = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    K.middleCols(i * B.cols(), B.cols()) = blk;
    blk = L * blk;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double thr = static_cast<double>(n) * s[0] * 1e-12;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > thr) ++rank;
  return rank;
}

GainSynthesis verify_gain(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& G, double sigma) {
  GainSynthesis gs;
  gs.G = G;
  gs.sigma = sigma;
  gs.rank = controllability_rank(L, B);
  Eigen::MatrixXd M = L - B * G;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw Error("closed-loop eigensolve failed");
  gs.min_re = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    gs.spectrum.push_back(es.eigenvalues()[i]);
    gs.min_re = std::min(gs.min_re, es.eigenvalues()[i].real());
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
  const auto& s = svd.singularValues();
  gs.m_hat = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : std::numeric_limits<double>::infinity();
  gs.ok = gs.min_re >= sigma - 1e-8;
  return gs;
}

GainSynthesis synthesize_gain(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B, double sigma) {
  const Eigen::Index n = L.rows();
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (controllability_rank(L, B) < n) throw Error("pair is not controllable");
  const Eigen::MatrixXd A = sigma * Eigen::MatrixXd::Identity(n, n) - L;
  const Eigen::MatrixXd S = B * B.transpose();
  Eigen::MatrixXd H(2 * n, 2 * n);
  H << A, -S, -Eigen::MatrixXd::Identity(n, n), -A.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw Error("Riccati: Hamiltonian eigensolve failed");
  Eigen::MatrixXcd X(2 * n, n);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    if (es.eigenvalues()[i].real() < 0.0) {
      if (cols == n) throw Error("Riccati: stable subspace has wrong dimension");
      X.col(cols++) = es.eigenvectors().col(i);
    }
  if (cols != n) throw Error("Riccati: stable subspace has wrong dimension");
  Eigen::MatrixXcd U1 = X.topRows(n), U2 = X.bottomRows(n);
  Eigen::MatrixXd P = (U2 * U1.inverse()).real();
  P = 0.5 * (P + P.transpose());
  const Eigen::MatrixXd res = A.transpose() * P + P * A - P * S * P + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd G = -B.transpose() * P;
  GainSynthesis gs = verify_gain(L, B, G, sigma);
  gs.riccati_residual = res.norm() / std::max(1.0, P.norm());
  if (!std::isfinite(gs.riccati_residual) || gs.riccati_residual > 1e-6)
    throw Error("Riccati residual too large");
  return gs;
}

// ---- growth constants ------------------------------------------------------------------

double gamma0_constant(double L, int d) {
  return 4.0 * std::numbers::pi / L * std::sqrt(2.0 / std::pow(L, d));
}

GrowthConstants growth_constants(const GalerkinReduction& red, const PhysicalParams& p,
                                 const SpectralField& y_e, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const TorusGrid& g = y_e.grid();
  const double L = g.length, vol = g.volume();
  const double n = red.n;
  const double r = p.r, q = p.q;
  GrowthConstants gc;
  gc.gamma0 = gamma0_constant(L, g.d);
  gc.C1 = norm_lp(y_e, 1.0);
  if (r == 3.0 && p.gamma == 0.0) {
    gc.critical = true;
    gc.C2 = gc.C1;  // |y_e|_{L^1}^1
    gc.gamma1 = 6.0 * p.beta * std::pow(2.0 * n / vol, 1.5) *
                std::max(gc.C1, std::sqrt(n) * std::pow(L, g.d / 2.0));
    gc.gamma0p = gc.gamma0 + gc.gamma1;
    const double a = gc.gamma0p / (2.0 * gc.gamma1);
    gc.rho1 = -a + std::sqrt(sigma / gc.gamma1 + a * a);
    return gc;
  }
  if (!(r > 3.0 && q >= 3.0 && q < r && p.gamma < 0.0))
    throw RegimeError("growth constants need r = 3 with gamma = 0, or r > 3, 3 <= q < r, gamma < 0");
  const double ga = std::abs(p.gamma);
  gc.C2 = std::pow(norm_lp(y_e, r - 2.0), r - 2.0);
  gc.C3 = std::pow(norm_lp(y_e, q - 2.0), q - 2.0);
  const double t = std::pow(2.0 * n / vol, (r - 2.0) / 2.0);
  gc.gamma2 = std::pow(2.0, r - 2.0) * r * (r - 1.0) * std::pow(4.0 * n / vol, 1.5) *
              std::max({p.beta * gc.C2 + ga * gc.C3, p.beta * t, ga * t});
  gc.gamma0p = gc.gamma0 + gc.gamma2;
  gc.C4 = std::pow(4.0 * gc.gamma2 / sigma * (r - q) / (r - 1.0), (r - q) / (q - 1.0)) *
          (q - 1.0) / (r - 1.0);
  gc.C5 = std::pow(2.0 * gc.gamma0p / sigma * (r - 3.0) / (r - 1.0), (r - 3.0) / 2.0) * 2.0 /
          (r - 1.0);
  const double b = gc.gamma0p * gc.C5;
  const double a2 = 2.0 * (1.0 + gc.C4) * gc.gamma2;
  gc.rho1 = std::pow((-b + std::sqrt(b * b + a2 * sigma)) / a2, 2.0 / (r - 1.0));
  return gc;
}

// ---- reduced and full closed loops ---------------------------------------------------------

ReducedTrajectory reduced_simulate(const Eigen::VectorXd& v0, const GalerkinReduction& red,
                                   const Eigen::MatrixXd& G, double T, double dt,
                                   const ReducedOptions& opt) {
  if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("T and dt must be positive");
  const Eigen::MatrixXd M = red.Lmat - red.Bmat * G;
  auto rhs = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = -M * v;
    if (opt.include_q) out -= red.Q(v);
    if (opt.include_n) out -= red.N(v);
    return out;
  };
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const double h = T / static_cast<double>(steps);
  const double limit = 1e6 * std::max(v0.norm(), 1.0);
  ReducedTrajectory tr;
  Eigen::VectorXd v = v0;
  auto record = [&](double t) {
    tr.t.push_back(t);
    tr.v.push_back(v);
    tr.norm.push_back(v.norm());
    tr.max_norm = std::max(tr.max_norm, v.norm());
  };
  record(0.0);
  for (long s = 1; s <= steps; ++s) {
    Eigen::VectorXd k1 = rhs(v);
    Eigen::VectorXd k2 = rhs(v + 0.5 * h * k1);
    Eigen::VectorXd k3 = rhs(v + 0.5 * h * k2);
    Eigen::VectorXd k4 = rhs(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!v.allFinite() || v.norm() > limit) throw DivergenceError("reduced trajectory blew up");
    if (s % opt.sample_stride == 0 || s == steps) record(s * h);
    else tr.max_norm = std::max(tr.max_norm, v.norm());
  }
  return tr;
}

SpectralField full_controller(const SpectralField& z, const GalerkinReduction& red,
                              const Eigen::MatrixXd& G) {
  Eigen::VectorXd u = G * red.restrict(z);
  return leray_project(red.mask->apply(red.lift(u)));
}

Controller make_galerkin_controller(std::shared_ptr<const GalerkinReduction> red,
                                    const Eigen::MatrixXd& G) {
  return [red, G](const SpectralField& z) { return full_controller(z, *red, G); };
}

}  // namespace cbfed
