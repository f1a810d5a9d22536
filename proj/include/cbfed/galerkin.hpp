// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "cbfed/convex.hpp"
#include "cbfed/integrator.hpp"
#include "cbfed/mask.hpp"
#include "cbfed/params.hpp"

namespace cbfed {

// n-mode Galerkin model about an equilibrium y_e on span{w_1..w_n}:
// v' + Lmat v + Q(v) + N(v) = Bmat u.
struct GalerkinReduction {
  int n = 0;
  PhysicalParams params;
  SpectralField y_e;
  std::shared_ptr<const EigenSpan> span;
  std::shared_ptr<const DomainMask> mask;
  Eigen::MatrixXd Lmat;  // (Lmat v)_k = (mu lambda~_k + alpha) v_k + sum_i (h1_ik + h2_ik) v_i
  Eigen::MatrixXd Bmat;  // (m w_j, w_k)
  Eigen::MatrixXd h1;    // h1(i,k) = b(w_i, y_e, w_k) + b(y_e, w_i, w_k)
  Eigen::MatrixXd h2;    // h2(i,k) = beta (C1'(y_e) w_i, w_k) + gamma (C2'(y_e) w_i, w_k)
  std::vector<double> g1;  // b(w_i, w_j, w_k) at (i n + j) n + k

  double g1_at(int i, int j, int k) const { return g1[(static_cast<std::size_t>(i) * n + j) * n + k]; }
  Eigen::VectorXd Q(const Eigen::VectorXd& v) const;
  // Taylor remainder beta C1~(z) + gamma C2~(z) - (linear part), tested against w_k,
  // by 8-point Gauss-Legendre quadrature of int_0^1 (1 - s) C''(y_e + s z)(z, z) ds.
  Eigen::VectorXd N(const Eigen::VectorXd& v) const;

  SpectralField lift(const Eigen::VectorXd& v) const;
  Eigen::VectorXd restrict(const SpectralField& z) const;

  // Cached physical samples of y_e on the power-law quadrature grid.
  std::vector<std::vector<double>> ye_nodes;
  int ye_grid = 0;
};

GalerkinReduction assemble_reduction(const SpectralField& y_e, int n, const PhysicalParams& p,
                                     const DomainMask& mask);

// Numerical rank of [B, LB, ..., L^{n-1} B], threshold n sigma_max 1e-12.
int controllability_rank(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B);

struct GainSynthesis {
  Eigen::MatrixXd G;
  double sigma = 0.0;
  double m_hat = 0.0;  // condition number of the closed-loop eigenvector matrix
  std::vector<std::complex<double>> spectrum;  // eigenvalues of Lmat - Bmat G
  double min_re = 0.0;
  int rank = 0;
  double riccati_residual = 0.0;
  bool ok = false;  // min_re >= sigma - 1e-8
};

// Spectrum, M-hat and margin check for a given gain.
GainSynthesis verify_gain(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& G, double sigma);

// LQ synthesis (Q = R = I) on the shifted pair (sigma I - L, B), Riccati
// equation solved through the stable invariant subspace of the Hamiltonian.
GainSynthesis synthesize_gain(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B, double sigma);

struct GrowthConstants {
  bool critical = false;  // r = 3 branch
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma0p = 0.0;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0;
  double rho1 = 0.0;
};

// gamma0 = (4 pi / L)(2 / L^d)^{1/2} alone.
double gamma0_constant(double L, int d);

// Regimes: r = 3 with gamma = 0, or r > 3, 3 <= q < r, gamma < 0 (RegimeError otherwise).
GrowthConstants growth_constants(const GalerkinReduction& red, const PhysicalParams& p,
                                 const SpectralField& y_e, double sigma);

struct ReducedOptions {
  bool include_q = true;
  bool include_n = true;
  int sample_stride = 1;
};

struct ReducedTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> v;
  std::vector<double> norm;
  double max_norm = 0.0;
};

// Classical RK4 on v' = -(Lmat - Bmat G) v - Q(v) - N(v).
ReducedTrajectory reduced_simulate(const Eigen::VectorXd& v0, const GalerkinReduction& red,
                                   const Eigen::MatrixXd& G, double T, double dt,
                                   const ReducedOptions& opt = {});

// P(m lift(G restrict(z)))
SpectralField full_controller(const SpectralField& z, const GalerkinReduction& red,
                              const Eigen::MatrixXd& G);
Controller make_galerkin_controller(std::shared_ptr<const GalerkinReduction> red,
                                    const Eigen::MatrixXd& G);

}  // namespace cbfed
