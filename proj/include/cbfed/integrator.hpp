// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cbfed/convex.hpp"
#include "cbfed/field.hpp"
#include "cbfed/nonlinear.hpp"
#include "cbfed/params.hpp"

namespace cbfed {

// Additive control U(z) on the right-hand side of the shifted equation
// z_t + mu A z + B~(z) + alpha z + beta C1~(z) + gamma C2~(z) = f + U(z).
using Controller = std::function<SpectralField(const SpectralField&)>;

enum class Scheme { ImexEuler, Cnab2 };
enum class SubdiffMode { None, ProjectEachStep, Yosida };

struct SimConfig {
  PhysicalParams params;
  SpectralField y_e;      // equilibrium; empty means zero
  SpectralField z0;
  SpectralField forcing;  // f; empty means zero
  double t_final = 1.0;
  double dt = 0.0;        // 0 selects default_dt
  Scheme scheme = Scheme::ImexEuler;
  SubdiffMode mode = SubdiffMode::ProjectEachStep;
  double yosida_lambda = 0.0;
  ConvexSetPtr set;       // null means the whole space
  Controller controller;  // empty means U = 0
  double control_bound = 0.0;  // M with |U(z)| <= M |z|
  bool convective = true;      // false drops B~ (linear tests)
  int sample_stride = 1;
  bool keep_states = false;
  std::uint64_t config_hash = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> norm_h;
  std::vector<double> norm_grad;
  std::vector<double> norm_v;
  std::vector<double> norm_lr1;
  std::vector<double> dist_k;
  std::vector<double> norm_u;
  std::vector<double> energy_defect;
  std::vector<SpectralField> states;  // filled when keep_states
  SpectralField final_state;
  double dt = 0.0;
  long steps = 0;
  std::uint64_t config_hash = 0;
};

// min(0.25/(mu lambda~_max), 0.5/(|z0 + y_e|_inf k_max 2 pi / L))
double default_dt(const SimConfig& cfg);

// Time stepper holding the cached equilibrium terms and the CNAB2 history.
class Stepper {
 public:
  explicit Stepper(const SimConfig& cfg);
  SpectralField step(const SpectralField& z);
  double dt() const { return dt_; }
  // f + U(z) - B~ - beta C1~ - gamma C2~ - yosida term, projected.
  SpectralField explicit_terms(const SpectralField& z) const;

 private:
  SimConfig cfg_;
  ShiftedOperators ops_;
  SpectralField pf_;
  double dt_;
  std::vector<double> lin_;  // mu lambda~_k + alpha per flat mode index
  std::optional<SpectralField> prev_;
};

// Throws DivergenceError when |z| exceeds 1e6 max(|z0|, 1) or turns non-finite.
Trajectory simulate(const SimConfig& cfg);

// Discrete defect of
// 1/2 d/dt|z|^2 + mu/2 |grad z|^2 + alpha|z|^2 + beta/2^r |z|_{L^{r+1}}^{r+1} - 1/4|f|^2 - k|z|^2
// on consecutive samples (trapezoidal in the non-derivative terms).
// Negative means satisfied.
std::vector<double> energy_budget(const Trajectory& tr, const PhysicalParams& p, double k,
                                  double forcing_norm);

struct YosidaStudy {
  std::vector<double> lambdas;
  std::vector<double> sup_diff;  // sup_t |z_l - z_{l'}| for adjacent pairs
  bool decreasing = false;
  double project_vs_yosida = 0.0;  // sup_t |z_{lambda = dt} - z_project|
};

YosidaStudy yosida_convergence_study(const SimConfig& base, const std::vector<double>& lambdas);

// Largest H distance between sampled states of two runs with equal sampling.
double sup_state_difference(const Trajectory& a, const Trajectory& b);

void write_trajectory_csv(const std::string& path, const Trajectory& tr);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace cbfed
