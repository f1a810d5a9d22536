// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cbfed/constants.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {
namespace {

SpectralField or_zero(const SpectralField& f, const TorusGrid& g) {
  return f.modes() == 0 ? SpectralField(g, true) : f;
}

double max_abs_nodes(const SpectralField& u) {
  PhysicalField ph = transform_inverse(u);
  double worst = 0.0;
  for (std::size_t j = 0; j < ph.points(); ++j) {
    double a2 = 0.0;
    for (int c = 0; c < u.dim(); ++c) a2 += ph.comp[c][j] * ph.comp[c][j];
    worst = std::max(worst, a2);
  }
  return std::sqrt(worst);
}

}  // namespace

double default_dt(const SimConfig& cfg) {
  const TorusGrid& g = cfg.z0.grid();
  const double kmax = g.n / 2 - 1;
  const double lam_max = std::pow(g.kscale() * kmax, 2) * g.d;
  double dt = 0.25 / (cfg.params.mu * lam_max);
  const double umax = max_abs_nodes(cfg.z0 + or_zero(cfg.y_e, g));
  if (umax > 0.0) dt = std::min(dt, 0.5 / (umax * kmax * g.kscale()));
  return dt;
}

Stepper::Stepper(const SimConfig& cfg)
    : cfg_(cfg),
      ops_(or_zero(cfg.y_e, cfg.z0.grid()), cfg.params),
      pf_(leray_project(or_zero(cfg.forcing, cfg.z0.grid()))),
      dt_(cfg.dt > 0.0 ? cfg.dt : default_dt(cfg)) {
  const TorusGrid& g = cfg.z0.grid();
  const WaveTable& wt = wave_table(g.d, g.n);
  const double ks2 = g.kscale() * g.kscale();
  lin_.resize(wt.k.size());
  for (std::size_t i = 0; i < wt.k.size(); ++i)
    lin_[i] = cfg.params.mu * ks2 * wt.k2[i] + cfg.params.alpha;
  if (cfg.mode == SubdiffMode::Yosida && !(cfg.yosida_lambda > 0.0))
    throw ConfigError("Yosida mode needs lambda > 0");
}

SpectralField Stepper::explicit_terms(const SpectralField& z) const {
  const PhysicalParams& p = cfg_.params;
  SpectralField n = pf_;
  if (cfg_.convective) n -= ops_.b(z);
  if (p.beta != 0.0) n.axpy(-p.beta, ops_.c1(z));
  if (p.gamma != 0.0) n.axpy(-p.gamma, ops_.c2(z));
  if (cfg_.controller) n += cfg_.controller(z);
  if (cfg_.mode == SubdiffMode::Yosida && cfg_.set) n -= yosida(*cfg_.set, z, cfg_.yosida_lambda);
  return leray_project(n);
}

SpectralField Stepper::step(const SpectralField& z) {
  const TorusGrid& g = z.grid();
  SpectralField n = explicit_terms(z);
  SpectralField out(g, true);
  const double dt = dt_;
  if (cfg_.scheme == Scheme::Cnab2 && prev_) {
    for (int a = 0; a < g.d; ++a)
      for (std::size_t i = 0; i < lin_.size(); ++i) {
        const double h = 0.5 * dt * lin_[i];
        out.at(a, i) = ((1.0 - h) * z.at(a, i) +
                        dt * (1.5 * n.at(a, i) - 0.5 * prev_->at(a, i))) /
                       (1.0 + h);
      }
  } else {
    for (int a = 0; a < g.d; ++a)
      for (std::size_t i = 0; i < lin_.size(); ++i)
        out.at(a, i) = (z.at(a, i) + dt * n.at(a, i)) / (1.0 + dt * lin_[i]);
  }
  if (cfg_.scheme == Scheme::Cnab2) prev_ = std::move(n);
  if (cfg_.mode == SubdiffMode::ProjectEachStep && cfg_.set) out = cfg_.set->project(out);
  out.set_solenoidal(true);
  return out;
}

Trajectory simulate(const SimConfig& cfg) {
  cfg.params.validate();
  if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (cfg.sample_stride < 1) throw ConfigError("sample stride must be >= 1");
  const double dt0 = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg);
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_final / dt0 - 1e-9)));
  // Snap dt so the run ends exactly at t_final.
  SimConfig snapped = cfg;
  snapped.dt = cfg.t_final / static_cast<double>(steps);
  Stepper st(snapped);
  const double dt = st.dt();

  Trajectory tr;
  tr.dt = dt;
  tr.steps = steps;
  tr.config_hash = cfg.config_hash;
  const double r1 = cfg.params.r + 1.0;
  auto record = [&](double t, const SpectralField& z) {
    tr.t.push_back(t);
    const double nh = norm_h(z), ng = norm_grad(z);
    tr.norm_h.push_back(nh);
    tr.norm_grad.push_back(ng);
    tr.norm_v.push_back(std::hypot(nh, ng));
    tr.norm_lr1.push_back(norm_lp(z, r1));
    tr.dist_k.push_back(cfg.set ? cfg.set->distance(z) : 0.0);
    tr.norm_u.push_back(cfg.controller ? norm_h(cfg.controller(z)) : 0.0);
    if (cfg.keep_states) tr.states.push_back(z);
  };

  SpectralField z = leray_project(cfg.z0);
  const double limit = 1e6 * std::max(norm_h(z), 1.0);
  record(0.0, z);
  for (long s = 1; s <= steps; ++s) {
    z = st.step(z);
    const double nz = norm_h(z);
    if (!std::isfinite(nz) || nz > limit)
      throw DivergenceError("trajectory blew up at t = " + std::to_string(s * dt));
    if (s % cfg.sample_stride == 0 || s == steps) record(s * dt, z);
  }
  tr.final_state = z;

  double k = std::numeric_limits<double>::quiet_NaN();
  if (cfg.params.supercritical()) k = energy_constant(cfg.params, cfg.control_bound);
  const double fn = cfg.forcing.modes() == 0 ? 0.0 : norm_h(leray_project(cfg.forcing));
  tr.energy_defect = energy_budget(tr, cfg.params, k, fn);
  return tr;
}

std::vector<double> energy_budget(const Trajectory& tr, const PhysicalParams& p, double k,
                                  double forcing_norm) {
  const std::size_t n = tr.t.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  if (n < 2 || !std::isfinite(k)) return out;
  auto terms = [&](std::size_t i) {
    const double h2 = tr.norm_h[i] * tr.norm_h[i];
    return 0.5 * p.mu * tr.norm_grad[i] * tr.norm_grad[i] + p.alpha * h2 +
           p.beta / std::pow(2.0, p.r) * std::pow(tr.norm_lr1[i], p.r + 1.0) -
           0.25 * forcing_norm * forcing_norm - k * h2;
  };
  for (std::size_t i = 1; i < n; ++i) {
    const double dtt = tr.t[i] - tr.t[i - 1];
    const double deriv =
        0.5 * (tr.norm_h[i] * tr.norm_h[i] - tr.norm_h[i - 1] * tr.norm_h[i - 1]) / dtt;
    out[i] = deriv + 0.5 * (terms(i) + terms(i - 1));
  }
  out[0] = out[1];
  return out;
}

double sup_state_difference(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) throw std::invalid_argument("sampling mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    worst = std::max(worst, norm_h(a.states[i] - b.states[i]));
  return worst;
}

YosidaStudy yosida_convergence_study(const SimConfig& base, const std::vector<double>& lambdas) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1])) throw ConfigError("lambda list must be decreasing");
  YosidaStudy st;
  st.lambdas = lambdas;
  std::vector<Trajectory> runs;
  for (double lam : lambdas) {
    SimConfig c = base;
    c.mode = SubdiffMode::Yosida;
    c.yosida_lambda = lam;
    c.keep_states = true;
    runs.push_back(simulate(c));
  }
  for (std::size_t i = 1; i < runs.size(); ++i)
    st.sup_diff.push_back(sup_state_difference(runs[i - 1], runs[i]));
  st.decreasing = true;
  for (std::size_t i = 1; i < st.sup_diff.size(); ++i)
    st.decreasing = st.decreasing && st.sup_diff[i] < st.sup_diff[i - 1];

  SimConfig proj = base;
  proj.mode = SubdiffMode::ProjectEachStep;
  proj.keep_states = true;
  Trajectory tp = simulate(proj);
  SimConfig yos = base;
  yos.mode = SubdiffMode::Yosida;
  yos.yosida_lambda = tp.dt;
  yos.keep_states = true;
  st.project_vs_yosida = sup_state_difference(tp, simulate(yos));
  return st;
}

// ---- CSV ----------------------------------------------------------------------

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  char buf[512];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx\n",
                static_cast<unsigned long long>(tr.config_hash));
  os << buf << "t,norm_H,norm_gradH,norm_V,norm_Lr1,dist_K,norm_u,energy_defect\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.t[i],
                  tr.norm_h[i], tr.norm_grad[i], tr.norm_v[i], tr.norm_lr1[i], tr.dist_k[i],
                  tr.norm_u[i], i < tr.energy_defect.size() ? tr.energy_defect[i] : 0.0);
    os << buf;
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  Trajectory tr;
  std::string line;
  bool header = false;
  std::vector<std::string> cols;
  std::vector<std::vector<double>*> dst;
  const std::vector<std::pair<std::string, std::vector<double>*>> known = {
      {"t", &tr.t},           {"norm_H", &tr.norm_h},     {"norm_gradH", &tr.norm_grad},
      {"norm_V", &tr.norm_v}, {"norm_Lr1", &tr.norm_lr1}, {"dist_K", &tr.dist_k},
      {"norm_u", &tr.norm_u}, {"energy_defect", &tr.energy_defect}};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("config_hash=");
      if (pos != std::string::npos)
        tr.config_hash = std::stoull(line.substr(pos + 12), nullptr, 16);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header) {
      while (std::getline(ss, cell, ',')) {
        std::vector<double>* target = nullptr;
        for (const auto& [name, v] : known)
          if (name == cell) target = v;
        dst.push_back(target);
      }
      header = true;
      bool has_t = false, has_h = false;
      for (std::size_t i = 0; i < dst.size(); ++i) {
        has_t = has_t || dst[i] == &tr.t;
        has_h = has_h || dst[i] == &tr.norm_h;
      }
      if (!has_t || !has_h) throw Error("malformed trajectory CSV: missing t or norm_H");
      continue;
    }
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= dst.size()) throw Error("malformed trajectory CSV: too many cells");
      double v;
      try {
        v = std::stod(cell);
      } catch (const std::exception&) {
        throw Error("malformed trajectory CSV: bad number '" + cell + "'");
      }
      if (dst[c]) dst[c]->push_back(v);
      ++c;
    }
    if (c != dst.size()) throw Error("malformed trajectory CSV: short row");
  }
  if (!header) throw Error("malformed trajectory CSV: no header");
  return tr;
}

}  // namespace cbfed
