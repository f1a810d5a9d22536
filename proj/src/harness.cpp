// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cbfed/constants.hpp"
#include "cbfed/controllers.hpp"
#include "cbfed/convex.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/galerkin.hpp"
#include "cbfed/integrator.hpp"
#include "cbfed/localized_eigen.hpp"
#include "cbfed/nonlinear.hpp"
#include "cbfed/rng.hpp"
#include "cbfed/snapshot.hpp"
#include "cbfed/spectral.hpp"
#include "cbfed/stationary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cbfed {

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const DivergenceError&) {
    return kExitDivergence;
  } catch (const RegimeError&) {
    return kExitRegime;
  } catch (const json::exception&) {
    return kExitConfig;
  } catch (const std::invalid_argument&) {
    return kExitConfig;
  } catch (...) {
    return kExitInternal;
  }
}

// ---- configuration ---------------------------------------------------------------

json default_config() {
  return json{
      {"grid", {{"d", 2}, {"n", 32}, {"length", 2.0 * std::numbers::pi}}},
      {"params", {{"mu", 1.0}, {"alpha", 1.0}, {"beta", 1.0}, {"gamma", 0.0}, {"r", 5.0}, {"q", 2.0}}},
      {"equilibrium",
       {{"forcing", {{"type", "zero"}}},
        {"tol", 1e-10},
        {"max_iter", 5000},
        {"relax", 1.0},
        {"c_embed", 1.0}}},
      {"forcing", {{"type", "zero"}}},
      {"initial", {{"type", "random"}, {"seed", 0}, {"decay", 2.0}, {"amplitude", 0.5}, {"kmax", 4}}},
      {"integrator",
       {{"scheme", "imex_euler"},
        {"dt", 0.01},
        {"t_final", 5.0},
        {"sample_stride", 10},
        {"subdiff", "project"},
        {"yosida_lambda", 0.01}}},
      {"set", {{"type", "none"}, {"radius", 1.0}, {"n", 8}}},
      {"controller",
       {{"type", "none"},
        {"theta", 0.0},
        {"delta1_target", 1.0},
        {"k_gain", 50.0},
        {"sigma", 1.0},
        {"n", 8}}},
      {"mask", {{"type", "strip"}, {"axis", 0}, {"width", 1.0}}},
      {"eigen", {{"ladder", {10.0, 20.0, 40.0, 80.0}}, {"tol", 1e-8}}},
      {"constants", {{"epsilon", 0.5}, {"epsilon_tilde", 1.0}, {"M", 0.0}}},
      {"decay", {{"window", 0.5}, {"slack", 0.1}}},
      {"galerkin", {{"t_final", 8.0}, {"dt", 0.01}, {"radius_fraction", 0.5}}},
      {"output_dir", "cbfed_out"},
      {"seed", 1},
  };
}

namespace {

// Sections whose keys are fixed by the defaults.
const char* kStrictSections[] = {"grid",      "params", "integrator", "controller", "eigen",
                                 "constants", "decay",  "galerkin"};

}  // namespace

json resolve_config(const json& user) {
  if (!user.is_object()) throw ConfigError("config root must be an object");
  json out = default_config();
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!out.contains(it.key())) throw ConfigError("unknown config key: " + it.key());
  }
  for (const char* s : kStrictSections) {
    if (!user.contains(s)) continue;
    if (!user[s].is_object()) throw ConfigError(std::string("section must be an object: ") + s);
    for (auto it = user[s].begin(); it != user[s].end(); ++it)
      if (!out[s].contains(it.key()))
        throw ConfigError("unknown config key: " + std::string(s) + "." + it.key());
  }
  out.merge_patch(user);
  return out;
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }
  json* node = &cfg;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = value;
}

std::uint64_t config_hash(const json& resolved) {
  json c = resolved;
  c.erase("output_dir");
  const std::string s = c.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- builders ----------------------------------------------------------------------

namespace {

TorusGrid grid_from(const json& c) {
  return TorusGrid(c.at("grid").at("d").get<int>(), c.at("grid").at("n").get<int>(),
                   c.at("grid").at("length").get<double>());
}

PhysicalParams params_from(const json& c) {
  const json& p = c.at("params");
  PhysicalParams out;
  out.mu = p.at("mu").get<double>();
  out.alpha = p.at("alpha").get<double>();
  out.beta = p.at("beta").get<double>();
  out.gamma = p.at("gamma").get<double>();
  out.r = p.at("r").get<double>();
  out.q = p.at("q").get<double>();
  out.validate();
  return out;
}

SpectralField field_from(const json& spec, const TorusGrid& g, std::uint64_t seed) {
  const std::string type = spec.value("type", "zero");
  if (type == "zero") return SpectralField(g, true);
  if (type == "constant") {
    SpectralField u(g, true);
    const auto v = spec.at("vector").get<std::vector<double>>();
    if (v.size() != static_cast<std::size_t>(g.d)) throw ConfigError("constant vector size != d");
    for (int c = 0; c < g.d; ++c) u.at(c, 0) = v[c];
    return u;
  }
  if (type == "modes") {
    const auto idx = spec.at("indices").get<std::vector<int>>();
    const double amp = spec.value("amplitude", 1.0);
    int top = 0;
    for (int i : idx) {
      if (i < 0) throw ConfigError("mode index must be nonnegative");
      top = std::max(top, i + 1);
    }
    const auto modes = eigenbasis(std::max(top, 1), g);
    SpectralField u(g, true);
    for (int i : idx) u.axpy(amp, modes[i].field);
    return u;
  }
  if (type == "random") {
    const std::uint64_t s = mix64(seed) + spec.value("seed", 0ULL);
    SpectralField u = random_solenoidal(g, s, spec.value("decay", 2.0), spec.value("kmax", -1));
    const double amp = spec.value("amplitude", 1.0);
    const double nu = norm_h(u);
    if (nu > 0.0) u *= amp / nu;
    return u;
  }
  throw ConfigError("unknown field type: " + type);
}

DomainMask mask_from(const json& c, const TorusGrid& g) {
  const json& m = c.at("mask");
  const std::string type = m.value("type", "strip");
  if (type == "full") return DomainMask::full(g);
  if (type == "strip") return DomainMask::strip_complement(g, m.value("axis", 0), m.value("width", 1.0));
  if (type == "boxes") {
    std::vector<Box> boxes;
    for (const auto& b : m.at("boxes")) {
      Box box;
      const auto lo = b.at("lo").get<std::vector<double>>();
      const auto hi = b.at("hi").get<std::vector<double>>();
      if (lo.size() != static_cast<std::size_t>(g.d) || hi.size() != lo.size())
        throw ConfigError("box corners must have d entries");
      for (int a = 0; a < g.d; ++a) {
        box.lo[a] = lo[a];
        box.hi[a] = hi[a];
      }
      boxes.push_back(box);
    }
    return DomainMask(g, boxes);
  }
  throw ConfigError("unknown mask type: " + type);
}

ConvexSetPtr set_from(const json& c, const TorusGrid& g) {
  const json& s = c.at("set");
  const std::string type = s.value("type", "none");
  if (type == "none") return nullptr;
  if (type == "ball") return std::make_shared<Ball>(s.value("radius", 1.0));
  if (type == "span") return std::make_shared<EigenSpan>(g, s.value("n", 8));
  throw ConfigError("unknown set type: " + type);
}

struct Equilibrium {
  SpectralField f;
  StationarySolution sol;
};

Equilibrium equilibrium_from(const json& c, const TorusGrid& g, const PhysicalParams& p,
                             std::uint64_t seed) {
  const json& e = c.at("equilibrium");
  Equilibrium eq;
  eq.f = field_from(e.at("forcing"), g, seed ^ 0xe9);
  StationaryOptions opt;
  opt.tol = e.value("tol", 1e-10);
  opt.max_iter = e.value("max_iter", 5000);
  opt.relax = e.value("relax", 1.0);
  opt.c_embed = e.value("c_embed", 1.0);
  eq.sol = solve_stationary(p, eq.f, opt);
  return eq;
}

SimConfig sim_from(const json& c, const TorusGrid& g, const PhysicalParams& p, std::uint64_t seed) {
  const json& in = c.at("integrator");
  SimConfig s;
  s.params = p;
  s.z0 = field_from(c.at("initial"), g, seed);
  s.forcing = field_from(c.at("forcing"), g, seed ^ 0xf0);
  s.t_final = in.value("t_final", 5.0);
  s.dt = in.value("dt", 0.0);
  const std::string scheme = in.value("scheme", "imex_euler");
  if (scheme == "imex_euler") s.scheme = Scheme::ImexEuler;
  else if (scheme == "cnab2") s.scheme = Scheme::Cnab2;
  else throw ConfigError("unknown scheme: " + scheme);
  const std::string mode = in.value("subdiff", "project");
  if (mode == "project") s.mode = SubdiffMode::ProjectEachStep;
  else if (mode == "yosida") s.mode = SubdiffMode::Yosida;
  else if (mode == "none") s.mode = SubdiffMode::None;
  else throw ConfigError("unknown subdifferential mode: " + mode);
  s.yosida_lambda = in.value("yosida_lambda", 0.01);
  s.sample_stride = in.value("sample_stride", 10);
  s.set = set_from(c, g);
  return s;
}

json stationary_json(const Equilibrium& eq) {
  const auto& s = eq.sol;
  return json{{"residual", s.residual},
              {"iterations", s.iterations},
              {"relax", s.relax},
              {"norm_H", norm_h(s.y)},
              {"norm_V", norm_v(s.y)},
              {"uniqueness",
               {{"lhs", s.uniqueness.lhs},
                {"rhs", s.uniqueness.rhs},
                {"margin", s.uniqueness.margin},
                {"certified", s.uniqueness.certified}}},
              {"energy_bound",
               {{"lhs", s.energy.lhs},
                {"rhs_printed", s.energy.rhs_printed},
                {"rhs_derived", s.energy.rhs_derived},
                {"printed_ok", s.energy.printed_ok},
                {"derived_ok", s.energy.derived_ok}}}};
}

json fit_json(const DecayFit& f) {
  return json{{"delta_fit", f.delta_fit},       {"r2", f.r2},
              {"delta_claim", f.delta_claim},   {"pointwise_ok", f.pointwise_ok},
              {"worst_ratio", f.worst_ratio},   {"window_start", f.window_start},
              {"samples", f.samples}};
}

json mono_json(const MonotonicityConstants& m) {
  return json{{"epsilon", m.epsilon},         {"epsilon_tilde", m.epsilon_tilde},
              {"M", m.M},                     {"critical", m.critical},
              {"varrho_eps", m.varrho_eps},   {"rho_eps_tilde", m.rho_eps_tilde},
              {"rho_eps", m.rho_eps},         {"eta1", m.eta1},
              {"eta2", m.eta2},               {"rho_tilde1", m.rho_tilde1},
              {"rho_tilde2", m.rho_tilde2},   {"c", m.c},
              {"K", m.K},                     {"kappa", m.kappa}};
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw Error("cannot open " + p.string());
  os << j.dump(2) << "\n";
}

struct RunContext {
  json cfg;
  std::uint64_t hash;
  std::uint64_t seed;
  fs::path dir;
  TorusGrid grid;
  std::ostream& log;
};

// ---- experiments ------------------------------------------------------------------

json run_stationary(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  write_snapshot((ctx.dir / "equilibrium.bin").string(), eq.sol.y, ctx.hash);
  json r = stationary_json(eq);
  r["files"] = {"equilibrium.bin"};
  return r;
}

Controller controller_from(const json& c, const PhysicalParams& p, const TorusGrid& g,
                           double& bound) {
  const json& cc = c.at("controller");
  const std::string type = cc.value("type", "none");
  bound = 0.0;
  if (type == "none") return {};
  if (type == "theta") {
    double theta = cc.value("theta", 0.0);
    if (!(theta > 0.0)) {
      ThetaThreshold th = theta_threshold(p);
      theta = std::max(th.c_min - p.alpha + cc.value("delta1_target", 1.0), 1e-6);
    }
    bound = theta;
    return make_theta_controller(theta);
  }
  if (type == "proportional") {
    const double k = cc.value("k_gain", 50.0);
    bound = k;
    return make_proportional_controller(k, mask_from(c, g));
  }
  throw ConfigError("simulate supports controller types none, theta, proportional");
}

json run_simulate(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  SimConfig s = sim_from(ctx.cfg, ctx.grid, p, ctx.seed);
  s.y_e = eq.sol.y;
  s.controller = controller_from(ctx.cfg, p, ctx.grid, s.control_bound);
  s.config_hash = ctx.hash;
  Trajectory tr = simulate(s);
  write_trajectory_csv((ctx.dir / "trajectory.csv").string(), tr);
  write_snapshot((ctx.dir / "final.bin").string(), tr.final_state, ctx.hash);
  return json{{"steps", tr.steps},
              {"dt", tr.dt},
              {"final_norm_H", tr.norm_h.back()},
              {"equilibrium", stationary_json(eq)},
              {"files", {"trajectory.csv", "final.bin"}}};
}

json run_theta(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  ThetaThreshold th = theta_threshold(p);
  const json& cc = ctx.cfg.at("controller");
  double theta = cc.value("theta", 0.0);
  if (!(theta > 0.0)) theta = std::max(th.c_min - p.alpha + cc.value("delta1_target", 1.0), 1e-6);
  const double delta1 = th.delta1(theta);
  if (!(delta1 > 0.0)) throw RegimeError("theta does not give delta1 > 0");
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  SimConfig s = sim_from(ctx.cfg, ctx.grid, p, ctx.seed);
  if (!s.set) s.set = std::make_shared<Ball>(ctx.cfg.at("set").value("radius", 1.0));
  s.mode = SubdiffMode::ProjectEachStep;
  if (!s.set->contains(s.z0, 1e-12)) throw ConfigError("initial state must lie in K");
  s.y_e = eq.sol.y;
  s.controller = make_theta_controller(theta);
  s.control_bound = theta;
  s.config_hash = ctx.hash;
  Trajectory tr = simulate(s);
  write_trajectory_csv((ctx.dir / "trajectory.csv").string(), tr);
  write_snapshot((ctx.dir / "final.bin").string(), tr.final_state, ctx.hash);
  const double slack = ctx.cfg.at("decay").value("slack", 0.1);
  DecayFit fit = decay_rate_fit(tr.t, tr.norm_h, ctx.cfg.at("decay").value("window", 0.5),
                                delta1 * (1.0 - slack));
  bool inv = true;
  for (double d : tr.dist_k) inv = inv && d == 0.0;
  return json{{"theta", theta},
              {"c_min", th.c_min},
              {"epsilon", th.epsilon},
              {"epsilon_tilde", th.epsilon_tilde},
              {"delta1", delta1},
              {"delta_claim", fit.delta_claim},
              {"delta_fit", fit.delta_fit},
              {"pointwise_ok", fit.pointwise_ok},
              {"invariance_ok", inv},
              {"fit", fit_json(fit)},
              {"files", {"trajectory.csv", "final.bin"}}};
}

json run_proportional(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  const double k = ctx.cfg.at("controller").value("k_gain", 50.0);
  DomainMask mask = mask_from(ctx.cfg, ctx.grid);
  AkEigen e = smallest_eigenvalue_ak(k, mask, p, ctx.cfg.at("eigen").value("tol", 1e-8));
  const double eps = ctx.cfg.at("constants").value("epsilon", 0.5);
  ProportionalDecay pd = proportional_decay_constant(e.nu, p, eps);
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  SimConfig s = sim_from(ctx.cfg, ctx.grid, p, ctx.seed);
  s.set = nullptr;
  s.mode = SubdiffMode::None;
  s.y_e = eq.sol.y;
  s.controller = make_proportional_controller(k, mask);
  s.control_bound = k;
  s.config_hash = ctx.hash;
  Trajectory tr = simulate(s);
  write_trajectory_csv((ctx.dir / "trajectory.csv").string(), tr);
  const double slack = ctx.cfg.at("decay").value("slack", 0.1);
  DecayFit fit = decay_rate_fit(tr.t, tr.norm_h, ctx.cfg.at("decay").value("window", 0.5),
                                pd.positive ? pd.delta * (1.0 - slack) : 0.0);
  return json{{"k_gain", k},
              {"nu_k", e.nu},
              {"eigen_iterations", e.iterations},
              {"delta", pd.delta},
              {"delta_positive", pd.positive},
              {"varrho_star", pd.varrho_star},
              {"varrho1_star", pd.varrho1_star},
              {"varrho2_star", pd.varrho2_star},
              {"delta_claim", fit.delta_claim},
              {"delta_fit", fit.delta_fit},
              {"pointwise_ok", fit.pointwise_ok},
              {"invariance_ok", true},
              {"fit", fit_json(fit)},
              {"files", {"trajectory.csv"}}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json run_reduce(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  const int n = ctx.cfg.at("controller").value("n", 8);
  GalerkinReduction red = assemble_reduction(eq.sol.y, n, p, mask_from(ctx.cfg, ctx.grid));
  {
    std::ofstream os(ctx.dir / "g1.bin", std::ios::binary);
    os.write("CBG1", 4);
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    os.write(reinterpret_cast<const char*>(&nn), 8);
    os.write(reinterpret_cast<const char*>(red.g1.data()),
             static_cast<std::streamsize>(red.g1.size() * sizeof(double)));
    os.write("HASH", 4);
    os.write(reinterpret_cast<const char*>(&ctx.hash), 8);
  }
  json modes = json::array();
  for (const auto& m : red.span->modes())
    modes.push_back({{"k", std::vector<int>(m.k.begin(), m.k.begin() + ctx.grid.d)},
                     {"phase", m.phase == Phase::Sine ? "sine"
                               : m.phase == Phase::Cosine ? "cosine" : "constant"},
                     {"polarization", std::vector<double>(m.polarization.begin(),
                                                          m.polarization.begin() + ctx.grid.d)},
                     {"lambda", m.lambda}});
  return json{{"n", n},
              {"modes", modes},
              {"Lmat", matrix_json(red.Lmat)},
              {"Bmat", matrix_json(red.Bmat)},
              {"h1", matrix_json(red.h1)},
              {"h2", matrix_json(red.h2)},
              {"rank", controllability_rank(red.Lmat, red.Bmat)},
              {"g1_layout", "CBG1, u64 n, n^3 f64 little-endian at (i n + j) n + k, HASH trailer"},
              {"files", {"g1.bin"}}};
}

json run_galerkin(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  Equilibrium eq = equilibrium_from(ctx.cfg, ctx.grid, p, ctx.seed);
  const json& cc = ctx.cfg.at("controller");
  const int n = cc.value("n", 8);
  const double sigma = cc.value("sigma", 1.0);
  auto red = std::make_shared<GalerkinReduction>(
      assemble_reduction(eq.sol.y, n, p, mask_from(ctx.cfg, ctx.grid)));
  GrowthConstants gc = growth_constants(*red, p, eq.sol.y, sigma);
  GainSynthesis gs = synthesize_gain(red->Lmat, red->Bmat, sigma);
  const json& gal = ctx.cfg.at("galerkin");
  const double T = gal.value("t_final", 8.0), dt = gal.value("dt", 0.01);
  CounterRng rng(ctx.seed, 77);
  Eigen::VectorXd v0(n);
  for (int i = 0; i < n; ++i) v0[i] = rng.gaussian();
  v0 *= gal.value("radius_fraction", 0.5) * gc.rho1 / (gs.m_hat * v0.norm());
  ReducedOptions ro;
  ro.sample_stride = std::max(1, static_cast<int>(std::lround(0.05 / dt)));
  ReducedTrajectory rt = reduced_simulate(v0, *red, gs.G, T, dt, ro);
  const double window = ctx.cfg.at("decay").value("window", 0.5);
  DecayFit fr = decay_rate_fit(rt.t, rt.norm, window, sigma);

  SimConfig s;
  s.params = p;
  s.y_e = eq.sol.y;
  s.z0 = red->lift(v0);
  s.t_final = T;
  s.dt = dt;
  s.mode = SubdiffMode::ProjectEachStep;
  s.set = red->span;
  s.controller = make_galerkin_controller(red, gs.G);
  s.sample_stride = ro.sample_stride;
  s.config_hash = ctx.hash;
  Trajectory tr = simulate(s);
  write_trajectory_csv((ctx.dir / "trajectory_full.csv").string(), tr);
  DecayFit ff = decay_rate_fit(tr.t, tr.norm_h, window, sigma);
  return json{{"n", n},
              {"rank", gs.rank},
              {"sigma", sigma},
              {"M_hat", gs.m_hat},
              {"min_re", gs.min_re},
              {"gamma0", gc.gamma0},
              {"gamma1_or_2", gc.critical ? gc.gamma1 : gc.gamma2},
              {"C4", gc.C4},
              {"C5", gc.C5},
              {"rho1", gc.rho1},
              {"v0_norm", v0.norm()},
              {"reduced_max_norm", rt.max_norm},
              {"decay_fit_reduced", fit_json(fr)},
              {"decay_fit_full", fit_json(ff)},
              {"files", {"trajectory_full.csv"}}};
}

json run_eigen(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  DomainMask mask = mask_from(ctx.cfg, ctx.grid);
  const json& e = ctx.cfg.at("eigen");
  EigenReport rep = lambda_star_estimate(mask, p, e.at("ladder").get<std::vector<double>>(),
                                         e.value("tol", 1e-8));
  json ladder = json::array();
  for (const auto& l : rep.ladder)
    ladder.push_back({{"k_gain", l.k_gain}, {"nu", l.nu}, {"iterations", l.iterations},
                      {"residual", l.residual}});
  return json{{"ladder", ladder},
              {"largest_nu", rep.largest_nu},
              {"lambda_star", rep.lambda_star},
              {"order", rep.order},
              {"complement_volume", rep.complement_volume},
              {"rfk_printed", rep.rfk_printed},
              {"rfk_scaled", rep.rfk_scaled},
              {"monotone", rep.monotone},
              {"below_extrapolant", rep.below_extrapolant}};
}

json run_constants(RunContext& ctx) {
  PhysicalParams p = params_from(ctx.cfg);
  const json& k = ctx.cfg.at("constants");
  MonotonicityConstants mc = monotonicity_constants(
      p, k.value("epsilon", 0.5), k.value("epsilon_tilde", 1.0), k.value("M", 0.0));
  ThetaThreshold th = theta_threshold(p);
  StationaryConstants sc = stationary_constants(p);
  json out{{"monotonicity", mono_json(mc)},
           {"theta_threshold",
            {{"c_min", th.c_min}, {"epsilon", th.epsilon}, {"epsilon_tilde", th.epsilon_tilde}}},
           {"stationary", {{"K1", sc.K1}, {"K2", sc.K2}}},
           {"gamma0", gamma0_constant(ctx.grid.length, ctx.grid.d)}};
  if (p.supercritical()) {
    out["varrho_half"] = varrho(p, 0.5);
    out["energy_k"] = energy_constant(p, k.value("M", 0.0));
  }
  return out;
}

}  // namespace

json run_experiment(const std::string& kind, const json& resolved, std::ostream& log) {
  const std::uint64_t h = config_hash(resolved);
  RunContext ctx{resolved,
                 h,
                 resolved.at("seed").get<std::uint64_t>(),
                 fs::path(resolved.at("output_dir").get<std::string>()) / hash_hex(h),
                 grid_from(resolved),
                 log};
  fs::create_directories(ctx.dir);
  write_json(ctx.dir / "config.json", json{{"config_hash", hash_hex(h)}, {"config", resolved}});
  json report;
  if (kind == "stationary") report = run_stationary(ctx);
  else if (kind == "simulate") report = run_simulate(ctx);
  else if (kind == "stabilize-theta") report = run_theta(ctx);
  else if (kind == "stabilize-proportional") report = run_proportional(ctx);
  else if (kind == "stabilize-galerkin") report = run_galerkin(ctx);
  else if (kind == "eigen") report = run_eigen(ctx);
  else if (kind == "reduce") report = run_reduce(ctx);
  else if (kind == "constants") report = run_constants(ctx);
  else throw ConfigError("unknown experiment kind: " + kind);
  report["experiment"] = kind;
  report["config_hash"] = hash_hex(h);
  report["output_dir"] = ctx.dir.string();
  write_json(ctx.dir / "report.json", report);
  log << kind << ": wrote " << (ctx.dir / "report.json").string() << "\n";
  return report;
}

json report_decay(const std::string& csv_path, double delta_claim, double window, double tol) {
  Trajectory tr;
  try {
    tr = read_trajectory_csv(csv_path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  DecayFit f = decay_rate_fit(tr.t, tr.norm_h, window, delta_claim, tol);
  return json{{"delta_fit", f.delta_fit},
              {"delta_claim", f.delta_claim},
              {"pointwise_ok", f.pointwise_ok},
              {"window", {f.window_start, tr.t.back()}},
              {"r2", f.r2},
              {"config_hash", hash_hex(tr.config_hash)}};
}

// ---- verify ---------------------------------------------------------------------------

namespace {

VerifyRow check(const std::string& name, const std::function<std::string(bool&)>& body) {
  VerifyRow row{name, false, ""};
  try {
    bool ok = false;
    row.detail = body(ok);
    row.ok = ok;
  } catch (const std::exception& e) {
    row.detail = std::string("exception: ") + e.what();
  }
  return row;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<VerifyRow> check_hashes(const std::string& root) {
  std::vector<VerifyRow> rows;
  int files = 0, bad = 0;
  std::string first_bad;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string expect = entry.path().parent_path().filename().string();
    const std::string ext = entry.path().extension().string();
    std::string got;
    try {
      if (ext == ".json") {
        std::ifstream is(entry.path());
        json j = json::parse(is);
        got = j.value("config_hash", "");
      } else if (ext == ".csv") {
        got = hash_hex(read_trajectory_csv(entry.path().string()).config_hash);
      } else if (ext == ".bin") {
        std::ifstream is(entry.path(), std::ios::binary | std::ios::ate);
        const auto size = static_cast<long long>(is.tellg());
        if (size >= 12) {
          is.seekg(size - 12);
          char tag[4];
          std::uint64_t h = 0;
          is.read(tag, 4);
          is.read(reinterpret_cast<char*>(&h), 8);
          if (std::string(tag, 4) == "HASH") got = hash_hex(h);
        }
      } else {
        continue;
      }
    } catch (const std::exception&) {
      got = "";
    }
    ++files;
    if (got != expect) {
      ++bad;
      if (first_bad.empty()) first_bad = entry.path().string();
    }
  }
  rows.push_back({"config hashes", bad == 0 && files > 0,
                  std::to_string(files) + " files, " + std::to_string(bad) + " mismatched" +
                      (first_bad.empty() ? "" : " (first: " + first_bad + ")")});
  return rows;
}

}  // namespace

std::vector<VerifyRow> run_verify(const std::optional<std::string>& dir) {
  std::vector<VerifyRow> rows;
  const TorusGrid g(2, 16, 2.0 * std::numbers::pi);

  rows.push_back(check("leray projection", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      SpectralField u(g), v(g);
      CounterRng rng(s, 1);
      for (auto& c : u.data()) c = Complex(rng.gaussian(), rng.gaussian());
      for (auto& c : v.data()) c = Complex(rng.gaussian(), rng.gaussian());
      u = from_physical(to_physical(u, g.n), g);
      v = from_physical(to_physical(v, g.n), g);
      SpectralField pu = leray_project(u);
      worst = std::max(worst, norm_h(leray_project(pu) - pu) / norm_h(pu));
      worst = std::max(worst, std::abs(inner_product(pu, v) - inner_product(u, leray_project(v))) /
                                  (norm_h(u) * norm_h(v)));
      worst = std::max(worst, divergence_max(pu));
    }
    ok = worst < 1e-11;
    return fmt("worst defect %.2e", worst);
  }));

  rows.push_back(check("eigenbasis", [&](bool& ok) {
    auto modes = eigenbasis(12, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      SpectralField r = script_a_apply(modes[i].field);
      r.axpy(-modes[i].lambda, modes[i].field);
      worst = std::max(worst, norm_h(r));
      for (std::size_t j = 0; j < modes.size(); ++j)
        worst = std::max(worst, std::abs(inner_product(modes[i].field, modes[j].field) -
                                         (i == j ? 1.0 : 0.0)));
    }
    ok = worst < 1e-10;
    return fmt("worst defect %.2e", worst);
  }));

  rows.push_back(check("trilinear antisymmetry", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
      SpectralField y = random_solenoidal(g, 10 + s, 2.0), z = random_solenoidal(g, 20 + s, 2.0),
                    w = random_solenoidal(g, 30 + s, 2.0);
      const double scale = norm_v(y) * norm_v(z) * norm_v(w);
      worst = std::max(worst, std::abs(trilinear(y, z, w) + trilinear(y, w, z)) / scale);
      worst = std::max(worst, std::abs(trilinear(y, z, z)) / scale);
    }
    ok = worst < 1e-10;
    return fmt("worst relative %.2e", worst);
  }));

  rows.push_back(check("absorption pairing", [&](bool& ok) {
    double worst = 0.0;
    for (double r : {3.0, 4.0, 5.0}) {
      SpectralField y = random_solenoidal(g, 40, 2.0);
      const double lhs = inner_product(power_damping(y, r), y);
      const double rhs = std::pow(norm_lp(y, r + 1.0, power_size(g.n, r)), r + 1.0);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    ok = worst < 1e-8;
    return fmt("worst relative %.2e", worst);
  }));

  rows.push_back(check("absorption monotonicity", [&](bool& ok) {
    double worst = -1.0;
    for (int s = 0; s < 10; ++s) {
      for (double r : {3.0, 5.0}) {
        SpectralField y = random_solenoidal(g, 100 + s, 2.0), z = random_solenoidal(g, 200 + s, 2.0);
        const int m = power_size(g.n, r);
        const double lhs = inner_product(power_damping(y, r) - power_damping(z, r), y - z);
        const double rhs = std::pow(2.0, 1.0 - r) * std::pow(norm_lp(y - z, r + 1.0, m), r + 1.0);
        worst = std::max(worst, (rhs - lhs) / std::max(lhs, 1e-300));
      }
    }
    ok = worst <= 1e-8;
    return fmt("worst relative shortfall %.2e", worst);
  }));

  rows.push_back(check("constants arithmetic", [&](bool& ok) {
    PhysicalParams p;
    p.r = 5.0;
    const double v1 = varrho(p, 1.0);
    const double g0 = gamma0_constant(2.0 * std::numbers::pi, 2);
    PhysicalParams p2;
    p2.r = 5.0;
    p2.q = 2.0;
    p2.gamma = -1.0;
    const double k1 = stationary_constants(p2).K1;
    const double err = std::max({std::abs(v1 - 0.25), std::abs(g0 - std::sqrt(2.0) / std::numbers::pi),
                                 std::abs(k1 - 0.5)});
    ok = err < 1e-12;
    return fmt("varrho_1 = %.15g, worst error %.2e", v1, err);
  }));

  rows.push_back(check("ball projection", [&](bool& ok) {
    Ball b(0.7);
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      SpectralField x = random_solenoidal(g, 300 + s, 2.0), y = random_solenoidal(g, 400 + s, 2.0);
      worst = std::max(worst, norm_h(b.project(x) - b.project(y)) - norm_h(x - y));
      worst = std::max(worst, b.violation(b.project(x)));
    }
    ok = worst <= 1e-12;
    return fmt("worst excess %.2e", worst);
  }));

  rows.push_back(check("stationary constant forcing", [&](bool& ok) {
    PhysicalParams p;
    p.r = 4.0;
    p.beta = 0.1;
    SpectralField f(g, true);
    f.at(0, 0) = p.alpha + p.beta;
    StationarySolution s = solve_stationary(p, f);
    SpectralField e(g, true);
    e.at(0, 0) = 1.0;
    const double err = norm_h(s.y - e) / norm_h(e);
    ok = err < 1e-10;
    return fmt("relative error %.2e", err);
  }));

  rows.push_back(check("decay fit", [&](bool& ok) {
    std::vector<double> t, n;
    for (int i = 0; i <= 100; ++i) {
      t.push_back(0.05 * i);
      n.push_back(std::exp(-2.0 * t.back()));
    }
    DecayFit f = decay_rate_fit(t, n, 0.5, 1.9);
    ok = std::abs(f.delta_fit - 2.0) < 1e-10 && f.pointwise_ok;
    return fmt("delta_fit = %.12g", f.delta_fit);
  }));

  rows.push_back(check("bessel zeros", [&](bool& ok) {
    const double e = std::max(std::abs(bessel_first_zero(0.0) - 2.404825557695773),
                              std::abs(bessel_first_zero(0.5) - std::numbers::pi));
    ok = e < 1e-10;
    return fmt("worst error %.2e", e);
  }));

  if (dir) {
    auto h = check_hashes(*dir);
    rows.insert(rows.end(), h.begin(), h.end());
  }
  return rows;
}

void print_verify_table(const std::vector<VerifyRow>& rows, std::ostream& os) {
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.suite.size());
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %-6s  %s\n", static_cast<int>(w), "suite", "status", "detail");
  os << buf;
  int passed = 0;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-6s  %s\n", static_cast<int>(w), r.suite.c_str(),
                  r.ok ? "pass" : "FAIL", r.detail.c_str());
    os << buf;
    passed += r.ok ? 1 : 0;
  }
  os << passed << "/" << rows.size() << " suites passed\n";
}

}  // namespace cbfed
