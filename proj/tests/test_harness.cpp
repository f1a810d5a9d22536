// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cbfed/errors.hpp"
#include "cbfed/harness.hpp"

using namespace cbfed;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("cbfed_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CBFED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json small_sim(const fs::path& out) {
  json c = {{"grid", {{"n", 16}}},
            {"integrator", {{"dt", 0.02}, {"t_final", 1.0}, {"sample_stride", 5}}},
            {"output_dir", out.string()}};
  return resolve_config(c);
}

void write_csv(const fs::path& p, const std::string& body) {
  std::ofstream os(p);
  os << "# config_hash=00000000000000aa\n"
     << "t,norm_H,norm_gradH,norm_V,norm_Lr1,dist_K,norm_u,energy_defect\n"
     << body;
}

}  // namespace

TEST(Config, DefaultsResolve) {
  json c = resolve_config(json::object());
  EXPECT_EQ(c["grid"]["d"], 2);
  EXPECT_EQ(c["grid"]["n"], 32);
  EXPECT_DOUBLE_EQ(c["params"]["r"].get<double>(), 5.0);
  EXPECT_EQ(c["integrator"]["scheme"], "imex_euler");
  EXPECT_EQ(c, resolve_config(c));
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(resolve_config(json{{"gird", {{"n", 8}}}}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"params", {{"rr", 3}}}}), ConfigError);
  EXPECT_THROW(resolve_config(json{{"integrator", {{"stepsize", 0.1}}}}), ConfigError);
}

TEST(Config, Overrides) {
  json c = default_config();
  apply_override(c, "params.r=3.5");
  apply_override(c, "integrator.scheme=cnab2");
  apply_override(c, "eigen.ladder=[5,10,20,40]");
  EXPECT_DOUBLE_EQ(c["params"]["r"].get<double>(), 3.5);
  EXPECT_EQ(c["integrator"]["scheme"], "cnab2");
  EXPECT_EQ(c["eigen"]["ladder"].size(), 4u);
  EXPECT_THROW(apply_override(c, "no_equals_sign"), ConfigError);
}

TEST(Config, HashStableAndIgnoresOutputDir) {
  json a = resolve_config(json::object());
  json b = a;
  b["output_dir"] = "/somewhere/else";
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(hash_hex(config_hash(a)).size(), 16u);
  b["params"]["mu"] = 1.5;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Experiment, SimulateIsDeterministic) {
  const fs::path out = scratch("det");
  json c = small_sim(out);
  std::ostringstream log;
  run_experiment("simulate", c, log);
  const fs::path dir = out / hash_hex(config_hash(c));
  const std::string first = slurp(dir / "trajectory.csv");
  ASSERT_FALSE(first.empty());
  EXPECT_EQ(first.rfind("# config_hash=" + hash_hex(config_hash(c)), 0), 0u);
  run_experiment("simulate", c, log);
  EXPECT_EQ(first, slurp(dir / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "final.bin"));
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_THROW(run_experiment("bogus", c, log), ConfigError);
}

TEST(Experiment, ConstantsReport) {
  const fs::path out = scratch("const");
  json c = resolve_config(json{{"output_dir", out.string()}});
  std::ostringstream log;
  json r = run_experiment("constants", c, log);
  EXPECT_NEAR(r["varrho_half"].get<double>(), 0.5, 1e-15);
  EXPECT_EQ(r["config_hash"], hash_hex(config_hash(c)));
}

TEST(Experiment, ThetaRunMeetsItsBound) {
  const fs::path out = scratch("theta");
  json c = resolve_config(json{{"grid", {{"n", 16}}},
                               {"params", {{"gamma", -0.1}}},
                               {"set", {{"type", "ball"}, {"radius", 1.0}}},
                               {"controller", {{"type", "theta"}, {"delta1_target", 0.5}}},
                               {"integrator", {{"dt", 0.01}, {"t_final", 4.0}}},
                               {"output_dir", out.string()}});
  std::ostringstream log;
  json r = run_experiment("stabilize-theta", c, log);
  EXPECT_TRUE(r["invariance_ok"].get<bool>());
  EXPECT_TRUE(r["pointwise_ok"].get<bool>());
  const fs::path csv = out / hash_hex(config_hash(c)) / "trajectory.csv";
  json d = report_decay(csv.string(), r["delta1"].get<double>(), 0.5, 0.1);
  EXPECT_TRUE(d["pointwise_ok"].get<bool>());
  EXPECT_GE(d["delta_fit"].get<double>(), r["delta1"].get<double>());
  // The whole output tree carries consistent hashes.
  for (const VerifyRow& row : run_verify(out.string()))
    if (row.suite.find("hash") != std::string::npos) EXPECT_TRUE(row.ok) << row.detail;
}

TEST(ReportDecay, SyntheticSeries) {
  const fs::path dir = scratch("decay");
  std::string exp_body, flat_body;
  char buf[256];
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.05 * i;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,0,0,0,0,0,0\n", t, std::exp(-t));
    exp_body += buf;
    std::snprintf(buf, sizeof buf, "%.17g,1,0,0,0,0,0,0\n", t);
    flat_body += buf;
  }
  write_csv(dir / "exp.csv", exp_body);
  write_csv(dir / "flat.csv", flat_body);
  json e = report_decay((dir / "exp.csv").string(), 1.0);
  EXPECT_NEAR(e["delta_fit"].get<double>(), 1.0, 1e-9);
  EXPECT_TRUE(e["pointwise_ok"].get<bool>());
  EXPECT_EQ(e["config_hash"], "00000000000000aa");
  json f = report_decay((dir / "flat.csv").string(), 0.1);
  EXPECT_NEAR(f["delta_fit"].get<double>(), 0.0, 1e-12);
  EXPECT_FALSE(f["pointwise_ok"].get<bool>());
}

TEST(ReportDecay, MalformedInput) {
  const fs::path dir = scratch("bad");
  write_csv(dir / "bad.csv", "0,1,0,0,0,0,0,0\n0.1,abc,0,0,0,0,0,0\n");
  EXPECT_THROW(report_decay((dir / "bad.csv").string(), 1.0), ConfigError);
  EXPECT_THROW(report_decay((dir / "missing.csv").string(), 1.0), ConfigError);
}

TEST(Verify, BuiltInSuitesPass) {
  const auto rows = run_verify(std::nullopt);
  EXPECT_GE(rows.size(), 10u);
  for (const VerifyRow& r : rows) EXPECT_TRUE(r.ok) << r.suite << ": " << r.detail;
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("cli");
  const std::string o = " -o " + out.string();
  EXPECT_EQ(run_cli("constants" + o), 0);
  EXPECT_EQ(run_cli("constants -s params.nonsense=1" + o), 2);
  EXPECT_EQ(run_cli("constants -c " + (out / "missing.json").string() + o), 2);
  {
    std::ofstream bad(out / "bad.json");
    bad << "{ not json";
  }
  EXPECT_EQ(run_cli("constants -c " + (out / "bad.json").string() + o), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli("simulate -s params.alpha=-1" + o), 2);
  // Explicit convection with a huge state and step blows up.
  EXPECT_EQ(run_cli("simulate -s grid.n=16 -s initial.amplitude=1000 -s integrator.dt=0.5 "
                    "-s integrator.t_final=20" + o),
            3);
  EXPECT_EQ(run_cli("stabilize-galerkin -s params.r=5 -s params.q=2 -s params.gamma=-1" + o), 4);
  EXPECT_EQ(run_cli("report-decay --csv " + (out / "missing.csv").string() + " --delta-claim 1"), 2);
}
