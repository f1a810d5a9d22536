// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbfed/errors.hpp"
#include "cbfed/harness.hpp"

namespace {

nlohmann::json load_config(const std::string& path, const std::vector<std::string>& sets,
                           const std::string& out) {
  nlohmann::json user = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw cbfed::ConfigError("cannot read config file " + path);
    try {
      user = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
      throw cbfed::ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  for (const auto& s : sets) cbfed::apply_override(user, s);
  if (!out.empty()) user["output_dir"] = out;
  return cbfed::resolve_config(user);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cbfed: simulation and feedback stabilization on the periodic torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> sets;
  const std::vector<std::string> kinds = {"stationary",       "simulate",
                                          "stabilize-theta",  "stabilize-galerkin",
                                          "stabilize-proportional", "eigen",
                                          "reduce",           "constants"};
  std::vector<CLI::App*> runs;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(k, "run the " + k + " experiment");
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-s,--set", sets, "override a config key, e.g. params.r=5");
    sub->add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
    runs.push_back(sub);
  }

  std::string verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("-d,--dir", verify_dir, "cross-check config hashes of files under this directory");

  std::string csv;
  double delta_claim = 0.0, window = 0.5, tol = 0.0;
  CLI::App* decay = app.add_subcommand("report-decay", "fit a decay rate to a trajectory CSV");
  decay->add_option("--csv", csv, "trajectory CSV")->required();
  decay->add_option("--delta-claim", delta_claim, "claimed rate")->required();
  decay->add_option("--window", window, "trailing window fraction for the fit");
  decay->add_option("--tol", tol, "relative slack on the pointwise bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cbfed::kExitConfig;
  }

  try {
    if (verify->parsed()) {
      auto rows = cbfed::run_verify(verify_dir.empty() ? std::nullopt
                                                       : std::optional<std::string>(verify_dir));
      cbfed::print_verify_table(rows, std::cout);
      for (const auto& r : rows)
        if (!r.ok) return cbfed::kExitVerifyFailed;
      return cbfed::kExitOk;
    }
    if (decay->parsed()) {
      std::cout << cbfed::report_decay(csv, delta_claim, window, tol).dump(2) << "\n";
      return cbfed::kExitOk;
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (!runs[i]->parsed()) continue;
      auto cfg = load_config(config_path, sets, out_dir);
      auto report = cbfed::run_experiment(kinds[i], cfg, std::cerr);
      std::cout << report.dump(2) << "\n";
      return cbfed::kExitOk;
    }
  } catch (const std::exception& e) {
    const int rc = cbfed::exit_code_for_current_exception();
    std::cerr << "error: " << e.what() << "\n";
    return rc;
  } catch (...) {
    return cbfed::kExitInternal;
  }
  return cbfed::kExitInternal;
}
