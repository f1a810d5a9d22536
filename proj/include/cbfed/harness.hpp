// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cbfed {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitRegime = 4,
  kExitVerifyFailed = 5,
};

// Maps the currently handled exception to an exit code (call inside catch).
int exit_code_for_current_exception();

nlohmann::json default_config();
// defaults <- file contents <- overrides; unknown keys are rejected.
nlohmann::json resolve_config(const nlohmann::json& user);
// Sets a dotted key ("params.r") to a JSON-parsed value (raw string fallback).
void apply_override(nlohmann::json& cfg, const std::string& assignment);

// FNV-1a over the canonical dump, output_dir excluded.
std::uint64_t config_hash(const nlohmann::json& resolved);
std::string hash_hex(std::uint64_t h);

// Runs one experiment kind with a resolved config, writing into
// <output_dir>/<hash>/ and returning the JSON report (also written).
nlohmann::json run_experiment(const std::string& kind, const nlohmann::json& resolved,
                              std::ostream& log);

nlohmann::json report_decay(const std::string& csv_path, double delta_claim, double window = 0.5,
                            double tol = 0.0);

struct VerifyRow {
  std::string suite;
  bool ok = false;
  std::string detail;
};

// Built-in property suites; when dir is given also cross-checks the config
// hashes embedded in every emitted file under it.
std::vector<VerifyRow> run_verify(const std::optional<std::string>& dir);
void print_verify_table(const std::vector<VerifyRow>& rows, std::ostream& os);

}  // namespace cbfed
