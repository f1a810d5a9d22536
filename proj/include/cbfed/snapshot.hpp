// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cbfed/field.hpp"

namespace cbfed {

// Layout: "CBFD", u32 version, u32 d, u32 N, f64 L, u64 mode count, then for
// each component the (re, im) f64 pairs of every resolved wavevector
// (|k_i| <= N/2 - 1) in lexicographic order of (k_1, ..., k_d). All little
// endian. An optional trailer "HASH" + u64 carries the producing config hash.
struct Snapshot {
  SpectralField field;
  std::optional<std::uint64_t> config_hash;
};

void write_snapshot(const std::string& path, const SpectralField& u,
                    std::optional<std::uint64_t> config_hash = std::nullopt);
Snapshot read_snapshot(const std::string& path);

}  // namespace cbfed
