// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>

#include "cbfed/errors.hpp"
#include "cbfed/grid.hpp"

namespace cbfed {
namespace {

constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("truncated snapshot");
  return v;
}

// Resolved wavevectors in lexicographic order, as flat indices on the n-grid.
std::vector<std::size_t> lexicographic_modes(int d, int n) {
  std::vector<std::size_t> out;
  const int kmax = n / 2 - 1;
  IVec k{0, 0, 0};
  std::function<void(int)> rec = [&](int a) {
    if (a == d) {
      out.push_back(flat_index(k, d, n));
      return;
    }
    for (int v = -kmax; v <= kmax; ++v) {
      k[a] = v;
      rec(a + 1);
    }
    k[a] = 0;
  };
  rec(0);
  return out;
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralField& u,
                    std::optional<std::uint64_t> config_hash) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  const TorusGrid& g = u.grid();
  const auto modes = lexicographic_modes(g.d, g.n);
  os.write("CBFD", 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.d));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n));
  put<double>(os, g.length);
  put<std::uint64_t>(os, modes.size());
  for (int c = 0; c < g.d; ++c)
    for (std::size_t i : modes) {
      put<double>(os, u.at(c, i).real());
      put<double>(os, u.at(c, i).imag());
    }
  if (config_hash) {
    os.write("HASH", 4);
    put<std::uint64_t>(os, *config_hash);
  }
  if (!os) throw Error("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CBFD", 4) != 0) throw Error("not a field snapshot");
  if (get<std::uint32_t>(is) != kVersion) throw Error("unsupported snapshot version");
  int d = static_cast<int>(get<std::uint32_t>(is));
  int n = static_cast<int>(get<std::uint32_t>(is));
  double L = get<double>(is);
  TorusGrid g(d, n, L);
  const auto modes = lexicographic_modes(d, n);
  if (get<std::uint64_t>(is) != modes.size()) throw Error("snapshot mode count mismatch");
  Snapshot s{SpectralField(g), std::nullopt};
  for (int c = 0; c < d; ++c)
    for (std::size_t i : modes) {
      double re = get<double>(is);
      double im = get<double>(is);
      s.field.at(c, i) = Complex(re, im);
    }
  char tag[4];
  is.read(tag, 4);
  if (is && std::memcmp(tag, "HASH", 4) == 0) s.config_hash = get<std::uint64_t>(is);
  return s;
}

}  // namespace cbfed
