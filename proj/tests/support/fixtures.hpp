// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ozmac/oztd.hpp"

namespace ozmac::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ozmac_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Reference popcount, written as a plain bit loop so it shares nothing with
/// the library's std::popcount path.
inline int naive_popcount(std::int64_t v) {
  std::uint64_t m = static_cast<std::uint64_t>(v < 0 ? -v : v);
  int n = 0;
  for (int i = 0; i < 64; ++i) n += static_cast<int>((m >> i) & 1u);
  return n;
}

/// Reference set-bit positions of |v|, MSB first.
inline std::vector<int> naive_positions(std::int64_t v) {
  std::uint64_t m = static_cast<std::uint64_t>(v < 0 ? -v : v);
  std::vector<int> out;
  for (int i = 63; i >= 0; --i) {
    if ((m >> i) & 1u) out.push_back(i);
  }
  return out;
}

/// Smallest magnitude with exactly k set bits.
inline std::int64_t low_ones(int k) { return (std::int64_t{1} << k) - 1; }

/// 8-bit two's complement tensor of `count` values whose magnitudes have
/// exactly `total_ones` set bits in total, spread as evenly as possible
/// (every value has floor or ceil of total_ones / count bits). Signs and
/// bit placements are shuffled with `seed`.
inline TensorFile synthetic_int8(std::uint64_t count, std::uint64_t total_ones,
                                 std::uint32_t seed = 7) {
  std::mt19937 rng(seed);
  const std::uint64_t base = total_ones / count;
  const std::uint64_t extra = total_ones % count;
  TensorFile t;
  t.dtype_bits = 8;
  t.signedness = Signedness::TwosComplement;
  t.dims = {count};
  for (std::uint64_t i = 0; i < count; ++i) {
    const int k = static_cast<int>(base + (i < extra ? 1 : 0));
    // Scatter k ones over bits 0..6 so the value stays within int8.
    std::vector<int> bits{0, 1, 2, 3, 4, 5, 6};
    std::shuffle(bits.begin(), bits.end(), rng);
    std::int64_t v = 0;
    for (int b = 0; b < k; ++b) v |= std::int64_t{1} << bits[static_cast<std::size_t>(b)];
    if (rng() & 1u) v = -v;
    t.values.push_back(v);
  }
  std::shuffle(t.values.begin(), t.values.end(), rng);
  return t;
}

inline TensorFile make_tensor(int bits, Signedness s, std::vector<std::uint64_t> dims,
                              std::vector<std::int64_t> values) {
  TensorFile t;
  t.dtype_bits = bits;
  t.signedness = s;
  t.dims = std::move(dims);
  t.values = std::move(values);
  return t;
}

}  // namespace ozmac::testing
