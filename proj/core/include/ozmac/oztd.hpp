// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ozmac/types.hpp"

namespace ozmac {

// OZTD quantized tensor dump, little-endian:
//
//   offset  size      field
//   0       4         magic "OZTD"
//   4       2         version (u16) = 1
//   6       1         dtype_bits (u8): 4, 8 or 16
//   7       1         signedness (u8): 0 = unsigned, 1 = two's complement
//   8       4         ndim (u32)
//   12      8*ndim    dims (u64 each)
//   ...     n*w       payload, w = ceil(dtype_bits / 8) bytes per element,
//                     two's complement little-endian. 4-bit elements use one
//                     byte with the high nibble zero.
//
// No trailing bytes are allowed after the payload.

inline constexpr std::uint16_t kOztdVersion = 1;

struct TensorFile {
  int dtype_bits = 8;
  Signedness signedness = Signedness::TwosComplement;
  std::vector<std::uint64_t> dims;
  std::vector<std::int64_t> values;  // row-major

  std::uint64_t element_count() const noexcept;

  /// Values as validated operands of this tensor's width and signedness.
  std::vector<Operand> operands(Role role = Role::Weight) const;

  friend bool operator==(const TensorFile&, const TensorFile&) = default;
};

/// Strict parse of a complete OZTD image. Throws Error with BadMagic,
/// UnsupportedVersion, MalformedHeader, DimMismatch or ValueOutOfRange.
TensorFile parse_tensor(std::span<const std::byte> bytes);

/// Throws Error{ValueOutOfRange} / Error{DimMismatch} if `tensor` violates
/// its own invariants.
std::vector<std::byte> serialize_tensor(const TensorFile& tensor);

TensorFile load_tensor(const std::filesystem::path& path);
void save_tensor(const std::filesystem::path& path, const TensorFile& tensor);

}  // namespace ozmac
