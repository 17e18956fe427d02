// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ozmac/types.hpp"

namespace ozmac {

/// A single set bit of the encoded operand, as presented to the shifter.
struct OneHotTerm {
  std::uint32_t mask;  // == 1u << position
  int position;        // 0 = LSB

  friend bool operator==(const OneHotTerm&, const OneHotTerm&) = default;
};

/// Sign-magnitude Oz-encoding of one operand: one term per set bit of the
/// magnitude, MSB first. A zero operand encodes to an empty stream.
struct EncodedStream {
  std::vector<OneHotTerm> terms;
  bool negative = false;
  int source_bits = 0;

  friend bool operator==(const EncodedStream&, const EncodedStream&) = default;
};

EncodedStream oz_encode(const Operand& op);

/// (negative ? -1 : +1) * sum(2^position)
std::int64_t oz_decode(const EncodedStream& stream);

/// Number of OzMAC compute cycles for `op`: popcount(|value|).
int cycle_count(const Operand& op) noexcept;

/// Cycle-by-cycle view of the encoder: tracks the current and the next set
/// bit of the magnitude and hands out one one-hot term per clock.
class OzEncoderFsm {
 public:
  OzEncoderFsm() = default;
  explicit OzEncoderFsm(const Operand& op) { load(op); }

  void load(const Operand& op) noexcept;

  bool done() const noexcept { return !current_.has_value(); }
  bool negative() const noexcept { return negative_; }

  /// Term for this cycle, then advance. Empty once the stream is exhausted.
  std::optional<OneHotTerm> step() noexcept;

 private:
  static std::optional<int> highest_set(std::uint32_t bits) noexcept;

  std::uint32_t remaining_ = 0;
  std::optional<int> current_;
  std::optional<int> next_;
  bool negative_ = false;
};

}  // namespace ozmac
