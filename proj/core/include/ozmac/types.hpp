// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ozmac {

enum class Signedness { Unsigned, TwosComplement };
enum class Role { Weight, Activation };
enum class MacUnit { OzMac, BMac };

std::string_view to_string(Signedness s) noexcept;
std::string_view to_string(Role r) noexcept;
std::string_view to_string(MacUnit u) noexcept;
MacUnit parse_mac_unit(std::string_view name);

/// Operand widths supported by every module: 4, 8 and 16 bits.
bool is_supported_width(int bits) noexcept;

/// Extra accumulator bits on top of weight_bits + activation_bits.
inline constexpr int kGuardBits = 16;

/// Smallest and largest value representable in `bits` under `s`.
std::int64_t min_value(int bits, Signedness s) noexcept;
std::int64_t max_value(int bits, Signedness s) noexcept;

/// Weight/activation widths of one MAC design point. Immutable once built.
///
/// The Oz-encoded operand is always the narrower one; on a tie the weight is
/// encoded.
class PrecisionConfig {
 public:
  /// Throws Error{UnsupportedWidth} unless both widths are 4, 8 or 16.
  PrecisionConfig(int weight_bits, int activation_bits,
                  Signedness signedness = Signedness::TwosComplement);

  /// Parses "WxA", e.g. "8x16".
  static PrecisionConfig parse(std::string_view text,
                               Signedness signedness = Signedness::TwosComplement);

  int weight_bits() const noexcept { return weight_bits_; }
  int activation_bits() const noexcept { return activation_bits_; }
  Signedness signedness() const noexcept { return signedness_; }

  Role encoded_side() const noexcept {
    return weight_bits_ <= activation_bits_ ? Role::Weight : Role::Activation;
  }
  int encoded_bits() const noexcept {
    return encoded_side() == Role::Weight ? weight_bits_ : activation_bits_;
  }
  int bits_of(Role r) const noexcept {
    return r == Role::Weight ? weight_bits_ : activation_bits_;
  }
  int accumulator_width() const noexcept {
    return weight_bits_ + activation_bits_ + kGuardBits;
  }

  /// "WxA"
  std::string label() const;

  friend bool operator==(const PrecisionConfig&, const PrecisionConfig&) = default;

 private:
  int weight_bits_;
  int activation_bits_;
  Signedness signedness_;
};

/// A range-checked integer input to a MAC. Only validate_operand builds one.
class Operand {
 public:
  std::int64_t value() const noexcept { return value_; }
  int bits() const noexcept { return bits_; }
  Signedness signedness() const noexcept { return signedness_; }
  Role role() const noexcept { return role_; }

  /// |value| widened past the operand width, so |-2^(bits-1)| is exact.
  std::uint32_t magnitude() const noexcept {
    return static_cast<std::uint32_t>(value_ < 0 ? -value_ : value_);
  }
  bool negative() const noexcept { return value_ < 0; }

  friend bool operator==(const Operand&, const Operand&) = default;

 private:
  friend Operand validate_operand(std::int64_t, int, Signedness, Role);
  Operand(std::int64_t value, int bits, Signedness s, Role role)
      : value_(value), bits_(bits), signedness_(s), role_(role) {}

  std::int64_t value_;
  int bits_;
  Signedness signedness_;
  Role role_;
};

/// Throws Error{UnsupportedWidth} for bad widths and Error{OutOfRange} when
/// `value` is not representable. The range check is exact.
Operand validate_operand(std::int64_t value, int bits,
                         Signedness signedness = Signedness::TwosComplement,
                         Role role = Role::Weight);

/// Two's complement accumulator register. Overflow raises
/// Error{AccumulatorOverflow}; it never wraps.
class AccumulatorState {
 public:
  AccumulatorState(std::int64_t value, int width);

  static AccumulatorState zero(const PrecisionConfig& cfg) {
    return AccumulatorState(0, cfg.accumulator_width());
  }

  std::int64_t value() const noexcept { return value_; }
  int width() const noexcept { return width_; }

  AccumulatorState add(std::int64_t addend) const;

  friend bool operator==(const AccumulatorState&, const AccumulatorState&) = default;

 private:
  std::int64_t value_;
  int width_;
};

}  // namespace ozmac
