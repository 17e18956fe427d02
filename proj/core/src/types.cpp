// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/types.hpp"

#include <charconv>

#include <fmt/format.h>

#include "ozmac/error.hpp"

namespace ozmac {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedWidth: return "UnsupportedWidth";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::AccumulatorOverflow: return "AccumulatorOverflow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::MixedDtype: return "MixedDtype";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::NonPositiveBaseline: return "NonPositiveBaseline";
    case ErrorCode::UnknownConfig: return "UnknownConfig";
    case ErrorCode::MissingRecord: return "MissingRecord";
    case ErrorCode::BadCalibration: return "BadCalibration";
  }
  return "Unknown";
}

std::string_view to_string(Signedness s) noexcept {
  return s == Signedness::Unsigned ? "unsigned" : "twos_complement";
}

std::string_view to_string(Role r) noexcept {
  return r == Role::Weight ? "weight" : "activation";
}

std::string_view to_string(MacUnit u) noexcept {
  return u == MacUnit::OzMac ? "ozmac" : "bmac";
}

MacUnit parse_mac_unit(std::string_view name) {
  if (name == "ozmac") return MacUnit::OzMac;
  if (name == "bmac") return MacUnit::BMac;
  throw Error(ErrorCode::OutOfRange, fmt::format("unknown MAC unit '{}'", name));
}

bool is_supported_width(int bits) noexcept {
  return bits == 4 || bits == 8 || bits == 16;
}

std::int64_t min_value(int bits, Signedness s) noexcept {
  return s == Signedness::Unsigned ? 0 : -(std::int64_t{1} << (bits - 1));
}

std::int64_t max_value(int bits, Signedness s) noexcept {
  return s == Signedness::Unsigned ? (std::int64_t{1} << bits) - 1
                                   : (std::int64_t{1} << (bits - 1)) - 1;
}

namespace {

void require_width(int bits, std::string_view what) {
  if (!is_supported_width(bits)) {
    throw Error(ErrorCode::UnsupportedWidth,
                fmt::format("{} width {} is not one of 4, 8, 16", what, bits));
  }
}

}  // namespace

PrecisionConfig::PrecisionConfig(int weight_bits, int activation_bits,
                                 Signedness signedness)
    : weight_bits_(weight_bits), activation_bits_(activation_bits),
      signedness_(signedness) {
  require_width(weight_bits, "weight");
  require_width(activation_bits, "activation");
}

PrecisionConfig PrecisionConfig::parse(std::string_view text, Signedness signedness) {
  const auto sep = text.find_first_of("xX");
  int w = 0;
  int a = 0;
  bool ok = sep != std::string_view::npos;
  if (ok) {
    const auto lhs = text.substr(0, sep);
    const auto rhs = text.substr(sep + 1);
    auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), w);
    auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), a);
    ok = r1.ec == std::errc{} && r1.ptr == lhs.data() + lhs.size() &&
         r2.ec == std::errc{} && r2.ptr == rhs.data() + rhs.size();
  }
  if (!ok) {
    throw Error(ErrorCode::UnsupportedWidth,
                fmt::format("bad precision '{}', expected WxA such as 8x8", text));
  }
  return PrecisionConfig(w, a, signedness);
}

std::string PrecisionConfig::label() const {
  return fmt::format("{}x{}", weight_bits_, activation_bits_);
}

Operand validate_operand(std::int64_t value, int bits, Signedness signedness, Role role) {
  require_width(bits, to_string(role));
  if (value < min_value(bits, signedness) || value > max_value(bits, signedness)) {
    throw Error(ErrorCode::OutOfRange,
                fmt::format("OutOfRange: {} does not fit in {} bits ({})", value, bits,
                            to_string(signedness)));
  }
  return Operand(value, bits, signedness, role);
}

AccumulatorState::AccumulatorState(std::int64_t value, int width)
    : value_(value), width_(width) {
  if (width < 2 || width > 63) {
    throw Error(ErrorCode::UnsupportedWidth,
                fmt::format("accumulator width {} outside [2, 63]", width));
  }
  const std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
  const std::int64_t lo = -(std::int64_t{1} << (width - 1));
  if (value < lo || value > hi) {
    throw Error(ErrorCode::AccumulatorOverflow,
                fmt::format("AccumulatorOverflow: {} does not fit a {}-bit accumulator",
                            value, width));
  }
}

AccumulatorState AccumulatorState::add(std::int64_t addend) const {
  // |value|, |addend| < 2^62 for every supported width, so the sum is exact.
  return AccumulatorState(value_ + addend, width_);
}

}  // namespace ozmac
