// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ozmac {

enum class ErrorCode {
  // operand and configuration validation
  UnsupportedWidth,
  OutOfRange,
  ConfigMismatch,
  AccumulatorOverflow,
  LengthMismatch,
  EmptyInput,
  // OZTD tensor files and manifests
  Io,
  BadMagic,
  UnsupportedVersion,
  MalformedHeader,
  DimMismatch,
  ValueOutOfRange,
  MixedDtype,
  BadManifest,
  // analytical model
  NegativeInput,
  NonPositivePower,
  NonPositiveFrequency,
  NonPositiveInput,
  NonPositiveBaseline,
  UnknownConfig,
  MissingRecord,
  BadCalibration,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported with this exception type. The code is
/// stable and is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ozmac
