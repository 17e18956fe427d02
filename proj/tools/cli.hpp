// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ozmac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitMissingCalibration = 3;

/// Column schema of each tabular subcommand; CSV headers and JSON object
/// keys are exactly these names, in this order.
const std::vector<std::string>& encode_columns();
const std::vector<std::string>& simulate_columns();
const std::vector<std::string>& profile_columns();
const std::vector<std::string>& ppa_table_columns();
const std::vector<std::string>& ppa_curve_columns();
const std::vector<std::string>& ppa_iso_columns();

/// Runs the tool. `args` excludes the program name. `out_is_terminal`
/// selects the default output format (text table vs CSV).
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        bool out_is_terminal = false);

}  // namespace ozmac::cli
