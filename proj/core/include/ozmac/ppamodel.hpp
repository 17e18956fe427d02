// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ozmac/types.hpp"

namespace ozmac {

/// One measured (or derived) design point. Power is a single average figure
/// with dynamic and leakage power fused.
struct PpaRecord {
  MacUnit unit = MacUnit::BMac;
  int weight_bits = 8;
  int activation_bits = 8;
  double freq_ghz = 0.5;
  std::optional<double> area_um2;  // not every measurement reports area
  double power_mw = 0.0;
  double latency_ns = 0.0;
  double energy_pj = 0.0;
  std::string provenance;

  double period_ns() const noexcept { return 1.0 / freq_ghz; }
  /// latency * frequency; 1 for bMAC, mean Oz cycles per MAC for OzMAC.
  double avg_cycles() const noexcept { return latency_ns * freq_ghz; }
  /// |energy - power * latency| / energy
  double energy_consistency_error() const noexcept;
};

/// Read-only set of calibration records.
class CalibrationTable {
 public:
  CalibrationTable() = default;
  explicit CalibrationTable(std::vector<PpaRecord> records);

  /// The TSMC N5 post-synthesis numbers compiled into the library.
  static const CalibrationTable& embedded();

  /// JSON array of PpaRecord objects (snake_case field names, unit is
  /// "ozmac" or "bmac", area_um2 may be null). Throws Error{BadCalibration}.
  static CalibrationTable from_json(std::string_view text);
  static CalibrationTable load(const std::filesystem::path& path);
  std::string to_json() const;

  std::span<const PpaRecord> records() const noexcept { return records_; }

  const PpaRecord* find(MacUnit unit, int weight_bits, int activation_bits,
                        double freq_ghz) const noexcept;
  /// Throws Error{MissingRecord}.
  const PpaRecord& require(MacUnit unit, int weight_bits, int activation_bits,
                           double freq_ghz) const;

  /// Configs with records for both units at `freq_ghz`, ordered by
  /// (weight_bits, activation_bits).
  std::vector<PrecisionConfig> configs_at(double freq_ghz) const;

 private:
  std::vector<PpaRecord> records_;
};

/// power_mw * cycles * period_ns, in pJ. Throws Error{NegativeInput}.
double energy_per_mac(double power_mw, double cycles, double period_ns);

/// Minimum bit sparsity at which OzMAC energy drops below bMAC energy:
/// 1 - (p_bmac / p_ozmac) / bits, clamped to [0, 1].
/// Throws Error{NonPositivePower} when p_ozmac <= 0 or bits <= 0.
double crossover_sparsity(double p_bmac_mw, double p_ozmac_mw, int bits);

struct EnergyPoint {
  double sparsity;
  double e_ozmac_pj;
  double e_bmac_pj;
};

/// Energy per MAC for both units over a sparsity grid. OzMAC spends
/// encoded_bits * (1 - s) cycles; its power is held at the calibrated value.
/// Throws Error{UnknownConfig} without records for cfg at freq_ghz, and
/// Error{OutOfRange} for sparsities outside [0, 1].
std::vector<EnergyPoint> energy_vs_sparsity(const CalibrationTable& calib,
                                            const PrecisionConfig& cfg, double freq_ghz,
                                            std::span<const double> sparsity_grid);

/// 0, step, 2*step, ... 1 (inclusive), computed as i / n to avoid drift.
std::vector<double> sparsity_grid(double step);

/// Re-clock a design point: power scales with frequency, latency inversely,
/// area and energy are unchanged. Throws Error{NonPositiveFrequency}.
PpaRecord scale_frequency(const PpaRecord& record, double new_freq_ghz);

/// Frequency at which avg_cycles take target_latency_ns.
/// Throws Error{NonPositiveInput}.
double iso_latency_frequency(double avg_cycles, double target_latency_ns);

/// 100 * (baseline - candidate) / baseline. Throws Error{NonPositiveBaseline}.
double improvement_pct(double baseline, double candidate);

/// Replace an OzMAC record's latency/energy with a workload's mean cycle
/// count (e.g. from a sparsity profile); `source` is appended to provenance.
PpaRecord with_avg_cycles(const PpaRecord& record, double avg_cycles,
                          std::string_view source);

/// bMAC vs OzMAC at one design point.
struct PpaComparison {
  PrecisionConfig config{8, 8};
  PpaRecord bmac;
  PpaRecord ozmac;
  std::optional<double> area_improvement_pct;
  double power_improvement_pct = 0.0;
  double energy_improvement_pct = 0.0;
  double latency_ratio = 0.0;  // ozmac / bmac

  int bits_product() const noexcept {
    return config.weight_bits() * config.activation_bits();
  }
};

PpaComparison compare(const PpaRecord& bmac, const PpaRecord& ozmac);

/// Comparison at (cfg, freq). If no record exists at freq_ghz and
/// `scale_from_ghz` is given, both units are re-clocked from that frequency.
/// Throws Error{MissingRecord}.
PpaComparison compare_at(const CalibrationTable& calib, const PrecisionConfig& cfg,
                         double freq_ghz,
                         std::optional<double> scale_from_ghz = std::nullopt);

/// Every calibrated precision at `freq_ghz`, ascending precision.
/// Throws Error{MissingRecord} when the table has no complete pair.
std::vector<PpaComparison> precision_sweep(const CalibrationTable& calib,
                                           double freq_ghz = 0.5);

/// OzMAC re-clocked so its mean latency equals the bMAC latency at the same
/// base frequency; the bMAC record is left unchanged.
struct IsoLatencyRow {
  PrecisionConfig config{8, 8};
  PpaRecord bmac;
  PpaRecord ozmac;  // scaled
  double power_improvement_pct = 0.0;
  double energy_improvement_pct = 0.0;
};

IsoLatencyRow iso_latency(const CalibrationTable& calib, const PrecisionConfig& cfg,
                          double base_freq_ghz = 0.5);

}  // namespace ozmac
