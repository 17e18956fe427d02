// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ozmac/encoder.hpp"
#include "ozmac/types.hpp"

namespace ozmac {

/// One accumulator update. For OzMAC, `addend` is the non-encoded operand
/// shifted by `term_position` with the encoded operand's sign applied; for
/// bMAC it is the full product and `term_position` is -1.
struct MacEvent {
  std::int64_t cycle_index;
  int term_position;
  std::int64_t addend;
  std::int64_t accumulator_after;

  friend bool operator==(const MacEvent&, const MacEvent&) = default;
};

struct MacTrace {
  std::int64_t result = 0;
  std::int64_t cycles = 0;
  std::vector<MacEvent> events;
  PrecisionConfig config{8, 8};
};

/// Single bit-serial OzMAC datapath: Oz-encoder FSM, one-hot shifter and
/// accumulator register. Each tick() is one clock.
class OzMacUnit {
 public:
  OzMacUnit(PrecisionConfig cfg, AccumulatorState acc);

  /// Latch a new operand pair. Both operands are checked against the config.
  void load(const Operand& weight, const Operand& activation);

  bool busy() const noexcept { return !encoder_.done(); }

  /// Advance one clock. Returns the accumulator update performed, or nothing
  /// when the unit is idle (idle clocks are not counted).
  std::optional<MacEvent> tick();

  const AccumulatorState& accumulator() const noexcept { return acc_; }
  std::int64_t cycles() const noexcept { return cycles_; }
  const PrecisionConfig& config() const noexcept { return cfg_; }

 private:
  PrecisionConfig cfg_;
  AccumulatorState acc_;
  OzEncoderFsm encoder_;
  std::int64_t shifted_operand_ = 0;
  std::int64_t cycles_ = 0;
};

MacTrace ozmac_compute(const Operand& weight, const Operand& activation,
                       const AccumulatorState& acc_in, const PrecisionConfig& cfg);

MacTrace bmac_compute(const Operand& weight, const Operand& activation,
                      const AccumulatorState& acc_in, const PrecisionConfig& cfg);

struct DotProductResult {
  std::int64_t result = 0;
  std::int64_t total_cycles = 0;
};

/// Sequential dot product on one unit; the accumulator threads through every
/// pair with no overlap between pairs. When `traces` is non-null the per-pair
/// traces are appended to it.
DotProductResult dot_product(std::span<const Operand> weights,
                             std::span<const Operand> activations,
                             const PrecisionConfig& cfg, MacUnit unit,
                             std::vector<MacTrace>* traces = nullptr);

/// Mean OzMAC cycles per weight, i.e. the mean popcount of |w|.
/// Throws Error{EmptyInput} on an empty list.
double average_cycles(std::span<const Operand> weights);

/// JSON-lines trace dump: one object per event with keys cycle_index,
/// position, addend, accumulator_after. `cycle_offset` is added to every
/// cycle_index so consecutive traces can share one timeline.
void write_trace_jsonl(std::ostream& out, const MacTrace& trace,
                       std::int64_t cycle_offset = 0);

}  // namespace ozmac
